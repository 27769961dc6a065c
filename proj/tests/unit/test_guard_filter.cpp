/*
 * Copyright (c) 2026 lbr-kit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "lbr/client/filter.hpp"
#include "lbr/client/guard.hpp"
#include "lbr/model/robot_model.hpp"

namespace lbr::client {
namespace {

const std::filesystem::path kConfigs = LBR_KIT_TEST_CONFIG_DIR;

CommandGuardConfig med7_guard() { return CommandGuardConfig::from_variant(model::load_variant("med7", kConfigs)); }

wire::CommandMessage position(const JointArray& q) {
  wire::CommandMessage c;
  c.joint_position = q;
  return c;
}

TEST(Guard, ClampsToJointLimit) {
  const auto cfg = med7_guard();
  JointArray prev{};
  prev[0] = 2.96;
  JointArray q = prev;
  q[0] = 3.1;
  const auto out = guard_command(position(q), prev, 0.005, cfg);
  EXPECT_NEAR((*out.joint_position)[0], 170.0 * std::numbers::pi / 180.0, 1e-12);
  EXPECT_NEAR((*out.joint_position)[0], 2.967, 1e-3);
}

TEST(Guard, StepCapFromVelocityLimit) {
  auto cfg = med7_guard();
  cfg.velocity_limits.fill(1.0);
  JointArray q{};
  q[0] = 0.1;
  const auto out = guard_command(position(q), JointArray{}, 0.005, cfg);
  EXPECT_DOUBLE_EQ((*out.joint_position)[0], 0.005);
}

TEST(Guard, TorqueOverlayClamped) {
  const auto cfg = med7_guard();
  wire::CommandMessage c;
  c.client_command_mode = CommandMode::TORQUE;
  c.joint_position = JointArray{};
  c.torque_overlay = JointArray{500, -500, 0, 0, 0, 50, -50};
  const auto out = guard_command(c, JointArray{}, 0.005, cfg);
  EXPECT_EQ(*out.torque_overlay, (JointArray{176, -176, 0, 0, 0, 40, -40}));
}

TEST(Guard, WrenchAndPosePassThrough) {
  const auto cfg = med7_guard();
  wire::CommandMessage c;
  c.client_command_mode = CommandMode::WRENCH;
  c.joint_position.reset();
  c.wrench_overlay = WrenchArray{1e6, 0, 0, 0, 0, 0};
  EXPECT_EQ(guard_command(c, JointArray{}, 0.005, cfg), c);
}

TEST(Guard, RandomStreamsStayInsideAndAreIdempotent) {
  const auto cfg = med7_guard();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> wild(-10.0, 10.0);
  JointArray prev{};
  for (int n = 0; n < 5000; ++n) {
    JointArray q;
    for (auto& v : q) v = wild(rng);
    const auto once = guard_command(position(q), prev, 0.005, cfg);
    const auto twice = guard_command(once, prev, 0.005, cfg);
    EXPECT_EQ(once, twice);
    const auto& g = *once.joint_position;
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      EXPECT_GE(g[i], cfg.position_limits[i].first);
      EXPECT_LE(g[i], cfg.position_limits[i].second);
      EXPECT_LE(std::abs(g[i] - prev[i]), cfg.velocity_limits[i] * 0.005 + 1e-15);
    }
    prev = g;
  }
}

TEST(Guard, ClampCount) {
  CommandGuard guard(med7_guard());
  guard.apply(position(JointArray{}), JointArray{}, 0.005);
  EXPECT_EQ(guard.clamp_count(), 0u);
  JointArray far{};
  far[2] = 1.0;
  guard.apply(position(far), JointArray{}, 0.005);
  EXPECT_EQ(guard.clamp_count(), 1u);
}

TEST(GuardConfig, TightenNeverLoosens) {
  const auto base = med7_guard();
  const auto dir = std::filesystem::temp_directory_path() / "lbr_kit_guard_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "guard.json";
  std::ofstream(path) << R"({"velocity_limits_deg_s": [10, 10, 10, 10, 10, 10, 500],
                             "position_limits_deg": [[-90, 90], [-200, 200], [-90, 90], [-90, 90], [-90, 90], [-90, 90], [-90, 90]]})";
  const auto cfg = CommandGuardConfig::load(path, base);
  EXPECT_NEAR(cfg.velocity_limits[0], 10.0 * std::numbers::pi / 180.0, 1e-12);
  EXPECT_EQ(cfg.velocity_limits[6], base.velocity_limits[6]);
  EXPECT_NEAR(cfg.position_limits[0].second, std::numbers::pi / 2, 1e-12);
  EXPECT_EQ(cfg.position_limits[1], base.position_limits[1]);
  EXPECT_EQ(cfg.torque_limits, base.torque_limits);

  std::ofstream(path) << R"({"torque_limits_nm": [1, 2, 3]})";
  EXPECT_THROW(CommandGuardConfig::load(path, base), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST(GuardConfig, Validation) {
  auto cfg = med7_guard();
  cfg.position_limits[3] = {1.0, -1.0};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = med7_guard();
  cfg.torque_limits[0] = 0.0;
  EXPECT_THROW(CommandGuard{cfg}, std::invalid_argument);
}

JointArray fill(double v) {
  JointArray a;
  a.fill(v);
  return a;
}

TEST(Filter, AlphaOneIsIdentity) {
  ExponentialFilter f(1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 0; n < 50; ++n) {
    const JointArray x = fill(u(rng));
    EXPECT_EQ(f.step(x), x);
  }
}

TEST(Filter, HalfRecurrence) {
  ExponentialFilter f(0.5);
  f.step(fill(0.0));
  EXPECT_DOUBLE_EQ(f.step(fill(1.0))[0], 0.5);
  EXPECT_DOUBLE_EQ(f.step(fill(1.0))[0], 0.75);
}

TEST(Filter, ConvergesToConstant) {
  ExponentialFilter f(0.5);
  f.step(fill(0.0));
  JointArray y{};
  for (int k = 0; k < 100; ++k) y = f.step(fill(2.0));
  EXPECT_LT(std::abs(y[4] - 2.0), 1e-9);
}

TEST(Filter, OutputInsideConvexHull) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5, 5);
  ExponentialFilter f(0.2);
  JointArray prev = f.step(fill(u(rng)));
  for (int n = 0; n < 1000; ++n) {
    JointArray x;
    for (auto& v : x) v = u(rng);
    const JointArray y = f.step(x);
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      EXPECT_GE(y[i], std::min(prev[i], x[i]) - 1e-15);
      EXPECT_LE(y[i], std::max(prev[i], x[i]) + 1e-15);
    }
    prev = y;
  }
}

TEST(Filter, ResetAndBadAlpha) {
  ExponentialFilter f(0.2);
  f.step(fill(1.0));
  f.reset();
  EXPECT_EQ(f.step(fill(3.0)), fill(3.0));
  EXPECT_THROW(ExponentialFilter(1.5), std::invalid_argument);
}

}  // namespace
}  // namespace lbr::client
