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

#include "lbr/client/guard.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lbr::client {

void CommandGuardConfig::validate() const {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (!(position_limits[i].first < position_limits[i].second))
      throw std::invalid_argument("guard: position min must be below max for joint " + std::to_string(i + 1));
    if (!(velocity_limits[i] > 0.0) || !(torque_limits[i] > 0.0))
      throw std::invalid_argument("guard: velocity and torque limits must be > 0");
  }
}

CommandGuardConfig CommandGuardConfig::from_variant(const model::RobotVariant& variant) {
  CommandGuardConfig cfg;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const auto& j = variant.joints[i];
    cfg.position_limits[i] = {j.lower, j.upper};
    cfg.velocity_limits[i] = j.velocity_limit;
    cfg.torque_limits[i] = j.torque_limit;
  }
  return cfg;
}

CommandGuardConfig CommandGuardConfig::tightened_by(const CommandGuardConfig& other) const {
  CommandGuardConfig out;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    out.position_limits[i] = {std::max(position_limits[i].first, other.position_limits[i].first),
                              std::min(position_limits[i].second, other.position_limits[i].second)};
    out.velocity_limits[i] = std::min(velocity_limits[i], other.velocity_limits[i]);
    out.torque_limits[i] = std::min(torque_limits[i], other.torque_limits[i]);
  }
  out.validate();
  return out;
}

CommandGuardConfig CommandGuardConfig::load(const std::filesystem::path& path, const CommandGuardConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open guard config " + path.string());
  const auto j = nlohmann::json::parse(in);
  constexpr double kDeg = std::numbers::pi / 180.0;
  CommandGuardConfig user = base;
  if (j.contains("position_limits_deg")) {
    const auto& lim = j.at("position_limits_deg");
    if (lim.size() != kNumJoints) throw std::invalid_argument("position_limits_deg needs 7 [min, max] pairs");
    for (std::size_t i = 0; i < kNumJoints; ++i)
      user.position_limits[i] = {lim[i].at(0).get<double>() * kDeg, lim[i].at(1).get<double>() * kDeg};
  }
  if (j.contains("velocity_limits_deg_s")) {
    const auto& v = j.at("velocity_limits_deg_s");
    if (v.size() != kNumJoints) throw std::invalid_argument("velocity_limits_deg_s needs 7 entries");
    for (std::size_t i = 0; i < kNumJoints; ++i) user.velocity_limits[i] = v[i].get<double>() * kDeg;
  }
  if (j.contains("torque_limits_nm")) {
    const auto& t = j.at("torque_limits_nm");
    if (t.size() != kNumJoints) throw std::invalid_argument("torque_limits_nm needs 7 entries");
    for (std::size_t i = 0; i < kNumJoints; ++i) user.torque_limits[i] = t[i].get<double>();
  }
  return base.tightened_by(user);
}

wire::CommandMessage guard_command(const wire::CommandMessage& cmd, const JointArray& previous_position,
                                   double sample_period, const CommandGuardConfig& cfg) {
  wire::CommandMessage out = cmd;
  if (out.joint_position) {
    auto& q = *out.joint_position;
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      const double step = cfg.velocity_limits[i] * sample_period;
      q[i] = std::clamp(q[i], previous_position[i] - step, previous_position[i] + step);
      q[i] = std::clamp(q[i], cfg.position_limits[i].first, cfg.position_limits[i].second);
    }
  }
  if (out.torque_overlay) {
    auto& t = *out.torque_overlay;
    for (std::size_t i = 0; i < kNumJoints; ++i) t[i] = std::clamp(t[i], -cfg.torque_limits[i], cfg.torque_limits[i]);
  }
  return out;
}

wire::CommandMessage CommandGuard::apply(const wire::CommandMessage& cmd, const JointArray& previous_position,
                                         double sample_period) {
  auto out = guard_command(cmd, previous_position, sample_period, cfg_);
  if (!(out == cmd)) ++clamp_count_;
  return out;
}

}  // namespace lbr::client
