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

#include "lbr/model/kinematics.hpp"
#include "support/fk_oracle.hpp"

namespace lbr::model {
namespace {

const std::filesystem::path kConfigs = LBR_KIT_TEST_CONFIG_DIR;

Vector7d random_q(const RobotVariant& v, std::mt19937_64& rng) {
  Vector7d q;
  for (int i = 0; i < 7; ++i) {
    const auto& j = v.joints[static_cast<std::size_t>(i)];
    q(i) = std::uniform_real_distribution<double>(j.lower, j.upper)(rng);
  }
  return q;
}

Eigen::Matrix3d rotation_of(const testing::Mat4& m) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return r;
}

TEST(Variants, AllShippedConfigsLoad) {
  EXPECT_EQ(list_variants(kConfigs), (std::vector<std::string>{"iiwa14", "iiwa7", "med14", "med7"}));
  for (const auto& name : kVariantNames) {
    const RobotVariant v = load_variant(name, kConfigs);
    EXPECT_EQ(v.name, name);
    for (const auto& j : v.joints) {
      EXPECT_NEAR(j.axis.norm(), 1.0, 1e-12);
      EXPECT_LT(j.lower, j.upper);
      EXPECT_GT(j.velocity_limit, 0.0);
      EXPECT_GT(j.torque_limit, 0.0);
    }
  }
}

TEST(Variants, LinkLengths) {
  const auto a = load_variant("iiwa7", kConfigs).link_offsets();
  EXPECT_EQ(a, (std::array<double, 4>{0.34, 0.40, 0.40, 0.126}));
  const auto b = load_variant("med14", kConfigs).link_offsets();
  EXPECT_EQ(b, (std::array<double, 4>{0.36, 0.42, 0.40, 0.126}));
}

TEST(Variants, UnknownNameAndBadFile) {
  try {
    load_variant("iiwa99", kConfigs);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ModelError::Code::UnknownVariant);
  }

  const auto dir = std::filesystem::temp_directory_path() / "lbr_kit_model_test";
  std::filesystem::create_directories(dir);
  const auto bad = dir / "broken.json";
  {
    std::ifstream in(kConfigs / "iiwa7.json");
    std::string text((std::istreambuf_iterator<char>(in)), {});
    text.replace(text.find("\"axis\": [0, 0, 1]"), 17, "\"axis\": [0, 0, 2]");
    std::ofstream(bad) << text;
  }
  try {
    load_variant_file(bad);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ModelError::Code::BadConfig);
  }
  std::ofstream(bad) << "{not json";
  EXPECT_THROW(load_variant_file(bad), ModelError);
  std::filesystem::remove_all(dir);
}

TEST(Variants, WithinLimits) {
  const RobotVariant v = load_variant("iiwa7", kConfigs);
  Vector7d q = Vector7d::Zero();
  EXPECT_TRUE(v.within_limits(q));
  q(3) = 2.2;
  EXPECT_FALSE(v.within_limits(q));
}

TEST(Kinematics, ZeroPoseIsStraightUp) {
  for (const auto& name : kVariantNames) {
    const RobotVariant v = load_variant(name, kConfigs);
    const auto d = v.link_offsets();
    const Pose p = forward_kinematics(Vector7d::Zero(), v);
    EXPECT_NEAR((p.position - Eigen::Vector3d(0, 0, d[0] + d[1] + d[2] + d[3])).norm(), 0.0, 1e-12);
    EXPECT_NEAR(p.orientation.angularDistance(Eigen::Quaterniond::Identity()), 0.0, 1e-12);
  }
}

TEST(Kinematics, ShoulderAtNinetyDegrees) {
  const RobotVariant v = load_variant("iiwa7", kConfigs);
  Vector7d q = Vector7d::Zero();
  q(1) = std::numbers::pi / 2;
  const Pose p = forward_kinematics(q, v);
  EXPECT_NEAR((p.position - Eigen::Vector3d(0.926, 0, 0.34)).norm(), 0.0, 1e-12);
}

TEST(Kinematics, MatchesHomogeneousTransformOracle) {
  std::mt19937_64 rng(5);
  for (const auto& name : kVariantNames) {
    const RobotVariant v = load_variant(name, kConfigs);
    for (int n = 0; n < 500; ++n) {
      const Vector7d q = random_q(v, rng);
      const auto t = testing::lbr_flange(to_array(q), v.link_offsets());
      const Pose p = forward_kinematics(q, v);
      EXPECT_NEAR((p.position - Eigen::Vector3d(t[0][3], t[1][3], t[2][3])).norm(), 0.0, 1e-12);
      EXPECT_NEAR((p.orientation.toRotationMatrix() - rotation_of(t)).norm(), 0.0, 1e-12);
      EXPECT_GE(p.orientation.w(), 0.0);
    }
  }
}

TEST(Kinematics, FullTurnOfAJointIsIdentity) {
  const RobotVariant v = load_variant("iiwa14", kConfigs);
  std::mt19937_64 rng(6);
  for (int n = 0; n < 100; ++n) {
    const Vector7d q = random_q(v, rng);
    for (int i = 0; i < 7; ++i) {
      Vector7d q2 = q;
      q2(i) += 2 * std::numbers::pi;
      const Pose a = forward_kinematics(q, v);
      const Pose b = forward_kinematics(q2, v);
      EXPECT_NEAR((a.position - b.position).norm(), 0.0, 1e-12);
      EXPECT_NEAR(a.orientation.angularDistance(b.orientation), 0.0, 1e-7);
    }
  }
}

TEST(Kinematics, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (const auto& name : kVariantNames) {
    const RobotVariant v = load_variant(name, kConfigs);
    double worst = 0.0;
    for (int n = 0; n < 200; ++n) {
      const Vector7d q = random_q(v, rng);
      const Jacobian J = jacobian(q, v);
      for (int i = 0; i < 7; ++i) {
        Vector7d qp = q, qm = q;
        qp(i) += h;
        qm(i) -= h;
        const Pose a = forward_kinematics(qp, v);
        const Pose b = forward_kinematics(qm, v);
        Vector6d col;
        col.head<3>() = (a.position - b.position) / (2 * h);
        const Eigen::AngleAxisd aa(a.orientation * b.orientation.inverse());
        col.tail<3>() = aa.axis() * aa.angle() / (2 * h);
        worst = std::max(worst, (col - J.col(i)).cwiseAbs().maxCoeff());
      }
    }
    EXPECT_LT(worst, 1e-5) << name;
  }
}

TEST(Kinematics, PoseErrorProperties) {
  const RobotVariant v = load_variant("med7", kConfigs);
  std::mt19937_64 rng(8);
  for (int n = 0; n < 300; ++n) {
    const Pose a = forward_kinematics(random_q(v, rng), v);
    const Pose b = forward_kinematics(random_q(v, rng), v);
    EXPECT_NEAR(pose_error(a, a).norm(), 0.0, 1e-12);

    const Vector6d e = pose_error(a, b);
    EXPECT_LE(e.tail<3>().norm(), std::numbers::pi + 1e-12);
    EXPECT_NEAR((e.head<3>() - (a.position - b.position)).norm(), 0.0, 1e-12);
    // Applying the rotation vector to b recovers a.
    const double angle = e.tail<3>().norm();
    if (angle > 1e-9 && angle < std::numbers::pi - 1e-6) {
      const Eigen::Quaterniond r(Eigen::AngleAxisd(angle, e.tail<3>() / angle));
      EXPECT_NEAR((r * b.orientation).angularDistance(a.orientation), 0.0, 1e-9);
    }
  }
}

TEST(Kinematics, PoseArrayRoundTripKeepsWPositive) {
  const Pose p(Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Quaterniond(-0.5, 0.5, 0.5, 0.5));
  EXPECT_GE(p.orientation.w(), 0.0);
  const Pose q = Pose::from_array(p.to_array());
  EXPECT_NEAR(p.orientation.angularDistance(q.orientation), 0.0, 1e-12);
  EXPECT_EQ(p.position, q.position);
}

TEST(Kinematics, DampedLeastSquaresPushThroughIdentity) {
  const RobotVariant v = load_variant("iiwa7", kConfigs);
  std::mt19937_64 rng(9);
  for (int n = 0; n < 100; ++n) {
    const Jacobian J = jacobian(random_q(v, rng), v);
    Vector6d x;
    for (int i = 0; i < 6; ++i) x(i) = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double lambda = 0.05;
    const Vector7d a = damped_least_squares(J, x, lambda);
    const Eigen::Matrix<double, 7, 7> A = J.transpose() * J + lambda * lambda * Eigen::Matrix<double, 7, 7>::Identity();
    const Vector7d b = A.ldlt().solve(J.transpose() * x);
    EXPECT_NEAR((a - b).norm(), 0.0, 1e-9);
  }
  // Stays bounded at the stretched-out singularity.
  const Jacobian J0 = jacobian(Vector7d::Zero(), v);
  Vector6d x = Vector6d::Zero();
  x(2) = 1.0;
  EXPECT_TRUE(damped_least_squares(J0, x, 0.05).allFinite());
}

}  // namespace
}  // namespace lbr::model
