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

#include "lbr/model/kinematics.hpp"

#include <cmath>

namespace lbr::model {

namespace {

struct ChainFrames {
  std::array<Eigen::Vector3d, kNumJoints> origin;  // joint origins, base frame
  std::array<Eigen::Vector3d, kNumJoints> axis;    // joint axes, base frame
  Eigen::Isometry3d flange;
};

ChainFrames walk_chain(const Vector7d& q, const RobotVariant& variant) {
  ChainFrames f;
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const JointSpec& j = variant.joints[i];
    T.translate(j.origin_offset);
    f.origin[i] = T.translation();
    f.axis[i] = T.linear() * j.axis;
    T.rotate(Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)], j.axis));
  }
  T.translate(variant.flange_offset);
  f.flange = T;
  return f;
}

}  // namespace

Eigen::Quaterniond canonical(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond n = q.normalized();
  if (n.w() < 0.0) n.coeffs() = -n.coeffs();
  return n;
}

Pose::Pose(const Eigen::Vector3d& p, const Eigen::Quaterniond& q) : position(p), orientation(canonical(q)) {}

PoseArray Pose::to_array() const {
  return {position.x(), position.y(), position.z(), orientation.w(), orientation.x(), orientation.y(), orientation.z()};
}

Pose Pose::from_array(const PoseArray& a) {
  return Pose({a[0], a[1], a[2]}, Eigen::Quaterniond(a[3], a[4], a[5], a[6]));
}

Pose forward_kinematics(const Vector7d& q, const RobotVariant& variant) {
  const ChainFrames f = walk_chain(q, variant);
  return Pose(f.flange.translation(), Eigen::Quaterniond(f.flange.linear()));
}

Jacobian jacobian(const Vector7d& q, const RobotVariant& variant) {
  const ChainFrames f = walk_chain(q, variant);
  const Eigen::Vector3d p_end = f.flange.translation();
  Jacobian J;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    J.block<3, 1>(0, c) = f.axis[i].cross(p_end - f.origin[i]);
    J.block<3, 1>(3, c) = f.axis[i];
  }
  return J;
}

Vector6d pose_error(const Pose& target, const Pose& current) {
  Vector6d e;
  e.head<3>() = target.position - current.position;
  const Eigen::Quaterniond d = canonical(target.orientation * current.orientation.conjugate());
  const double s = d.vec().norm();
  if (s < 1e-300) {
    e.tail<3>().setZero();
  } else {
    const double angle = 2.0 * std::atan2(s, d.w());  // w >= 0 keeps this in [0, pi]
    e.tail<3>() = d.vec() / s * angle;
  }
  return e;
}

Vector7d damped_least_squares(const Jacobian& J, const Vector6d& xdot, double lambda) {
  const Eigen::Matrix<double, 6, 6> A = J * J.transpose() + lambda * lambda * Eigen::Matrix<double, 6, 6>::Identity();
  return J.transpose() * A.ldlt().solve(xdot);
}

}  // namespace lbr::model
