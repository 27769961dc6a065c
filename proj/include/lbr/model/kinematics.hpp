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

#pragma once

#include <Eigen/Geometry>

#include "lbr/model/robot_model.hpp"

namespace lbr::model {

/// Position plus unit quaternion, kept with w >= 0.
struct Pose {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  Eigen::Quaterniond orientation{Eigen::Quaterniond::Identity()};

  Pose() = default;
  Pose(const Eigen::Vector3d& p, const Eigen::Quaterniond& q);

  PoseArray to_array() const;
  static Pose from_array(const PoseArray& a);
};

Eigen::Quaterniond canonical(const Eigen::Quaterniond& q);

/// Flange pose in the base frame. Out-of-limit q is evaluated anyway; use
/// RobotVariant::within_limits to flag it.
Pose forward_kinematics(const Vector7d& q, const RobotVariant& variant);

/// Geometric Jacobian of the flange in the base frame, linear rows first.
Jacobian jacobian(const Vector7d& q, const RobotVariant& variant);

/// (target.p - current.p, rotation vector of target.R * current.R^-1), angle
/// in [0, pi].
Vector6d pose_error(const Pose& target, const Pose& current);

/// J^T (J J^T + lambda^2 I)^-1 xdot
Vector7d damped_least_squares(const Jacobian& J, const Vector6d& xdot, double lambda);

}  // namespace lbr::model
