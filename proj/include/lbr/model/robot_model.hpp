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

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lbr/types.hpp"

namespace lbr::model {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Vector7d = Eigen::Matrix<double, 7, 1>;
using Jacobian = Eigen::Matrix<double, 6, 7>;

inline Vector7d to_eigen(const JointArray& a) { return Eigen::Map<const Vector7d>(a.data()); }
inline JointArray to_array(const Vector7d& v) {
  JointArray a;
  Eigen::Map<Vector7d>(a.data()) = v;
  return a;
}

inline const std::array<std::string, 4> kVariantNames{"iiwa7", "iiwa14", "med7", "med14"};

class ModelError : public std::runtime_error {
 public:
  enum class Code { UnknownVariant, BadConfig };

  ModelError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct JointSpec {
  Eigen::Vector3d axis;           // unit, in the parent frame
  Eigen::Vector3d origin_offset;  // from the previous joint, in the parent frame
  double lower{0.0};              // rad
  double upper{0.0};              // rad
  double velocity_limit{0.0};     // rad/s
  double torque_limit{0.0};       // N·m
};

struct RobotVariant {
  std::string name;
  std::array<JointSpec, kNumJoints> joints;
  Eigen::Vector3d flange_offset{Eigen::Vector3d::Zero()};
  Vector7d stiffness{Vector7d::Zero()};       // N·m/rad
  Vector7d damping{Vector7d::Zero()};         // N·m·s/rad
  Vector6d cartesian_stiffness{Vector6d::Zero()};  // N/m x3, N·m/rad x3

  Vector7d lower_limits() const;
  Vector7d upper_limits() const;
  Vector7d velocity_limits() const;
  Vector7d torque_limits() const;

  /// Shoulder, upper arm, forearm and flange lengths (d1..d4): the offsets
  /// in front of joints 2, 4, 6 and the flange.
  std::array<double, 4> link_offsets() const;

  bool within_limits(const Vector7d& q) const;
};

/// Parses and validates one variant file.
RobotVariant load_variant_file(const std::filesystem::path& path);

/// Loads `<dir>/<name>.json`; throws UnknownVariant for names outside
/// kVariantNames.
RobotVariant load_variant(const std::string& name, const std::filesystem::path& dir);

/// Names of the variant files found in `dir`, sorted.
std::vector<std::string> list_variants(const std::filesystem::path& dir);

/// Directory of the shipped variant configs (compile-time default,
/// overridable with LBR_KIT_CONFIG_DIR).
std::filesystem::path default_config_dir();

}  // namespace lbr::model
