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

#include "lbr/model/robot_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

namespace lbr::model {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void bad(const std::filesystem::path& path, const std::string& why) {
  throw ModelError(ModelError::Code::BadConfig, path.string() + ": " + why);
}

Eigen::Vector3d vec3(const json& j, const std::filesystem::path& path, const char* key) {
  if (!j.is_array() || j.size() != 3) bad(path, std::string(key) + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <int N>
Eigen::Matrix<double, N, 1> vecn(const json& j, const std::filesystem::path& path, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != N)
    bad(path, std::string(key) + " must have " + std::to_string(N) + " entries");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

Vector7d RobotVariant::lower_limits() const {
  Vector7d v;
  for (std::size_t i = 0; i < kNumJoints; ++i) v[static_cast<Eigen::Index>(i)] = joints[i].lower;
  return v;
}

Vector7d RobotVariant::upper_limits() const {
  Vector7d v;
  for (std::size_t i = 0; i < kNumJoints; ++i) v[static_cast<Eigen::Index>(i)] = joints[i].upper;
  return v;
}

Vector7d RobotVariant::velocity_limits() const {
  Vector7d v;
  for (std::size_t i = 0; i < kNumJoints; ++i) v[static_cast<Eigen::Index>(i)] = joints[i].velocity_limit;
  return v;
}

Vector7d RobotVariant::torque_limits() const {
  Vector7d v;
  for (std::size_t i = 0; i < kNumJoints; ++i) v[static_cast<Eigen::Index>(i)] = joints[i].torque_limit;
  return v;
}

std::array<double, 4> RobotVariant::link_offsets() const {
  return {joints[1].origin_offset.norm(), joints[3].origin_offset.norm(), joints[5].origin_offset.norm(),
          flange_offset.norm()};
}

bool RobotVariant::within_limits(const Vector7d& q) const {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const double v = q[static_cast<Eigen::Index>(i)];
    if (v < joints[i].lower || v > joints[i].upper) return false;
  }
  return true;
}

RobotVariant load_variant_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad(path, "cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad(path, e.what());
  }

  RobotVariant v;
  try {
    v.name = j.at("name").get<std::string>();
    const json& joints = j.at("joints");
    if (!joints.is_array() || joints.size() != kNumJoints) bad(path, "exactly 7 joints required");
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      const json& jj = joints[i];
      JointSpec& s = v.joints[i];
      s.axis = vec3(jj.at("axis"), path, "axis");
      s.origin_offset = vec3(jj.at("origin_offset"), path, "origin_offset");
      const json& lim = jj.at("limit_deg");
      if (!lim.is_array() || lim.size() != 2) bad(path, "limit_deg must be [min, max]");
      s.lower = lim[0].get<double>() * kDeg;
      s.upper = lim[1].get<double>() * kDeg;
      s.velocity_limit = jj.at("velocity_limit_deg_s").get<double>() * kDeg;
      s.torque_limit = jj.at("torque_limit_nm").get<double>();

      if (std::abs(s.axis.norm() - 1.0) > 1e-12) bad(path, "joint axis must be a unit vector");
      if (!(s.lower < s.upper)) bad(path, "joint " + std::to_string(i + 1) + ": min must be below max");
      if (std::abs(s.lower + s.upper) > 1e-12) bad(path, "joint " + std::to_string(i + 1) + ": limits must be symmetric");
      if (!(s.velocity_limit > 0.0) || !(s.torque_limit > 0.0)) bad(path, "velocity and torque limits must be > 0");
    }
    v.flange_offset = vec3(j.at("flange_offset"), path, "flange_offset");
    v.stiffness = vecn<7>(j.at("default_impedance").at("stiffness"), path, "stiffness");
    v.damping = vecn<7>(j.at("default_impedance").at("damping"), path, "damping");
    v.cartesian_stiffness = vecn<6>(j.at("cartesian_stiffness"), path, "cartesian_stiffness");
  } catch (const json::exception& e) {
    bad(path, e.what());
  }

  for (double d : v.link_offsets()) {
    if (!(d > 0.0)) bad(path, "link offsets must be > 0");
  }
  if ((v.stiffness.array() < 0).any() || (v.damping.array() < 0).any() || (v.cartesian_stiffness.array() < 0).any())
    bad(path, "impedance parameters must be non-negative");
  return v;
}

RobotVariant load_variant(const std::string& name, const std::filesystem::path& dir) {
  if (std::find(kVariantNames.begin(), kVariantNames.end(), name) == kVariantNames.end()) {
    throw ModelError(ModelError::Code::UnknownVariant,
                     "unknown variant '" + name + "' (expected one of iiwa7, iiwa14, med7, med14)");
  }
  RobotVariant v = load_variant_file(dir / (name + ".json"));
  if (v.name != name) bad(dir / (name + ".json"), "file declares name '" + v.name + "'");
  return v;
}

std::vector<std::string> list_variants(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::filesystem::path default_config_dir() {
  if (const char* env = std::getenv("LBR_KIT_CONFIG_DIR"); env && *env) return env;
  return LBR_KIT_DEFAULT_CONFIG_DIR;
}

}  // namespace lbr::model
