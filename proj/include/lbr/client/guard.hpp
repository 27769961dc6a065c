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
#include <cstdint>
#include <filesystem>
#include <utility>

#include "lbr/model/robot_model.hpp"
#include "lbr/types.hpp"
#include "lbr/wire/messages.hpp"

namespace lbr::client {

struct CommandGuardConfig {
  std::array<std::pair<double, double>, kNumJoints> position_limits{};  // rad
  JointArray velocity_limits{};                                          // rad/s
  JointArray torque_limits{};                                            // N·m

  /// Throws std::invalid_argument.
  void validate() const;

  static CommandGuardConfig from_variant(const model::RobotVariant& variant);

  /// Element-wise intersection: limits can be tightened, never loosened.
  CommandGuardConfig tightened_by(const CommandGuardConfig& other) const;

  /// Reads a guard file (`position_limits_deg`, `velocity_limits_deg_s`,
  /// `torque_limits_nm`, each optional) and tightens `base` with it.
  static CommandGuardConfig load(const std::filesystem::path& path, const CommandGuardConfig& base);
};

/// Clamps joint positions to the limits and to a per-tick step around
/// `previous_position`, and torque overlays to the torque limits. Wrench and
/// cartesian setpoints pass through unchanged. Idempotent.
wire::CommandMessage guard_command(const wire::CommandMessage& cmd, const JointArray& previous_position,
                                   double sample_period, const CommandGuardConfig& cfg);

/// guard_command plus a running count of ticks on which anything was clamped.
class CommandGuard {
 public:
  explicit CommandGuard(CommandGuardConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  wire::CommandMessage apply(const wire::CommandMessage& cmd, const JointArray& previous_position,
                             double sample_period);

  const CommandGuardConfig& config() const { return cfg_; }
  std::uint64_t clamp_count() const { return clamp_count_; }

 private:
  CommandGuardConfig cfg_;
  std::uint64_t clamp_count_{0};
};

}  // namespace lbr::client
