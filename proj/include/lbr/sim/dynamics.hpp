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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "lbr/model/kinematics.hpp"
#include "lbr/wire/messages.hpp"

namespace lbr::sim {

class SimError : public std::runtime_error {
 public:
  enum class Code { ModeNotSupported, BadConfig };

  SimError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct SimConfig {
  std::string variant{"med7"};
  Nanos sample_period{std::chrono::milliseconds(5)};
  std::uint8_t protocol_version{2};
  model::Vector7d inertia{model::Vector7d::Ones()};  // kg·m²
  model::Vector7d initial_q{(model::Vector7d() << 0.0, 0.4, 0.0, -1.2, 0.0, 0.8, 0.0).finished()};
  std::string bind_address{"0.0.0.0"};
  std::uint16_t port{30200};
  std::uint16_t control_port{30201};
  bool real_time{true};

  double cartesian_pose_gain{10.0};  // 1/s, all six axes
  double dls_lambda{0.05};
  double deadline_factor{3.0};
  std::uint32_t activation_streak{10};

  /// Throws SimError(BadConfig).
  void validate() const;
  double dt() const { return to_seconds(sample_period); }
};

/// Physical and control state of the simulated arm. Session state lives in
/// the Simulator.
struct SimState {
  model::Vector7d q{model::Vector7d::Zero()};
  model::Vector7d qd{model::Vector7d::Zero()};
  CommandMode active_mode{CommandMode::POSITION};
  /// Reference for WRENCH stiffness, captured when a cartesian mode goes
  /// active.
  std::optional<model::Pose> hold_pose;
  /// Joint setpoint the controller tracks (reported as the interpolated
  /// command position).
  model::Vector7d setpoint{model::Vector7d::Zero()};
  model::Vector7d injected_external_torque{model::Vector7d::Zero()};
  std::uint32_t injected_ticks_remaining{0};
  model::Vector7d commanded_torque{model::Vector7d::Zero()};
  std::uint64_t tick{0};
};

SimState initial_state(const SimConfig& cfg, const model::RobotVariant& variant);

/// Advances one sample period. An absent command holds: rate-limited
/// position tracking toward the last setpoint. The command's mode selects the
/// control law; CARTESIAN_POSE under protocol version 1 throws
/// ModeNotSupported.
SimState step_dynamics(const SimState& s, const std::optional<wire::CommandMessage>& cmd, const SimConfig& cfg,
                       const model::RobotVariant& variant);

/// Adds `torque` to the dynamics and reports it in external_torque for the
/// next `duration_ticks` monitors.
SimState inject_disturbance(SimState s, const JointArray& torque, std::uint32_t duration_ticks);

}  // namespace lbr::sim
