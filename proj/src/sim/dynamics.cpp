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

#include "lbr/sim/dynamics.hpp"

#include <algorithm>

namespace lbr::sim {

using model::Vector6d;
using model::Vector7d;

void SimConfig::validate() const {
  const double period = dt();
  if (period < 0.001 || period > 0.1) throw SimError(SimError::Code::BadConfig, "sample_period must lie in [0.001, 0.1] s");
  if (protocol_version < 1 || protocol_version > 2) throw SimError(SimError::Code::BadConfig, "protocol_version must be 1 or 2");
  if ((inertia.array() <= 0.0).any()) throw SimError(SimError::Code::BadConfig, "inertia entries must be > 0");
  if (!(deadline_factor >= 1.0)) throw SimError(SimError::Code::BadConfig, "deadline_factor must be >= 1");
  if (activation_streak < 1) throw SimError(SimError::Code::BadConfig, "activation_streak must be >= 1");
}

SimState initial_state(const SimConfig& cfg, const model::RobotVariant& variant) {
  SimState s;
  s.q = cfg.initial_q.cwiseMax(variant.lower_limits()).cwiseMin(variant.upper_limits());
  s.setpoint = s.q;
  return s;
}

namespace {

void integrate_torque(SimState& s, const Vector7d& tau, const SimConfig& cfg) {
  const double dt = cfg.dt();
  s.commanded_torque = tau;
  s.qd = s.qd + tau.cwiseQuotient(cfg.inertia) * dt;  // semi-implicit Euler
  s.q = s.q + s.qd * dt;
}

void track_position(SimState& s, const Vector7d& target, const model::RobotVariant& variant, double dt) {
  const Vector7d step = variant.velocity_limits() * dt;
  const Vector7d q_prev = s.q;
  s.q = q_prev + (target - q_prev).cwiseMax(-step).cwiseMin(step);
  s.qd = (s.q - q_prev) / dt;
  s.commanded_torque.setZero();
}

}  // namespace

SimState step_dynamics(const SimState& in, const std::optional<wire::CommandMessage>& cmd, const SimConfig& cfg,
                       const model::RobotVariant& variant) {
  SimState s = in;
  const double dt = cfg.dt();

  if (!cmd) {
    track_position(s, s.setpoint, variant, dt);
  } else {
    switch (cmd->client_command_mode) {
      case CommandMode::POSITION: {
        s.setpoint = model::to_eigen(*cmd->joint_position);
        track_position(s, s.setpoint, variant, dt);
        break;
      }
      case CommandMode::TORQUE: {
        s.setpoint = model::to_eigen(*cmd->joint_position);
        const Vector7d tau = variant.stiffness.cwiseProduct(s.setpoint - s.q) - variant.damping.cwiseProduct(s.qd) +
                             model::to_eigen(*cmd->torque_overlay) + s.injected_external_torque;
        integrate_torque(s, tau, cfg);
        break;
      }
      case CommandMode::WRENCH: {
        if (!s.hold_pose) s.hold_pose = model::forward_kinematics(s.q, variant);
        const Vector6d e = model::pose_error(*s.hold_pose, model::forward_kinematics(s.q, variant));
        const Vector6d w = Eigen::Map<const Vector6d>(cmd->wrench_overlay->data());
        const Vector6d f = variant.cartesian_stiffness.cwiseProduct(e) + w;
        const Vector7d tau = model::jacobian(s.q, variant).transpose() * f - variant.damping.cwiseProduct(s.qd) +
                             s.injected_external_torque;
        integrate_torque(s, tau, cfg);
        s.setpoint = s.q;
        break;
      }
      case CommandMode::CARTESIAN_POSE: {
        if (cfg.protocol_version < 2)
          throw SimError(SimError::Code::ModeNotSupported, "CARTESIAN_POSE requires protocol version 2");
        const model::Pose target = model::Pose::from_array(*cmd->cartesian_pose);
        const Vector6d xdot = cfg.cartesian_pose_gain * model::pose_error(target, model::forward_kinematics(s.q, variant));
        Vector7d qd = model::damped_least_squares(model::jacobian(s.q, variant), xdot, cfg.dls_lambda);
        // Uniform scaling keeps the cartesian direction of motion.
        const double ratio = (qd.cwiseAbs().cwiseQuotient(variant.velocity_limits())).maxCoeff();
        if (ratio > 1.0) qd /= ratio;
        s.qd = qd;
        s.q = s.q + qd * dt;
        s.commanded_torque.setZero();
        s.setpoint = s.q;
        break;
      }
    }
  }

  const Vector7d lo = variant.lower_limits();
  const Vector7d hi = variant.upper_limits();
  for (Eigen::Index i = 0; i < 7; ++i) {
    if (s.q[i] < lo[i] || s.q[i] > hi[i]) {
      s.q[i] = std::clamp(s.q[i], lo[i], hi[i]);
      s.qd[i] = 0.0;
    }
  }
  return s;
}

SimState inject_disturbance(SimState s, const JointArray& torque, std::uint32_t duration_ticks) {
  s.injected_external_torque = model::to_eigen(torque);
  s.injected_ticks_remaining = duration_ticks;
  if (duration_ticks == 0) s.injected_external_torque.setZero();
  return s;
}

}  // namespace lbr::sim
