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

#include "lbr/client/client.hpp"

#include <cmath>
#include <stdexcept>

#include "lbr/log.hpp"
#include "lbr/session/state_machine.hpp"

namespace lbr::client {

namespace {

template <std::size_t N>
bool finite(const std::optional<std::array<double, N>>& a) {
  if (!a) return true;
  for (double v : *a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool finite(const wire::CommandMessage& c) {
  return finite(c.joint_position) && finite(c.torque_overlay) && finite(c.wrench_overlay) && finite(c.cartesian_pose);
}

wire::CommandMessage heartbeat(const wire::MonitorMessage& m) {
  wire::CommandMessage c;
  c.client_command_mode = CommandMode::POSITION;
  c.joint_position = m.interpolated_command_position;
  return c;
}

}  // namespace

wire::CommandMessage StateSample::hold() const {
  wire::CommandMessage c;
  c.client_command_mode = monitor.control_mode;
  switch (monitor.control_mode) {
    case CommandMode::POSITION:
      c.joint_position = monitor.interpolated_command_position;
      break;
    case CommandMode::TORQUE:
      c.joint_position = monitor.interpolated_command_position;
      c.torque_overlay = JointArray{};
      break;
    case CommandMode::WRENCH:
      c.wrench_overlay = WrenchArray{};
      break;
    case CommandMode::CARTESIAN_POSE:
      c.cartesian_pose = commanded_flange_pose().to_array();
      break;
  }
  return c;
}

model::Pose StateSample::commanded_flange_pose() const {
  return model::forward_kinematics(model::to_eigen(monitor.interpolated_command_position), variant);
}

std::optional<wire::CommandMessage> dispatch(ClientCallbacks& callbacks, const StateSample& sample) {
  switch (sample.monitor.session_state) {
    case SessionState::IDLE:
    case SessionState::MONITORING_WAIT:
    case SessionState::MONITORING_READY:
      callbacks.on_monitor(sample);
      return std::nullopt;
    case SessionState::COMMANDING_WAIT:
      return callbacks.on_wait_for_command(sample);
    case SessionState::COMMANDING_ACTIVE:
      return callbacks.on_command(sample);
  }
  return std::nullopt;
}

const char* to_string(ClientErrc e) {
  switch (e) {
    case ClientErrc::None: return "None";
    case ClientErrc::NoCommonVersion: return "NoCommonVersion";
    case ClientErrc::ModeNotSupported: return "ModeNotSupported";
    case ClientErrc::ServerBye: return "ServerBye";
    case ClientErrc::CallbackError: return "CallbackError";
    case ClientErrc::NonFiniteCommand: return "NonFiniteCommand";
    case ClientErrc::InvalidCommand: return "InvalidCommand";
  }
  return "?";
}

ClientConfig ClientConfig::for_variant(const model::RobotVariant& variant) {
  ClientConfig cfg;
  cfg.variant = variant;
  cfg.guard = CommandGuardConfig::from_variant(variant);
  return cfg;
}

ClientSession::ClientSession(ClientConfig cfg, ClientCallbacks& callbacks)
    : cfg_(std::move(cfg)), callbacks_(callbacks), guard_(cfg_.guard), filter_(cfg_.filter_alpha) {
  if (cfg_.versions.empty()) throw std::invalid_argument("client must support at least one protocol version");
}

wire::Bytes ClientSession::encode(const wire::Payload& payload, wire::MessageType type) {
  wire::FrameHeader h;
  h.protocol_version = version_.value_or(*cfg_.versions.rbegin());
  h.message_type = type;
  h.sequence = sequence_++;
  return wire::encode_frame(h, payload);
}

wire::Bytes ClientSession::join_frame() {
  return encode(wire::JoinMessage{wire::version_mask(cfg_.versions)}, wire::MessageType::JOIN);
}

wire::Bytes ClientSession::bye_frame() {
  return encode(wire::ByeMessage{wire::ByeReason::NORMAL}, wire::MessageType::BYE);
}

std::vector<wire::Bytes> ClientSession::abort(ClientErrc code, std::string detail, wire::ByeReason reason) {
  status_ = ClientStatus::Aborted;
  error_ = code;
  error_detail_ = std::move(detail);
  log::warn("client abort: %s (%s)", to_string(code), error_detail_.c_str());
  return {encode(wire::ByeMessage{reason}, wire::MessageType::BYE)};
}

std::vector<wire::Bytes> ClientSession::on_datagram(std::span<const std::uint8_t> bytes) {
  if (status_ == ClientStatus::Ended || status_ == ClientStatus::Aborted) return {};

  wire::DecodedFrame frame;
  try {
    frame = wire::decode_frame(bytes, version_.value_or(*cfg_.versions.rbegin()));
  } catch (const wire::WireError& e) {
    ++decode_errors_;
    log::debug("client dropped datagram: %s", e.what());
    return {};
  }

  if (const auto* bye = std::get_if<wire::ByeMessage>(&frame.payload)) {
    status_ = ClientStatus::Ended;
    const auto reason = bye->reason.value_or(wire::ByeReason::NORMAL);
    error_ = reason == wire::ByeReason::NO_COMMON_VERSION    ? ClientErrc::NoCommonVersion
             : reason == wire::ByeReason::MODE_NOT_SUPPORTED ? ClientErrc::ModeNotSupported
                                                             : ClientErrc::ServerBye;
    error_detail_ = "server closed the session";
    state_ = SessionState::IDLE;
    return {};
  }

  const auto* monitor = std::get_if<wire::MonitorMessage>(&frame.payload);
  if (!monitor) return {};

  if (!version_) {
    if (!cfg_.versions.contains(frame.header.protocol_version))
      return abort(ClientErrc::NoCommonVersion, "server picked an unsupported version", wire::ByeReason::NO_COMMON_VERSION);
    version_ = frame.header.protocol_version;
  }
  status_ = ClientStatus::Running;
  ++monitors_;
  last_monitor_ = *monitor;
  state_ = session::step_client(state_, *monitor);
  if (state_ != SessionState::COMMANDING_ACTIVE) filter_.reset();

  const StateSample sample{*monitor, *version_, cfg_.variant};
  std::optional<wire::CommandMessage> produced;
  try {
    produced = dispatch(callbacks_, sample);
  } catch (const std::exception& e) {
    return abort(ClientErrc::CallbackError, e.what(), wire::ByeReason::CLIENT_ABORT);
  } catch (...) {
    return abort(ClientErrc::CallbackError, "non-standard exception", wire::ByeReason::CLIENT_ABORT);
  }

  wire::CommandMessage cmd = produced ? *produced : heartbeat(*monitor);
  if (produced) {
    if (!finite(cmd)) return abort(ClientErrc::NonFiniteCommand, "callback returned NaN or inf", wire::ByeReason::CLIENT_ABORT);
    if (!wire::mode_supported(*version_, cmd.client_command_mode))
      return abort(ClientErrc::ModeNotSupported,
                   std::string(to_string(cmd.client_command_mode)) + " needs protocol version 2",
                   wire::ByeReason::MODE_NOT_SUPPORTED);
    try {
      wire::validate(cmd, *version_);
    } catch (const wire::WireError& e) {
      return abort(ClientErrc::InvalidCommand, e.what(), wire::ByeReason::CLIENT_ABORT);
    }
    if (state_ == SessionState::COMMANDING_ACTIVE && cmd.joint_position) {
      cmd.joint_position = filter_.step(*cmd.joint_position);
    }
    const JointArray& previous = last_sent_position_ ? *last_sent_position_ : monitor->interpolated_command_position;
    cmd = guard_.apply(cmd, previous, monitor->sample_period);
  }
  cmd.reflected_sequence = monitor->monitor_sequence;
  if (cmd.joint_position) last_sent_position_ = cmd.joint_position;

  if (on_transmit) on_transmit(*monitor, cmd);
  return {encode(cmd, wire::MessageType::COMMAND)};
}

}  // namespace lbr::client
