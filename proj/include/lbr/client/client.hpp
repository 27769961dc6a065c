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
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lbr/client/filter.hpp"
#include "lbr/client/guard.hpp"
#include "lbr/model/kinematics.hpp"
#include "lbr/wire/codec.hpp"

namespace lbr::client {

/// What a callback sees for one received monitor message.
struct StateSample {
  const wire::MonitorMessage& monitor;
  std::uint8_t version;
  const model::RobotVariant& variant;

  /// A command for monitor.control_mode that leaves the robot where the
  /// controller's interpolator has it (the echo FRI expects while waiting).
  wire::CommandMessage hold() const;
  model::Pose commanded_flange_pose() const;
};

/// Override the hooks you need. Exactly one fires per received monitor.
class ClientCallbacks {
 public:
  virtual ~ClientCallbacks() = default;

  /// IDLE, MONITORING_WAIT and MONITORING_READY.
  virtual void on_monitor(const StateSample&) {}
  /// COMMANDING_WAIT. Must echo the interpolated command position.
  virtual wire::CommandMessage on_wait_for_command(const StateSample& s) { return s.hold(); }
  /// COMMANDING_ACTIVE.
  virtual wire::CommandMessage on_command(const StateSample& s) { return s.hold(); }
};

/// Invokes the callback matching monitor.session_state. Returns the command
/// it produced, or nothing in monitoring states.
std::optional<wire::CommandMessage> dispatch(ClientCallbacks& callbacks, const StateSample& sample);

enum class ClientErrc {
  None,
  NoCommonVersion,
  ModeNotSupported,
  ServerBye,
  CallbackError,
  NonFiniteCommand,
  InvalidCommand,
};

const char* to_string(ClientErrc e);

enum class ClientStatus { Joining, Running, Ended, Aborted };

struct ClientConfig {
  std::set<std::uint8_t> versions{1, 2};
  model::RobotVariant variant;
  CommandGuardConfig guard;
  double filter_alpha{0.2};

  static ClientConfig for_variant(const model::RobotVariant& variant);
};

/// Protocol side of a client, free of any I/O: feed it received datagrams,
/// send whatever it returns. Single-threaded.
class ClientSession {
 public:
  ClientSession(ClientConfig cfg, ClientCallbacks& callbacks);

  wire::Bytes join_frame();
  wire::Bytes bye_frame();

  /// Returns the datagrams to transmit in reply: one answer per monitor, a
  /// BYE when the session aborts, nothing otherwise.
  std::vector<wire::Bytes> on_datagram(std::span<const std::uint8_t> bytes);

  ClientStatus status() const { return status_; }
  ClientErrc error() const { return error_; }
  const std::string& error_detail() const { return error_detail_; }
  SessionState state() const { return state_; }
  std::optional<std::uint8_t> version() const { return version_; }
  const std::optional<wire::MonitorMessage>& last_monitor() const { return last_monitor_; }
  std::uint64_t monitors_received() const { return monitors_; }
  std::uint64_t decode_errors() const { return decode_errors_; }
  std::uint64_t clamp_count() const { return guard_.clamp_count(); }

  /// Called with every command right before it is encoded and sent.
  std::function<void(const wire::MonitorMessage&, const wire::CommandMessage&)> on_transmit;

 private:
  std::vector<wire::Bytes> abort(ClientErrc code, std::string detail, wire::ByeReason reason);
  wire::Bytes encode(const wire::Payload& payload, wire::MessageType type);

  ClientConfig cfg_;
  ClientCallbacks& callbacks_;
  CommandGuard guard_;
  ExponentialFilter filter_;
  ClientStatus status_{ClientStatus::Joining};
  ClientErrc error_{ClientErrc::None};
  std::string error_detail_;
  SessionState state_{SessionState::IDLE};
  std::optional<std::uint8_t> version_;
  std::optional<wire::MonitorMessage> last_monitor_;
  std::optional<JointArray> last_sent_position_;
  std::uint32_t sequence_{0};
  std::uint64_t monitors_{0};
  std::uint64_t decode_errors_{0};
};

}  // namespace lbr::client
