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
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lbr/session/state_machine.hpp"
#include "lbr/sim/dynamics.hpp"
#include "lbr/wire/codec.hpp"

namespace lbr::sim {

/// Identifies the sender of a datagram (transport specific; 0 for loopback).
using PeerId = std::uint64_t;

struct Datagram {
  wire::Bytes bytes;
  Nanos arrival{0};  // on the simulator's clock
  PeerId peer{0};
  std::uint64_t tag{0};  // opaque, copied into trace records for JOIN/BYE
};

struct Outgoing {
  wire::Bytes bytes;
  PeerId peer{0};
};

/// One session event applied by the simulator.
struct TraceRecord {
  Nanos time{0};
  /// Monitor sequence for answer events; the datagram or operator tag
  /// otherwise.
  std::uint64_t tag{0};
  session::SessionEvent event{};
  SessionState from{};
  SessionState to{};
  session::Action action{session::Action::None};

  bool is_transition() const { return from != to || action != session::Action::None; }
};

struct OutcomeCounts {
  std::uint64_t on_time{0};
  std::uint64_t late{0};
  std::uint64_t missing{0};

  std::uint64_t total() const { return on_time + late + missing; }
};

enum class OperatorResult { Accepted, ModeNotSupported, NoSession };

const char* to_string(OperatorResult r);

/// Controller side of the protocol without any I/O: the caller supplies
/// received datagrams and the current time once per tick and transmits what
/// comes back.
///
/// Session events are applied in order of occurrence. Outcomes are finalized
/// in monitor order, so an answered monitor waits behind an earlier one that
/// is still inside its deadline. Operator, JOIN and BYE events queue behind
/// every monitor sent before they arrived.
class Simulator {
 public:
  Simulator(SimConfig cfg, model::RobotVariant variant);

  std::vector<Outgoing> tick(std::span<const Datagram> inbox, Nanos now);

  OperatorResult request_control(CommandMode mode, std::uint64_t tag = 0);
  OperatorResult release_control(std::uint64_t tag = 0);
  void inject_disturbance(const JointArray& torque, std::uint32_t duration_ticks);

  const SimConfig& config() const { return cfg_; }
  const model::RobotVariant& variant() const { return variant_; }
  const SimState& state() const { return state_; }
  SessionState session_state() const { return session_.state(); }
  ConnectionQuality quality() const { return session_.quality(); }
  const session::ServerSession& session() const { return session_; }
  const OutcomeCounts& outcomes() const { return outcomes_; }
  std::uint8_t agreed_version() const { return version_; }
  std::optional<PeerId> client() const { return peer_; }
  std::uint64_t decode_errors() const { return decode_errors_; }
  std::uint64_t rejected_commands() const { return rejected_commands_; }
  std::uint64_t commands_applied() const { return commands_applied_; }

  /// Called for every applied session event, legal or not.
  std::function<void(const TraceRecord&)> on_session_event;
  /// Called after each monitor is encoded.
  std::function<void(const wire::MonitorMessage&)> on_monitor_sent;
  /// Called with every command that reaches step_dynamics.
  std::function<void(const wire::CommandMessage&)> on_command_applied;

 private:
  enum class EntryKind { Monitor, Join, Bye, Request, Release };

  struct Entry {
    EntryKind kind{EntryKind::Monitor};
    std::uint32_t sequence{0};
    Nanos sent_at{0};
    JointArray interpolated{};
    std::optional<session::Outcome> outcome;
    bool mode_valid{false};
    CommandMode mode{CommandMode::POSITION};
    std::uint64_t tag{0};
    PeerId peer{0};
    std::uint8_t version{1};
  };

  void handle(const Datagram& d, Nanos now, std::vector<Outgoing>& out);
  void drain(Nanos now);
  void apply(session::SessionEvent event, bool mode_valid, std::uint64_t tag, Nanos now, const Entry* entry);
  bool command_matches_mode(const wire::CommandMessage& cmd, const Entry& monitor) const;
  wire::Bytes encode(const wire::Payload& payload, wire::MessageType type, std::uint32_t sequence) const;

  SimConfig cfg_;
  SimConfig dynamics_cfg_;  // cfg_ with the agreed protocol version
  model::RobotVariant variant_;
  SimState state_;
  session::ServerSession session_;
  std::deque<Entry> pipeline_;
  std::optional<wire::CommandMessage> freshest_;
  std::uint32_t freshest_sequence_{0};
  std::optional<PeerId> peer_;
  std::uint8_t version_;
  std::uint32_t next_sequence_{0};
  OutcomeCounts outcomes_;
  std::uint64_t decode_errors_{0};
  std::uint64_t rejected_commands_{0};
  std::uint64_t commands_applied_{0};
};

}  // namespace lbr::sim
