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

#include "lbr/sim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "lbr/log.hpp"

namespace lbr::sim {

using session::Action;
using session::SessionEvent;

const char* to_string(OperatorResult r) {
  switch (r) {
    case OperatorResult::Accepted: return "Accepted";
    case OperatorResult::ModeNotSupported: return "ModeNotSupported";
    case OperatorResult::NoSession: return "NoSession";
  }
  return "?";
}

namespace {

session::WatchdogConfig watchdog_for(const SimConfig& cfg) {
  session::WatchdogConfig w;
  w.sample_period = cfg.sample_period;
  w.deadline_factor = cfg.deadline_factor;
  w.activation_streak = cfg.activation_streak;
  return w;
}

// Commands may only reach dynamics while their monitor is this fresh.
constexpr std::uint32_t kMaxCommandAge = 2;

}  // namespace

Simulator::Simulator(SimConfig cfg, model::RobotVariant variant)
    : cfg_(std::move(cfg)),
      dynamics_cfg_(cfg_),
      variant_(std::move(variant)),
      state_(initial_state(cfg_, variant_)),
      session_(watchdog_for(cfg_)),
      version_(cfg_.protocol_version) {
  cfg_.validate();
}

wire::Bytes Simulator::encode(const wire::Payload& payload, wire::MessageType type, std::uint32_t sequence) const {
  wire::FrameHeader h;
  h.protocol_version = version_;
  h.message_type = type;
  h.sequence = sequence;
  return wire::encode_frame(h, payload);
}

// Requests without a session still reach the state machine, which records
// them as illegal.
OperatorResult Simulator::request_control(CommandMode mode, std::uint64_t tag) {
  if (!wire::mode_supported(version_, mode)) return OperatorResult::ModeNotSupported;
  Entry e;
  e.kind = EntryKind::Request;
  e.mode = mode;
  e.tag = tag;
  pipeline_.push_back(e);
  return session_.state() == SessionState::IDLE ? OperatorResult::NoSession : OperatorResult::Accepted;
}

OperatorResult Simulator::release_control(std::uint64_t tag) {
  Entry e;
  e.kind = EntryKind::Release;
  e.tag = tag;
  pipeline_.push_back(e);
  return session_.state() == SessionState::IDLE ? OperatorResult::NoSession : OperatorResult::Accepted;
}

void Simulator::inject_disturbance(const JointArray& torque, std::uint32_t duration_ticks) {
  state_ = sim::inject_disturbance(state_, torque, duration_ticks);
}

bool Simulator::command_matches_mode(const wire::CommandMessage& cmd, const Entry& monitor) const {
  if (cmd.client_command_mode != state_.active_mode) return false;
  if (session_.state() == SessionState::COMMANDING_WAIT && cmd.joint_position) {
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      if (std::abs((*cmd.joint_position)[i] - monitor.interpolated[i]) > 1e-9) return false;
    }
  }
  return true;
}

void Simulator::handle(const Datagram& d, Nanos now, std::vector<Outgoing>& out) {
  (void)now;
  wire::DecodedFrame frame;
  try {
    frame = wire::decode_frame(d.bytes, version_);
  } catch (const wire::WireError& e) {
    ++decode_errors_;
    log::debug("sim dropped datagram: %s", e.what());
    return;
  }

  if (const auto* join = std::get_if<wire::JoinMessage>(&frame.payload)) {
    const auto versions = join->supported_versions ? wire::versions_from_mask(*join->supported_versions)
                                                   : std::set<std::uint8_t>{frame.header.protocol_version};
    std::uint8_t agreed = 0;
    try {
      agreed = wire::negotiate_version(versions, cfg_.protocol_version);
    } catch (const wire::WireError& e) {
      log::warn("rejecting JOIN: %s", e.what());
      wire::FrameHeader h;
      h.protocol_version = frame.header.protocol_version;
      h.message_type = wire::MessageType::BYE;
      out.push_back({wire::encode_frame(h, wire::ByeMessage{wire::ByeReason::NO_COMMON_VERSION}), d.peer});
      return;
    }
    Entry e;
    e.kind = EntryKind::Join;
    e.tag = d.tag;
    e.peer = d.peer;
    e.version = agreed;
    pipeline_.push_back(e);
    return;
  }

  if (peer_ && d.peer != *peer_) return;  // single client per session

  if (std::holds_alternative<wire::ByeMessage>(frame.payload)) {
    Entry e;
    e.kind = EntryKind::Bye;
    e.tag = d.tag;
    pipeline_.push_back(e);
    return;
  }

  if (const auto* cmd = std::get_if<wire::CommandMessage>(&frame.payload)) {
    if (session_.state() == SessionState::IDLE) return;
    auto it = std::find_if(pipeline_.begin(), pipeline_.end(), [&](const Entry& e) {
      return e.kind == EntryKind::Monitor && e.sequence == cmd->reflected_sequence;
    });
    const bool fresh = it != pipeline_.end() && !it->outcome;
    if (fresh) {
      it->outcome = session::answer_outcome(it->sent_at, d.arrival, session_.config());
      it->mode_valid = command_matches_mode(*cmd, *it);
    }

    if (!wire::mode_supported(version_, cmd->client_command_mode)) {
      ++rejected_commands_;
      log::warn("%s command rejected under protocol version %d", std::string(lbr::to_string(cmd->client_command_mode)).c_str(),
                version_);
      out.push_back({encode(wire::ByeMessage{wire::ByeReason::MODE_NOT_SUPPORTED}, wire::MessageType::BYE, next_sequence_),
                     d.peer});
      Entry e;
      e.kind = EntryKind::Bye;
      e.tag = d.tag;
      pipeline_.push_back(e);
      return;
    }

    if (next_sequence_ == 0) return;
    const std::uint32_t latest = next_sequence_ - 1;
    const bool stale = latest - cmd->reflected_sequence > kMaxCommandAge;
    if (stale || cmd->client_command_mode != state_.active_mode) return;
    if (!freshest_ || cmd->reflected_sequence >= freshest_sequence_) {
      freshest_ = *cmd;
      freshest_sequence_ = cmd->reflected_sequence;
    }
  }
}

void Simulator::apply(SessionEvent event, bool mode_valid, std::uint64_t tag, Nanos now, const Entry* entry) {
  const SessionState from = session_.state();
  const session::Transition t = session_.apply(event, mode_valid);

  if (!t.illegal()) {
    if (event == SessionEvent::Join && entry) {
      peer_ = entry->peer;
      version_ = entry->version;
      dynamics_cfg_.protocol_version = version_;
    }
    if (event == SessionEvent::OperatorRequestsControl && entry) state_.active_mode = entry->mode;

    const bool was_active = from == SessionState::COMMANDING_ACTIVE;
    const bool is_active = t.next == SessionState::COMMANDING_ACTIVE;
    if (was_active && !is_active) {
      // Stop where we are.
      state_.setpoint = state_.q;
      state_.qd.setZero();
      state_.hold_pose.reset();
      freshest_.reset();
    }
    if (!was_active && is_active &&
        (state_.active_mode == CommandMode::WRENCH || state_.active_mode == CommandMode::CARTESIAN_POSE)) {
      state_.hold_pose = model::forward_kinematics(state_.q, variant_);
    }
    if (t.next == SessionState::IDLE) {
      pipeline_.erase(std::remove_if(pipeline_.begin(), pipeline_.end(),
                                     [](const Entry& e) { return e.kind == EntryKind::Monitor; }),
                      pipeline_.end());
    }
  } else {
    log::info("illegal %s in %s", std::string(session::to_string(event)).c_str(), std::string(lbr::to_string(from)).c_str());
  }

  if (on_session_event) on_session_event(TraceRecord{now, tag, event, from, t.next, t.action});
}

void Simulator::drain(Nanos now) {
  const Nanos deadline = session_.config().deadline();
  while (!pipeline_.empty()) {
    Entry& front = pipeline_.front();
    if (front.kind == EntryKind::Monitor && !front.outcome) {
      if (now - front.sent_at <= deadline) return;
      front.outcome = session::Outcome::MISSING;
    }
    const Entry e = front;
    pipeline_.pop_front();
    switch (e.kind) {
      case EntryKind::Monitor:
        switch (*e.outcome) {
          case session::Outcome::ON_TIME: ++outcomes_.on_time; break;
          case session::Outcome::LATE: ++outcomes_.late; break;
          case session::Outcome::MISSING: ++outcomes_.missing; break;
        }
        apply(session::event_for(*e.outcome), e.mode_valid, e.sequence, now, &e);
        break;
      case EntryKind::Join:
        apply(SessionEvent::Join, true, e.tag, now, &e);
        break;
      case EntryKind::Bye:
        apply(SessionEvent::Bye, true, e.tag, now, &e);
        break;
      case EntryKind::Request:
        apply(SessionEvent::OperatorRequestsControl, true, e.tag, now, &e);
        break;
      case EntryKind::Release:
        apply(SessionEvent::OperatorReleasesControl, true, e.tag, now, &e);
        break;
    }
  }
}

std::vector<Outgoing> Simulator::tick(std::span<const Datagram> inbox, Nanos now) {
  std::vector<Outgoing> out;
  for (const Datagram& d : inbox) handle(d, now, out);
  drain(now);

  std::optional<wire::CommandMessage> cmd;
  if (session_.state() == SessionState::COMMANDING_ACTIVE && freshest_) cmd = freshest_;
  freshest_.reset();
  if (cmd) {
    ++commands_applied_;
    if (on_command_applied) on_command_applied(*cmd);
  }
  state_ = step_dynamics(state_, cmd, dynamics_cfg_, variant_);
  ++state_.tick;

  if (session_.state() != SessionState::IDLE && peer_) {
    wire::MonitorMessage m;
    m.session_state = session_.state();
    m.connection_quality = session_.quality();
    m.control_mode = state_.active_mode;
    m.sample_period = cfg_.dt();
    m.measured_joint_position = model::to_array(state_.q);
    m.measured_torque = model::to_array(state_.commanded_torque);
    m.external_torque = model::to_array(state_.injected_external_torque);
    m.interpolated_command_position = model::to_array(state_.setpoint);
    m.timestamp = wire::to_timestamp(now);
    m.monitor_sequence = next_sequence_++;

    Entry e;
    e.kind = EntryKind::Monitor;
    e.sequence = m.monitor_sequence;
    e.sent_at = now;
    e.interpolated = m.interpolated_command_position;
    pipeline_.push_back(e);

    out.push_back({encode(m, wire::MessageType::MONITOR, m.monitor_sequence), *peer_});
    if (on_monitor_sent) on_monitor_sent(m);
  }

  if (state_.injected_ticks_remaining > 0 && --state_.injected_ticks_remaining == 0) {
    state_.injected_external_torque.setZero();
  }
  return out;
}

}  // namespace lbr::sim
