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
#include <string_view>

#include "lbr/session/quality.hpp"
#include "lbr/types.hpp"
#include "lbr/wire/messages.hpp"

namespace lbr::session {

enum class SessionEvent : std::uint8_t {
  Join,
  AnswerOnTime,
  AnswerLate,
  AnswerMissing,
  OperatorRequestsControl,
  OperatorReleasesControl,
  Bye,
};

std::string_view to_string(SessionEvent e);
std::optional<SessionEvent> parse_session_event(std::string_view s);
SessionEvent event_for(Outcome o);
bool is_answer(SessionEvent e);

enum class Action : std::uint8_t {
  None,
  SafetyStop,    // command authority revoked; quality window reset
  IllegalEvent,  // event rejected; state unchanged
};

std::string_view to_string(Action a);

struct Transition {
  SessionState next;
  Action action{Action::None};

  bool illegal() const { return action == Action::IllegalEvent; }
  bool operator==(const Transition&) const = default;
};

/// Server-side transition function. `quality` and `streak` are the values
/// after the event's outcome has been accounted for.
Transition step_server(SessionState state, SessionEvent event, ConnectionQuality quality, std::uint32_t streak,
                       const WatchdogConfig& cfg);

/// The client mirrors whatever state the controller reports.
SessionState step_client(SessionState state, const wire::MonitorMessage& monitor);

/// Server session bookkeeping around step_server: owns the quality estimator
/// and the activation streak.
class ServerSession {
 public:
  explicit ServerSession(WatchdogConfig cfg);

  /// `mode_valid` only matters for AnswerOnTime while in COMMANDING_WAIT.
  Transition apply(SessionEvent event, bool mode_valid = true);

  SessionState state() const { return state_; }
  ConnectionQuality quality() const { return quality_.reported(); }
  std::uint32_t streak() const { return streak_; }
  const QualityEstimator& estimator() const { return quality_; }
  const WatchdogConfig& config() const { return cfg_; }

 private:
  WatchdogConfig cfg_;
  SessionState state_{SessionState::IDLE};
  QualityEstimator quality_;
  std::uint32_t streak_{0};
};

}  // namespace lbr::session
