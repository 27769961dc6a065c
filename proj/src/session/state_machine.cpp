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

#include "lbr/session/state_machine.hpp"

#include <array>

namespace lbr::session {

namespace {

constexpr std::array<std::string_view, 7> kEventNames{
    "Join", "AnswerOnTime", "AnswerLate", "AnswerMissing", "OperatorRequestsControl", "OperatorReleasesControl", "Bye"};

bool good_enough(ConnectionQuality q) { return q >= ConnectionQuality::GOOD; }

}  // namespace

std::string_view to_string(SessionEvent e) { return kEventNames[static_cast<std::size_t>(e)]; }

std::optional<SessionEvent> parse_session_event(std::string_view s) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == s) return static_cast<SessionEvent>(i);
  }
  return std::nullopt;
}

SessionEvent event_for(Outcome o) {
  switch (o) {
    case Outcome::ON_TIME: return SessionEvent::AnswerOnTime;
    case Outcome::LATE: return SessionEvent::AnswerLate;
    case Outcome::MISSING: return SessionEvent::AnswerMissing;
  }
  return SessionEvent::AnswerMissing;
}

bool is_answer(SessionEvent e) {
  return e == SessionEvent::AnswerOnTime || e == SessionEvent::AnswerLate || e == SessionEvent::AnswerMissing;
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::None: return "-";
    case Action::SafetyStop: return "SafetyStop";
    case Action::IllegalEvent: return "IllegalEvent";
  }
  return "?";
}

Transition step_server(SessionState state, SessionEvent event, ConnectionQuality quality, std::uint32_t streak,
                       const WatchdogConfig& cfg) {
  using S = SessionState;
  using E = SessionEvent;
  const Transition illegal{state, Action::IllegalEvent};

  if (event == E::Bye) return {S::IDLE};
  if (event == E::Join) return state == S::IDLE ? Transition{S::MONITORING_WAIT} : illegal;

  switch (state) {
    case S::IDLE:
      return illegal;

    case S::MONITORING_WAIT:
      if (is_answer(event)) return {good_enough(quality) ? S::MONITORING_READY : S::MONITORING_WAIT};
      return illegal;

    case S::MONITORING_READY:
      if (is_answer(event)) return {good_enough(quality) ? S::MONITORING_READY : S::MONITORING_WAIT};
      if (event == E::OperatorRequestsControl) return {S::COMMANDING_WAIT};
      return illegal;

    case S::COMMANDING_WAIT:
      if (is_answer(event)) {
        if (!good_enough(quality)) return {S::MONITORING_WAIT};
        if (streak >= cfg.activation_streak) return {S::COMMANDING_ACTIVE};
        return {S::COMMANDING_WAIT};
      }
      if (event == E::OperatorReleasesControl) return {S::MONITORING_READY};
      return illegal;

    case S::COMMANDING_ACTIVE:
      if (event == E::AnswerMissing || (is_answer(event) && !good_enough(quality)))
        return {S::MONITORING_WAIT, Action::SafetyStop};
      if (is_answer(event)) return {S::COMMANDING_ACTIVE};
      if (event == E::OperatorReleasesControl) return {S::MONITORING_READY};
      return illegal;
  }
  return illegal;
}

SessionState step_client(SessionState, const wire::MonitorMessage& monitor) { return monitor.session_state; }

ServerSession::ServerSession(WatchdogConfig cfg) : cfg_(cfg) { cfg_.validate(); }

Transition ServerSession::apply(SessionEvent event, bool mode_valid) {
  if (is_answer(event)) {
    if (state_ == SessionState::IDLE) return {state_, Action::IllegalEvent};
    const Outcome o = event == SessionEvent::AnswerOnTime ? Outcome::ON_TIME
                      : event == SessionEvent::AnswerLate ? Outcome::LATE
                                                          : Outcome::MISSING;
    quality_.push(o);
    streak_ = (o == Outcome::ON_TIME && mode_valid) ? streak_ + 1 : 0;
  }

  const Transition t = step_server(state_, event, quality_.reported(), streak_, cfg_);
  if (t.illegal()) return t;

  if (event == SessionEvent::Join) quality_.reset();
  if (t.action == Action::SafetyStop) quality_.reset();
  if (t.next == SessionState::COMMANDING_WAIT && state_ != SessionState::COMMANDING_WAIT) streak_ = 0;
  if (!is_commanding(t.next)) streak_ = 0;
  state_ = t.next;
  return t;
}

}  // namespace lbr::session
