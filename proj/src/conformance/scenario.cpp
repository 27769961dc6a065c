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

#include "lbr/conformance/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "lbr/sim/simulator.hpp"

namespace lbr::conformance {

using nlohmann::json;

namespace {

EventKind parse_kind(const std::string& s) {
  if (s == "join") return EventKind::Join;
  if (s == "answer") return EventKind::Answer;
  if (s == "request_control") return EventKind::RequestControl;
  if (s == "release_control") return EventKind::ReleaseControl;
  if (s == "bye") return EventKind::Bye;
  throw ScenarioError("unknown event '" + s + "'");
}

session::Outcome parse_outcome(const std::string& s) {
  if (s == "on_time") return session::Outcome::ON_TIME;
  if (s == "late") return session::Outcome::LATE;
  if (s == "missing") return session::Outcome::MISSING;
  throw ScenarioError("unknown outcome '" + s + "'");
}

// Tags for non-answer events live above any monitor sequence a scenario can
// reach.
constexpr std::uint64_t kEventTagBase = 1ull << 40;

wire::Bytes frame(const wire::Payload& p, std::uint8_t version) {
  wire::FrameHeader h;
  h.protocol_version = version;
  h.message_type = wire::message_type_of(p);
  return wire::encode_frame(h, p);
}

/// Answer a well-behaved client would send for `m`, or a deliberately
/// mode-invalid one.
wire::CommandMessage scripted_answer(const wire::MonitorMessage& m, bool mode_valid, const model::RobotVariant& v) {
  wire::CommandMessage c;
  c.reflected_sequence = m.monitor_sequence;
  const bool commanding = is_commanding(m.session_state);
  const CommandMode mode = commanding ? m.control_mode : CommandMode::POSITION;
  if (!mode_valid) {
    c.client_command_mode = CommandMode::POSITION;
    c.joint_position = m.interpolated_command_position;
    if (mode == CommandMode::POSITION) (*c.joint_position)[0] += 0.01;
    return c;
  }
  c.client_command_mode = mode;
  switch (mode) {
    case CommandMode::POSITION:
      c.joint_position = m.interpolated_command_position;
      break;
    case CommandMode::TORQUE:
      c.joint_position = m.interpolated_command_position;
      c.torque_overlay = JointArray{};
      break;
    case CommandMode::WRENCH:
      c.wrench_overlay = WrenchArray{};
      break;
    case CommandMode::CARTESIAN_POSE:
      c.cartesian_pose = model::forward_kinematics(model::to_eigen(m.interpolated_command_position), v).to_array();
      break;
  }
  return c;
}

}  // namespace

Scenario parse_scenario(const json& j) {
  Scenario s;
  try {
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", "");
    s.variant = j.value("variant", s.variant);
    s.sample_period = j.value("sample_period", s.sample_period);
    s.protocol_version = j.value("protocol_version", s.protocol_version);
    if (!(s.sample_period > 0.0)) throw ScenarioError("sample_period must be > 0");

    for (const auto& e : j.at("events")) {
      ScenarioEvent ev;
      ev.t = e.at("t").get<double>();
      ev.kind = parse_kind(e.at("event").get<std::string>());
      if (ev.kind == EventKind::Answer) {
        ev.outcome = parse_outcome(e.value("outcome", "on_time"));
        ev.mode_valid = e.value("mode_valid", true);
      }
      if (ev.kind == EventKind::RequestControl) {
        const auto name = e.value("mode", "POSITION");
        const auto mode = parse_command_mode(name);
        if (!mode) throw ScenarioError("unknown mode '" + name + "'");
        ev.mode = *mode;
      }
      const int repeat = e.value("repeat", 1);
      if (repeat < 1) throw ScenarioError("repeat must be >= 1");
      for (int i = 0; i < repeat; ++i) {
        ScenarioEvent r = ev;
        r.t = ev.t + i * s.sample_period;
        s.events.push_back(r);
      }
    }
    for (const auto& line : j.value("expected_trace", json::array())) s.expected_trace.push_back(line.get<std::string>());
  } catch (const json::exception& e) {
    throw ScenarioError("scenario '" + s.name + "': " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path.string());
  try {
    return parse_scenario(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

std::string format_trace_line(double time, SessionState state, session::Action action) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6f %s %s", time, std::string(to_string(state)).c_str(),
                std::string(session::to_string(action)).c_str());
  return buf;
}

std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& config_dir) {
  return run_scenario(scenario, model::load_variant(scenario.variant, config_dir));
}

RunResult run_scenario(const Scenario& scenario, const model::RobotVariant& variant) {
  sim::SimConfig cfg;
  cfg.variant = scenario.variant;
  cfg.sample_period = from_seconds(scenario.sample_period);
  cfg.protocol_version = scenario.protocol_version;
  cfg.real_time = false;
  sim::Simulator sim(cfg, variant);

  RunResult result;
  std::map<std::uint64_t, double> monitor_time;  // monitor sequence -> scenario time
  std::size_t applied = 0;
  sim.on_session_event = [&](const sim::TraceRecord& r) {
    double t = 0.0;
    if (session::is_answer(r.event)) {
      auto it = monitor_time.find(r.tag);
      if (it == monitor_time.end()) return;  // unscripted monitor
      t = it->second;
    } else {
      if (r.tag < kEventTagBase) return;
      t = scenario.events.at(r.tag - kEventTagBase).t;
    }
    ++applied;
    if (r.is_transition()) result.trace.push_back(format_trace_line(t, r.to, r.action));
  };

  std::vector<sim::Datagram> in_flight;
  std::size_t next = 0;
  const Nanos dt = cfg.sample_period;
  Nanos now{0};
  std::uint64_t idle_ticks = 0;

  while (applied < scenario.events.size()) {
    // Operator and client control events go in before the next tick.
    while (next < scenario.events.size() && scenario.events[next].kind != EventKind::Answer) {
      const ScenarioEvent& e = scenario.events[next];
      const std::uint64_t tag = kEventTagBase + next;
      switch (e.kind) {
        case EventKind::Join:
          in_flight.push_back({frame(wire::JoinMessage{}, scenario.protocol_version), now, 0, tag});
          break;
        case EventKind::Bye:
          in_flight.push_back({frame(wire::ByeMessage{wire::ByeReason::NORMAL}, scenario.protocol_version), now, 0, tag});
          break;
        case EventKind::RequestControl:
          if (sim.request_control(e.mode, tag) == sim::OperatorResult::ModeNotSupported)
            throw ScenarioError(scenario.name + ": mode " + std::string(to_string(e.mode)) + " not supported");
          break;
        case EventKind::ReleaseControl:
          sim.release_control(tag);
          break;
        case EventKind::Answer:
          break;
      }
      ++next;
    }

    std::vector<sim::Datagram> due;
    auto split = std::stable_partition(in_flight.begin(), in_flight.end(),
                                       [&](const sim::Datagram& d) { return d.arrival > now; });
    due.assign(split, in_flight.end());
    in_flight.erase(split, in_flight.end());

    const std::size_t before = applied;
    for (const sim::Outgoing& out : sim.tick(due, now)) {
      const auto decoded = wire::decode_frame(out.bytes, scenario.protocol_version);
      const auto* m = std::get_if<wire::MonitorMessage>(&decoded.payload);
      if (!m) continue;
      if (next >= scenario.events.size() || scenario.events[next].kind != EventKind::Answer) continue;
      const ScenarioEvent& e = scenario.events[next];
      monitor_time[m->monitor_sequence] = e.t;
      ++next;
      if (e.outcome == session::Outcome::MISSING) continue;
      const Nanos arrival = e.outcome == session::Outcome::ON_TIME ? now : now + dt + dt / 2;
      in_flight.push_back({frame(scripted_answer(*m, e.mode_valid, variant), decoded.header.protocol_version), arrival, 0, 0});
    }
    now += dt;
    ++result.ticks;

    idle_ticks = applied == before ? idle_ticks + 1 : 0;
    if (idle_ticks > 100) {
      result.message = "stalled after " + std::to_string(applied) + " of " + std::to_string(scenario.events.size()) +
                       " events (answers need a session that sends monitors)";
      result.first_divergence = result.trace.size();
      return result;
    }
  }

  const auto& want = scenario.expected_trace;
  const std::size_t n = std::min(want.size(), result.trace.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (want[i] != result.trace[i]) {
      result.first_divergence = i;
      result.message = "line " + std::to_string(i + 1) + ": expected '" + want[i] + "', got '" + result.trace[i] + "'";
      return result;
    }
  }
  if (want.size() != result.trace.size()) {
    result.first_divergence = n;
    result.message = want.size() > n ? "trace ends early; expected '" + want[n] + "'"
                                     : "unexpected extra line '" + result.trace[n] + "'";
    return result;
  }
  result.passed = true;
  result.message = std::to_string(result.trace.size()) + " transitions match";
  return result;
}

}  // namespace lbr::conformance
