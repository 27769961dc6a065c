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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lbr/model/robot_model.hpp"
#include "lbr/session/state_machine.hpp"

namespace lbr::conformance {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EventKind { Join, Answer, RequestControl, ReleaseControl, Bye };

/// One scripted event, after `repeat` expansion.
struct ScenarioEvent {
  double t{0.0};  // seconds; used to label trace lines
  EventKind kind{EventKind::Answer};
  session::Outcome outcome{session::Outcome::ON_TIME};  // answers only
  bool mode_valid{true};                                // answers only
  CommandMode mode{CommandMode::POSITION};              // request_control only
};

struct Scenario {
  std::string name;
  std::string description;
  std::string variant{"med7"};
  double sample_period{0.005};
  std::uint8_t protocol_version{2};
  std::vector<ScenarioEvent> events;
  std::vector<std::string> expected_trace;
};

/// Schema:
///   {"name", "description"?, "variant"?, "sample_period"?, "protocol_version"?,
///    "events": [{"t", "event": join|answer|request_control|release_control|bye,
///                "outcome"?: on_time|late|missing, "mode_valid"?, "mode"?, "repeat"?}],
///    "expected_trace": ["<time> <STATE> <action>", ...]}
/// Repeated events are spaced one sample period apart.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// `time state action`, time with six decimals.
std::string format_trace_line(double time, SessionState state, session::Action action);

struct RunResult {
  std::vector<std::string> trace;
  bool passed{false};
  /// Index of the first line where trace and expected_trace differ.
  std::optional<std::size_t> first_divergence;
  std::string message;
  std::uint64_t ticks{0};
};

/// Replays the scenario against a Simulator in virtual time with a scripted
/// client and compares the emitted trace with expected_trace.
RunResult run_scenario(const Scenario& scenario, const model::RobotVariant& variant);
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& config_dir);

/// Scenario files in `dir` (*.json), sorted by file name.
std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir);

}  // namespace lbr::conformance
