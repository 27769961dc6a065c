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
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbr/client/client.hpp"
#include "lbr/sim/simulator.hpp"

namespace lbr::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitBind = 3,
  kExitSession = 4,
  kExitConformance = 5,
};

inline constexpr int kReportVersion = 1;

/// Carries the exit code the failing subcommand should return.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

/// Where a client subcommand connects. With `loopback` the simulator runs
/// in-process in virtual time and nothing touches the network.
struct Target {
  bool loopback{false};
  std::string host{"127.0.0.1"};
  std::uint16_t port{30200};
  std::uint16_t control_port{30201};

  std::string variant{"med7"};
  std::filesystem::path config_dir;
  /// Loopback simulator only.
  double hz{200.0};
  int protocol_version{2};
};

enum class DemoKind { Sine, Hold, WrenchPress };

struct DemoSpec {
  DemoKind kind{DemoKind::Sine};
  int joint{0};
  double amplitude{0.04};  // rad
  double frequency{0.25};  // Hz
  CommandMode mode{CommandMode::POSITION};
  double force{10.0};  // N, wrench-press only

  static constexpr double kMaxAmplitude = 0.2;
  static constexpr double kMaxFrequency = 2.0;
  static constexpr double kMaxForce = 30.0;

  /// Throws CliError(kExitConfig).
  void validate() const;
};

std::optional<DemoKind> parse_demo_kind(const std::string& s);
const char* to_string(DemoKind k);

struct DemoOptions {
  DemoSpec spec;
  Target target;
  double duration{20.0};  // s of COMMANDING_ACTIVE
  double timeout{10.0};   // s allowed to reach COMMANDING_ACTIVE
  /// Samples before this much active time are excluded from the steady-state
  /// statistics.
  double settle{1.0};
  std::optional<std::filesystem::path> out;
};

struct DemoResult {
  int exit_code{kExitOk};
  nlohmann::json report;
  /// Every command the client transmitted while active, in order.
  std::vector<wire::CommandMessage> commands;
};

/// Sine: q_cmd[j] = q0[j] + A·sin(2πft) from the first active tick. Hold:
/// q_cmd = q0. Wrench-press: pushes the flange along -z with a force ramped
/// to `force` over one second. Tracking error is ‖q_measured − q_cmd‖∞ per
/// monitor, where q_cmd is the demo's own reference for that monitor.
DemoResult run_demo(const DemoOptions& opts, std::ostream& out);

struct MeasureOptions {
  Target target;
  double delay_ms{0.0};
  double jitter_ms{0.0};
  double duration{5.0};  // s after the first monitor
  std::uint64_t seed{1};
  std::optional<std::filesystem::path> out;
};

struct MeasureResult {
  int exit_code{kExitOk};
  nlohmann::json report;
};

/// Answers every monitor after a delay drawn from uniform(mean ± jitter)
/// (clipped at zero) and reports outcome counts and the quality and state
/// timelines the client observed.
MeasureResult run_measure(const MeasureOptions& opts, std::ostream& out);

struct ServeOptions {
  sim::SimConfig sim;
  std::filesystem::path config_dir;
  std::optional<double> duration;  // s; until SIGINT when empty
  double log_rate_hz{1.0};
};

/// Runs the simulator server until SIGINT (or `duration`).
int run_serve(const ServeOptions& opts, std::ostream& out, std::ostream& err);

/// Replays every scenario file (directories are expanded). Exit 5 if any
/// trace diverges, 2 if a file does not parse.
int run_conformance(const std::vector<std::filesystem::path>& paths, const std::filesystem::path& config_dir,
                    std::ostream& out, std::ostream& err);

/// Prints the field dump of a hex-encoded frame.
int run_decode(const std::string& hex, std::ostream& out, std::ostream& err);

/// Entry point of the `lbr-kit` tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes `report` to `path` (pretty-printed); throws CliError(kExitConfig).
void write_report(const nlohmann::json& report, const std::filesystem::path& path);

}  // namespace lbr::cli
