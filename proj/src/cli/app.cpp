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

#include <CLI11.hpp>

#include <ostream>

#include "lbr/cli/cli.hpp"
#include "lbr/log.hpp"

namespace lbr::cli {

namespace {

void add_target_options(CLI::App* cmd, Target& t) {
  cmd->add_option("--host", t.host, "Simulator host")->capture_default_str();
  cmd->add_option("--port", t.port, "Simulator UDP port")->capture_default_str();
  cmd->add_option("--control-port", t.control_port, "Simulator control port")->capture_default_str();
  cmd->add_option("--variant", t.variant, "Robot variant (iiwa7, iiwa14, med7, med14)")->capture_default_str();
  cmd->add_flag("--loopback", t.loopback, "Run an in-process simulator in virtual time instead of connecting");
  cmd->add_option("--hz", t.hz, "Loopback sample rate")->capture_default_str()->check(CLI::Range(10.0, 1000.0));
  cmd->add_option("--version", t.protocol_version, "Loopback protocol version")
      ->capture_default_str()
      ->check(CLI::Range(1, 2));
}

CommandMode mode_from(const std::string& s) {
  const auto m = parse_command_mode(s);
  if (!m) throw CliError(kExitConfig, "unknown mode '" + s + "'");
  return *m;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulated FRI-style controller, client SDK and tools", "lbr-kit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_dir = model::default_config_dir().string();
  app.add_option("--config-dir", config_dir, "Directory holding the variant configs")->capture_default_str();

  // serve
  ServeOptions serve;
  double serve_hz = 200.0;
  int serve_version = 2;
  bool lockstep = false;
  double serve_duration = 0.0;
  auto* serve_cmd = app.add_subcommand("serve", "Run the simulator until SIGINT");
  serve_cmd->add_option("--variant", serve.sim.variant, "Robot variant (iiwa7, iiwa14, med7, med14)")
      ->capture_default_str();
  serve_cmd->add_option("--hz", serve_hz, "Sample rate")->capture_default_str();
  serve_cmd->add_option("--version", serve_version, "Protocol version offered (1 or 2)")->capture_default_str();
  serve_cmd->add_option("--bind", serve.sim.bind_address, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.sim.port, "UDP port (0 picks one)")->capture_default_str();
  serve_cmd->add_option("--control-port", serve.sim.control_port, "Control port (0 picks one)")->capture_default_str();
  serve_cmd->add_option("--log-rate", serve.log_rate_hz, "State lines per second (0 disables)")->capture_default_str();
  serve_cmd->add_option("--duration", serve_duration, "Stop after this many seconds of simulator time");
  serve_cmd->add_flag("--lockstep", lockstep, "Advance virtual time with the client's answers instead of the wall clock");

  // demo
  DemoOptions demo;
  std::string demo_name = "sine";
  std::string demo_mode;
  std::string demo_out;
  auto* demo_cmd = app.add_subcommand("demo", "Run a demo client (sine, hold, wrench-press)");
  demo_cmd->add_option("name", demo_name, "sine | hold | wrench-press")->capture_default_str();
  demo_cmd->add_option("--joint", demo.spec.joint, "Joint index 0-6")->capture_default_str();
  demo_cmd->add_option("--amplitude", demo.spec.amplitude, "Sine amplitude, rad (max 0.2)")->capture_default_str();
  demo_cmd->add_option("--frequency", demo.spec.frequency, "Sine frequency, Hz (max 2)")->capture_default_str();
  demo_cmd->add_option("--force", demo.spec.force, "Wrench-press force, N (max 30)")->capture_default_str();
  demo_cmd->add_option("--mode", demo_mode, "POSITION, TORQUE, WRENCH or CARTESIAN_POSE");
  demo_cmd->add_option("--duration", demo.duration, "Seconds of COMMANDING_ACTIVE")->capture_default_str();
  demo_cmd->add_option("--timeout", demo.timeout, "Seconds allowed to reach COMMANDING_ACTIVE")->capture_default_str();
  demo_cmd->add_option("--out", demo_out, "Write the JSON report here");
  add_target_options(demo_cmd, demo.target);

  // measure
  MeasureOptions measure;
  std::string measure_out;
  auto* measure_cmd = app.add_subcommand("measure", "Answer with artificial delay and report link quality");
  measure_cmd->add_option("--delay-ms", measure.delay_ms, "Mean answer delay, ms")->capture_default_str();
  measure_cmd->add_option("--jitter-ms", measure.jitter_ms, "Half-width of the uniform delay spread, ms")
      ->capture_default_str();
  measure_cmd->add_option("--duration", measure.duration, "Seconds to measure")->capture_default_str();
  measure_cmd->add_option("--seed", measure.seed, "Seed for the delay generator")->capture_default_str();
  measure_cmd->add_option("--out", measure_out, "Write the JSON report here");
  add_target_options(measure_cmd, measure.target);

  // conformance
  std::vector<std::string> scenario_paths;
  auto* conf_cmd = app.add_subcommand("conformance", "Replay scenario files against the simulator");
  conf_cmd->add_option("scenarios", scenario_paths, "Scenario files or directories");

  // decode
  std::vector<std::string> hex;
  auto* decode_cmd = app.add_subcommand("decode", "Print the fields of a hex-encoded frame");
  decode_cmd->add_option("hex", hex, "Frame bytes in hex (spaces allowed)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*serve_cmd) {
      serve.config_dir = config_dir;
      if (!(serve_hz > 0.0)) throw CliError(kExitConfig, "--hz must be > 0");
      serve.sim.sample_period = from_seconds(1.0 / serve_hz);
      serve.sim.protocol_version = static_cast<std::uint8_t>(serve_version);
      serve.sim.real_time = !lockstep;
      if (serve_cmd->count("--duration")) serve.duration = serve_duration;
      if (serve_version < 1 || serve_version > 2) throw CliError(kExitConfig, "--version must be 1 or 2");
      return run_serve(serve, out, err);
    }
    if (*demo_cmd) {
      const auto kind = parse_demo_kind(demo_name);
      if (!kind) throw CliError(kExitConfig, "unknown demo '" + demo_name + "' (sine, hold, wrench-press)");
      demo.spec.kind = *kind;
      demo.spec.mode = !demo_mode.empty()              ? mode_from(demo_mode)
                       : *kind == DemoKind::WrenchPress ? CommandMode::WRENCH
                                                        : CommandMode::POSITION;
      demo.target.config_dir = config_dir;
      if (!demo_out.empty()) demo.out = demo_out;
      return run_demo(demo, out).exit_code;
    }
    if (*measure_cmd) {
      measure.target.config_dir = config_dir;
      if (!measure_out.empty()) measure.out = measure_out;
      return run_measure(measure, out).exit_code;
    }
    if (*conf_cmd) {
      return run_conformance({scenario_paths.begin(), scenario_paths.end()}, config_dir, out, err);
    }
    if (*decode_cmd) {
      std::string joined;
      for (const auto& h : hex) joined += h + ' ';
      return run_decode(joined, out, err);
    }
  } catch (const CliError& e) {
    err << "lbr-kit: " << e.what() << '\n';
    return e.code();
  }
  return kExitOk;
}

}  // namespace lbr::cli
