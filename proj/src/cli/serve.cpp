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

#include <atomic>
#include <csignal>
#include <ostream>

#include "lbr/cli/cli.hpp"
#include "lbr/net/server.hpp"

namespace lbr::cli {

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

int run_serve(const ServeOptions& opts, std::ostream& out, std::ostream& err) {
  model::RobotVariant variant;
  try {
    variant = model::load_variant(opts.sim.variant, opts.config_dir);
    opts.sim.validate();
  } catch (const model::ModelError& e) {
    err << "serve: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sim::SimError& e) {
    err << "serve: " << e.what() << '\n';
    return kExitConfig;
  }
  if (opts.duration && !(*opts.duration > 0.0)) {
    err << "serve: duration must be > 0\n";
    return kExitConfig;
  }

  std::optional<net::SimServer> server;
  try {
    server.emplace(opts.sim, variant);
  } catch (const net::NetError& e) {
    err << "serve: " << e.what() << '\n';
    return kExitBind;
  }
  server->log_rate_hz = opts.log_rate_hz;
  server->on_log_line = [&](const std::string& line) { out << line << '\n' << std::flush; };

  char line[200];
  std::snprintf(line, sizeof line, "serving %s at %.1f Hz, protocol v%d, udp %s:%u, control %u%s", variant.name.c_str(),
                1.0 / opts.sim.dt(), opts.sim.protocol_version, opts.sim.bind_address.c_str(), server->port(),
                server->control_port(), opts.sim.real_time ? "" : ", lockstep");
  out << line << '\n' << std::flush;

  g_stop = false;
  auto old_int = std::signal(SIGINT, on_signal);
  auto old_term = std::signal(SIGTERM, on_signal);
  server->run(g_stop, opts.duration ? std::optional<Nanos>(from_seconds(*opts.duration)) : std::nullopt);
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);

  const auto t = server->timing();
  std::snprintf(line, sizeof line, "stopped: %llu monitors, mean period %.4f ms, p99 jitter %.4f ms, max jitter %.4f ms",
                static_cast<unsigned long long>(t.monitors), t.mean_period * 1e3, t.p99_jitter * 1e3,
                t.max_jitter * 1e3);
  out << line << '\n';
  return kExitOk;
}

}  // namespace lbr::cli
