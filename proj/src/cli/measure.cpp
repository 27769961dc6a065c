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

#include <ostream>
#include <random>

#include "drive.hpp"

namespace lbr::cli {

using nlohmann::json;

namespace {

/// Answers with the hold echo and records what each monitor reported.
class Recorder : public client::ClientCallbacks {
 public:
  void on_monitor(const client::StateSample& s) override { record(s.monitor); }
  wire::CommandMessage on_wait_for_command(const client::StateSample& s) override {
    record(s.monitor);
    return s.hold();
  }
  wire::CommandMessage on_command(const client::StateSample& s) override {
    record(s.monitor);
    return s.hold();
  }

  std::optional<double> first;
  double last{0.0};
  double sample_period{0.0};
  std::uint64_t monitors{0};
  json quality_timeline = json::array();
  json state_timeline = json::array();

 private:
  void record(const wire::MonitorMessage& m) {
    const double t = to_seconds(wire::from_timestamp(m.timestamp));
    if (!first) first = t;
    last = t;
    sample_period = m.sample_period;
    ++monitors;
    const double rel = t - *first;
    if (!quality_ || *quality_ != m.connection_quality) {
      quality_ = m.connection_quality;
      quality_timeline.push_back({{"t", rel}, {"quality", std::string(to_string(m.connection_quality))}});
    }
    if (!state_ || *state_ != m.session_state) {
      state_ = m.session_state;
      state_timeline.push_back({{"t", rel}, {"state", std::string(to_string(m.session_state))}});
    }
  }

  std::optional<ConnectionQuality> quality_;
  std::optional<SessionState> state_;
};

}  // namespace

MeasureResult run_measure(const MeasureOptions& opts, std::ostream& out) {
  if (!(opts.delay_ms >= 0.0) || !(opts.jitter_ms >= 0.0)) throw CliError(kExitConfig, "delay and jitter must be >= 0");
  if (!(opts.duration > 0.0)) throw CliError(kExitConfig, "duration must be > 0");
  const auto variant = detail::load_target_variant(opts.target);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> spread(opts.delay_ms - opts.jitter_ms, opts.delay_ms + opts.jitter_ms);
  auto delay = [&]() -> Nanos {
    const double ms = opts.jitter_ms > 0.0 ? spread(rng) : opts.delay_ms;
    return from_seconds(std::max(0.0, ms) * 1e-3);
  };

  Recorder rec;
  client::ClientSession session(client::ClientConfig::for_variant(variant), rec);
  json initial_stats;
  json final_stats;
  const auto end = detail::drive(opts.target, variant, session, delay, [&](detail::Operator& op) {
    if (initial_stats.is_null()) initial_stats = op.request({{"event", "stats"}});
    if (!rec.first || rec.last - *rec.first < opts.duration) return false;
    final_stats = op.request({{"event", "stats"}});
    return true;
  });
  if (final_stats.is_null()) final_stats = end.stats;

  MeasureResult result;
  json& r = result.report;
  // Counted from the first monitor to the end of the measurement; the server
  // keeps lifetime totals.
  auto count = [&](const char* key) -> std::uint64_t {
    const auto before = initial_stats.value("outcomes", json::object()).value(key, 0ull);
    const auto after = final_stats.value("outcomes", json::object()).value(key, 0ull);
    return after >= before ? after - before : 0;
  };
  const std::uint64_t on_time = count("on_time");
  const std::uint64_t late = count("late");
  const std::uint64_t missing = count("missing");
  const std::uint64_t total = on_time + late + missing;

  r["report_version"] = kReportVersion;
  r["kind"] = "measure";
  r["config"] = {{"delay_ms", opts.delay_ms},
                 {"jitter_ms", opts.jitter_ms},
                 {"duration_s", opts.duration},
                 {"seed", opts.seed},
                 {"variant", variant.name}};
  r["transport"] = opts.target.loopback ? "loopback" : "udp";
  r["sample_period"] = rec.sample_period;
  r["monitors"] = rec.monitors;
  r["outcomes"] = {{"on_time", on_time}, {"late", late}, {"missing", missing}, {"total", total}};
  r["late_fraction"] = total ? static_cast<double>(late) / static_cast<double>(total) : 0.0;
  r["final_quality"] = rec.quality_timeline.empty() ? json(nullptr) : rec.quality_timeline.back()["quality"];
  r["final_state"] = rec.state_timeline.empty() ? json(nullptr) : rec.state_timeline.back()["state"];
  r["quality_timeline"] = rec.quality_timeline;
  r["state_timeline"] = rec.state_timeline;
  r["ended"] = detail::to_string(end.end);

  if (end.end != detail::DriveEnd::Stopped) {
    result.exit_code = kExitSession;
    out << "measure failed: " << detail::to_string(end.end) << '\n';
  } else {
    char line[200];
    std::snprintf(line, sizeof line, "%llu outcomes: %llu on time, %llu late, %llu missing (late fraction %.3f); quality %s",
                  static_cast<unsigned long long>(total), static_cast<unsigned long long>(on_time),
                  static_cast<unsigned long long>(late), static_cast<unsigned long long>(missing),
                  r["late_fraction"].get<double>(), r["final_quality"].get<std::string>().c_str());
    out << line << '\n';
  }
  if (opts.out) write_report(r, *opts.out);
  return result;
}

}  // namespace lbr::cli
