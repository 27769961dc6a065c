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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbr/cli/cli.hpp"
#include "lbr/conformance/scenario.hpp"
#include "lbr/model/kinematics.hpp"
#include "lbr/net/server.hpp"
#include "lbr/net/udp_client.hpp"
#include "lbr/sim/loopback.hpp"
#include "support/crc_oracle.hpp"
#include "support/generators.hpp"
#include "support/scenario_oracle.hpp"
#include "support/session_oracle.hpp"

namespace {

using namespace lbr;
using model::Vector6d;
using model::Vector7d;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kConfigDir = LBR_KIT_TEST_CONFIG_DIR;
const std::filesystem::path kScenarioDir = LBR_KIT_TEST_SCENARIO_DIR;

struct Verdict {
  bool pass{true};
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

wire::Bytes frame_of(const wire::Payload& p, std::uint8_t version, std::uint32_t seq) {
  wire::FrameHeader h;
  h.protocol_version = version;
  h.message_type = wire::message_type_of(p);
  h.sequence = seq;
  return wire::encode_frame(h, p);
}

bool rejected(const wire::Bytes& b, std::uint8_t reader) {
  try {
    wire::decode_frame(b, reader);
    return false;
  } catch (const wire::WireError&) {
    return true;
  }
}

// ---------------------------------------------------------------------------

Verdict wire_round_trip() {
  testing::Gen g(1001);
  const auto start = Clock::now();
  int failures = 0;
  for (int n = 0; n < 10000; ++n) {
    const auto v = static_cast<std::uint8_t>(g.integer(1, 2));
    const auto seq = g.u32();
    wire::Payload p;
    if (n % 2 == 0) p = g.monitor();
    else p = g.command(v);
    const auto d = wire::decode_frame(frame_of(p, v, seq), v);
    if (!(d.payload == p) || d.header.sequence != seq || d.header.protocol_version != v) ++failures;
  }
  const double secs = seconds_since(start);
  return {failures == 0 && secs < 5.0, fmt("10000 messages, %d mismatches, %.3f s (limit 5 s)", failures, secs)};
}

Verdict corruption_detection() {
  const wire::Bytes join = wire::parse_hex("46 52 49 31 01 00 00 00 00 00 00 00 ff 48 16 13");
  bool golden_ok = !rejected(join, 1) && frame_of(wire::JoinMessage{}, 1, 0) == join;

  wire::MonitorMessage m;
  m.session_state = SessionState::COMMANDING_ACTIVE;
  m.connection_quality = ConnectionQuality::GOOD;
  m.control_mode = CommandMode::TORQUE;
  m.sample_period = 0.005;
  m.measured_joint_position = {0.1, 0.4, -0.2, -1.2, 0.05, 0.8, 0.3};
  m.measured_torque = {1.5, -2.0, 0.25, 3.0, -0.5, 0.125, 0.0};
  m.external_torque = {0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0};
  m.interpolated_command_position = {0.1, 0.4, -0.2, -1.2, 0.05, 0.8, 0.3};
  m.timestamp = {12, 345000000};
  m.monitor_sequence = 2469;
  const wire::Bytes monitor = frame_of(m, 2, 2469);
  const std::size_t body = monitor.size() - 4;
  const std::uint32_t stored = monitor[body] | (monitor[body + 1] << 8) | (monitor[body + 2] << 16) |
                               (static_cast<std::uint32_t>(monitor[body + 3]) << 24);
  golden_ok = golden_ok && stored == testing::bitwise_crc32(std::span(monitor).first(body)) && !rejected(monitor, 2);

  std::uint64_t trials = 0, caught = 0;
  for (const auto* frame : {&join, &monitor}) {
    const std::uint8_t reader = frame == &join ? 1 : 2;
    for (std::size_t i = 0; i < frame->size(); ++i) {
      for (int x = 1; x < 256; ++x) {
        wire::Bytes c = *frame;
        c[i] ^= static_cast<std::uint8_t>(x);
        ++trials;
        if (rejected(c, reader)) ++caught;
      }
    }
  }
  return {golden_ok && caught == trials,
          fmt("golden frames %s; %llu/%llu single-byte corruptions rejected (%zu + %zu bytes x 255 values)",
              golden_ok ? "valid" : "INVALID", static_cast<unsigned long long>(caught),
              static_cast<unsigned long long>(trials), join.size(), monitor.size())};
}

Verdict multi_version() {
  testing::Gen g(1003);
  int bad = 0, with_pose = 0;
  for (int n = 0; n < 1000; ++n) {
    // Every fourth frame is forced to carry a cartesian pose.
    wire::CommandMessage c = g.command(2);
    if (n % 4 == 0) {
      c = {};
      c.client_command_mode = CommandMode::CARTESIAN_POSE;
      c.cartesian_pose = g.pose();
      c.reflected_sequence = g.u32();
    }
    const auto d = wire::decode_frame(frame_of(c, 2, static_cast<std::uint32_t>(n)), 1);
    const auto& got = std::get<wire::CommandMessage>(d.payload);
    wire::CommandMessage expect = c;
    expect.cartesian_pose.reset();
    const std::vector<std::uint8_t> skipped =
        c.cartesian_pose ? std::vector<std::uint8_t>{wire::field::kCartesianPose} : std::vector<std::uint8_t>{};
    if (c.cartesian_pose) ++with_pose;
    if (!(got == expect) || d.skipped_fields != skipped) ++bad;
  }

  struct Row {
    std::set<std::uint8_t> client;
    std::uint8_t server;
    int expect;  // 0 = NoCommonVersion
  };
  const std::vector<Row> table{{{1}, 1, 1}, {{1}, 2, 1}, {{2}, 1, 0}, {{2}, 2, 2}, {{1, 2}, 1, 1}, {{1, 2}, 2, 2}};
  int matrix_bad = 0;
  for (const auto& r : table) {
    int got;
    try {
      got = wire::negotiate_version(r.client, r.server);
    } catch (const wire::WireError& e) {
      got = e.code() == wire::WireErrc::NoCommonVersion ? 0 : -1;
    }
    if (got != r.expect) ++matrix_bad;
  }
  return {bad == 0 && matrix_bad == 0 && with_pose > 0,
          fmt("v1 reader: %d/1000 frames wrong (%d carried a pose); negotiation matrix: %d/6 cells wrong", bad,
              with_pose, matrix_bad)};
}

Verdict session_conformance() {
  const std::vector<std::string> required{"happy-path-activation", "quality-degradation", "watchdog-safetystop",
                                          "bye",                   "illegal-join",        "flapping-link"};
  std::set<std::string> names;
  int divergent = 0, stale = 0;
  std::string first;
  const auto files = conformance::list_scenarios(kScenarioDir);
  for (const auto& f : files) {
    std::ifstream in(f);
    const json j = json::parse(in);
    const auto s = conformance::parse_scenario(j);
    names.insert(s.name);
    if (testing::oracle_trace(j) != s.expected_trace) ++stale;
    const auto r = conformance::run_scenario(s, kConfigDir);
    if (!r.passed) {
      ++divergent;
      if (first.empty()) first = s.name + ": " + r.message;
    }
  }
  int missing = 0;
  for (const auto& n : required) missing += names.count(n) ? 0 : 1;
  return {files.size() >= 6 && missing == 0 && divergent == 0 && stale == 0,
          fmt("%zu scenarios, %d required missing, %d differ from the oracle, %d diverge on replay%s%s", files.size(),
              missing, stale, divergent, first.empty() ? "" : "; ", first.c_str())};
}

struct QuietClient : client::ClientCallbacks {};

Verdict quality_thresholds() {
  const auto variant = model::load_variant("med7", kConfigDir);
  std::string detail;
  bool pass = true;
  for (const double factor : {0.0, 1.5, 4.0}) {
    sim::SimConfig cfg;
    cfg.real_time = false;
    sim::Simulator sim(cfg, variant);
    QuietClient cb;
    client::ClientSession session(client::ClientConfig::for_variant(variant), cb);
    const Nanos delay = from_seconds(factor * cfg.dt());
    sim::SessionDriver driver(session, [&] { return delay; });
    sim::Loopback link(sim, driver);
    link.send_to_sim(session.join_frame());
    link.run_ticks(400);

    // Outcome class from the thresholds alone, fed to the reference session.
    const double latency = factor * cfg.dt();
    const char* event = latency <= cfg.dt() ? "AnswerOnTime"
                        : latency <= cfg.dt() * cfg.deadline_factor ? "AnswerLate"
                                                                    : "AnswerMissing";
    testing::SessionOracle oracle;
    oracle.feed("Join");
    const auto& o = sim.outcomes();
    for (std::uint64_t i = 0; i < o.total(); ++i) oracle.feed(event);
    const std::uint64_t expected_class = std::string(event) == "AnswerOnTime" ? o.on_time
                                         : std::string(event) == "AnswerLate"  ? o.late
                                                                               : o.missing;
    const bool ok = o.total() > 300 && expected_class == o.total() && sim.quality() == oracle.quality() &&
                    sim.session_state() == oracle.state();
    pass = pass && ok;
    detail += fmt("%sdelay %.1fx: %llu/%llu %s, %s, %s", detail.empty() ? "" : "; ", factor,
                  static_cast<unsigned long long>(expected_class), static_cast<unsigned long long>(o.total()),
                  event + 6, std::string(to_string(sim.quality())).c_str(),
                  std::string(to_string(sim.session_state())).c_str());
  }
  return {pass, detail};
}

Verdict kinematics() {
  std::mt19937_64 rng(1006);
  double zero_err = 0.0, jac_err = 0.0;
  int loaded = 0;
  const double h = 1e-6;
  for (const auto& name : model::kVariantNames) {
    const auto v = model::load_variant(name, kConfigDir);
    ++loaded;
    // Summed offsets straight from the config file.
    std::ifstream in(kConfigDir / (name + ".json"));
    const json j = json::parse(in);
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const auto& joint : j["joints"]) {
      for (int k = 0; k < 3; ++k) sum(k) += joint["origin_offset"][k].get<double>();
    }
    for (int k = 0; k < 3; ++k) sum(k) += j["flange_offset"][k].get<double>();
    const auto p0 = model::forward_kinematics(Vector7d::Zero(), v);
    zero_err = std::max({zero_err, (p0.position - sum).cwiseAbs().maxCoeff(),
                         p0.orientation.angularDistance(Eigen::Quaterniond::Identity())});

    for (int n = 0; n < 1000; ++n) {
      Vector7d q;
      for (int i = 0; i < 7; ++i)
        q(i) = std::uniform_real_distribution<double>(v.joints[i].lower, v.joints[i].upper)(rng);
      const auto J = model::jacobian(q, v);
      for (int i = 0; i < 7; ++i) {
        Vector7d qp = q, qm = q;
        qp(i) += h;
        qm(i) -= h;
        const auto a = model::forward_kinematics(qp, v);
        const auto b = model::forward_kinematics(qm, v);
        Vector6d col;
        col.head<3>() = (a.position - b.position) / (2 * h);
        const Eigen::AngleAxisd aa(a.orientation * b.orientation.inverse());
        col.tail<3>() = aa.axis() * aa.angle() / (2 * h);
        jac_err = std::max(jac_err, (col - J.col(i)).cwiseAbs().maxCoeff());
      }
    }
  }
  return {loaded == 4 && zero_err <= 1e-12 && jac_err < 1e-5,
          fmt("%d/4 configs load; zero pose error %.2e (limit 1e-12); Jacobian vs central differences %.2e over "
              "4000 configurations (limit 1e-5)",
              loaded, zero_err, jac_err)};
}

Vector7d random_inside(const model::RobotVariant& v, std::mt19937_64& rng, double margin) {
  Vector7d q;
  for (int i = 0; i < 7; ++i)
    q(i) = std::uniform_real_distribution<double>(v.joints[i].lower + margin, v.joints[i].upper - margin)(rng);
  return q;
}

wire::CommandMessage torque_cmd(const Vector7d& q) {
  wire::CommandMessage c;
  c.client_command_mode = CommandMode::TORQUE;
  c.joint_position = model::to_array(q);
  c.torque_overlay = JointArray{};
  return c;
}

Verdict control_laws() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1007);
  sim::SimConfig cfg;
  cfg.real_time = false;
  int lyap_violations = 0, pos_failures = 0, variants = 0;
  double offset_err = 0.0, wrench_res = 0.0;

  for (const auto& name : model::kVariantNames) {
    const auto v = model::load_variant(name, kConfigDir);
    ++variants;
    auto energy = [&](const sim::SimState& s, const Vector7d& q_cmd) {
      const Vector7d e = q_cmd - s.q;
      return 0.5 * s.qd.dot(cfg.inertia.cwiseProduct(s.qd)) + 0.5 * e.dot(v.stiffness.cwiseProduct(e));
    };
    // TORQUE: V = ½ qdᵀ M qd + ½ eᵀ K e never increases.
    for (int n = 0; n < 100; ++n) {
      sim::SimState s;
      s.q = random_inside(v, rng, 0.2);
      for (int i = 0; i < 7; ++i) s.qd(i) = std::uniform_real_distribution<double>(-1, 1)(rng);
      const Vector7d q_cmd = random_inside(v, rng, 0.2);
      const auto c = torque_cmd(q_cmd);
      double e = energy(s, q_cmd);
      const double e0 = e;
      for (int k = 0; k < 2000; ++k) {
        s = sim::step_dynamics(s, c, cfg, v);
        const double next = energy(s, q_cmd);
        if (next > e + 1e-12 * e0) ++lyap_violations;
        e = next;
      }
    }
    // POSITION: reaches the target within ceil(max|Δq| / (v_max·dt)) ticks.
    for (int n = 0; n < 100; ++n) {
      sim::SimState s;
      s.q = random_inside(v, rng, 0.0);
      const Vector7d q_cmd = random_inside(v, rng, 0.0);
      wire::CommandMessage c;
      c.joint_position = model::to_array(q_cmd);
      const Vector7d steps = (q_cmd - s.q).cwiseAbs().cwiseQuotient(v.velocity_limits() * cfg.dt());
      const int bound = static_cast<int>(std::ceil(steps.maxCoeff() - 1e-9));
      for (int k = 0; k < bound; ++k) s = sim::step_dynamics(s, c, cfg, v);
      if ((s.q - q_cmd).cwiseAbs().maxCoeff() > 1e-9) ++pos_failures;
    }
    // Constant external torque: offset settles at τ_ext / K.
    for (int n = 0; n < 5; ++n) {
      sim::SimState s = sim::initial_state(cfg, v);
      const Vector7d q_cmd = s.q;
      JointArray tau;
      for (auto& t : tau) t = std::uniform_real_distribution<double>(-2, 2)(rng);
      s = sim::inject_disturbance(s, tau, 100000);
      const auto c = torque_cmd(q_cmd);
      for (int k = 0; k < 3000; ++k) s = sim::step_dynamics(s, c, cfg, v);
      const Vector7d expect = model::to_eigen(tau).cwiseQuotient(v.stiffness);
      offset_err = std::max(offset_err, ((s.q - q_cmd) - expect).cwiseAbs().maxCoeff());
    }
    // WRENCH: Jᵀ(K_x e + w) vanishes at rest.
    {
      sim::SimState s = sim::initial_state(cfg, v);
      Vector6d w;
      for (int i = 0; i < 6; ++i) w(i) = std::uniform_real_distribution<double>(-5, 5)(rng) * (i < 3 ? 1.0 : 0.1);
      wire::CommandMessage c;
      c.client_command_mode = CommandMode::WRENCH;
      c.wrench_overlay = WrenchArray{w(0), w(1), w(2), w(3), w(4), w(5)};
      for (int k = 0; k < 4000; ++k) s = sim::step_dynamics(s, c, cfg, v);
      const Vector6d e = model::pose_error(*s.hold_pose, model::forward_kinematics(s.q, v));
      const Vector6d f = v.cartesian_stiffness.cwiseProduct(e) + w;
      wrench_res = std::max(wrench_res, (model::jacobian(s.q, v).transpose() * f).cwiseAbs().maxCoeff());
    }
  }
  const double secs = seconds_since(start);
  return {lyap_violations == 0 && pos_failures == 0 && offset_err <= 1e-4 && wrench_res < 1e-3 && secs < 60.0,
          fmt("%d variants: Lyapunov increases %d (100 starts x 2000 ticks each); POSITION misses %d/100; offset "
              "error %.2e (limit 1e-4); WRENCH residual %.2e (limit 1e-3); %.2f s (limit 60 s)",
              variants, lyap_violations, pos_failures, offset_err, wrench_res, secs)};
}

Verdict sine_demo() {
  cli::DemoOptions o;
  o.spec.kind = cli::DemoKind::Sine;
  o.spec.amplitude = 0.04;
  o.spec.frequency = 0.25;
  o.spec.mode = CommandMode::POSITION;
  o.target.loopback = true;
  o.target.hz = 200.0;
  o.target.config_dir = kConfigDir;
  o.duration = 20.0;
  std::ostringstream out;
  const auto r = cli::run_demo(o, out);
  const double rms = r.report.value("rms_tracking_error", 1.0);
  return {r.exit_code == 0 && rms < 0.005 && r.report.value("active_seconds", 0.0) >= 20.0,
          fmt("A 0.04 rad, f 0.25 Hz, 200 Hz, 20 s virtual: steady-state RMS %.6f rad (limit 0.005)", rms)};
}

Verdict timing() {
  sim::SimConfig cfg;
  cfg.bind_address = "127.0.0.1";
  cfg.port = 0;
  cfg.control_port = 0;
  cfg.real_time = true;
  const auto variant = model::load_variant("med7", kConfigDir);
  net::SimServer server(cfg, variant);
  server.log_rate_hz = 0.0;
  std::atomic<bool> stop{false};
  std::atomic<bool> done{false};
  std::thread loop([&] {
    server.run(stop, std::chrono::seconds(10));
    done = true;
  });
  QuietClient cb;
  client::ClientSession session(client::ClientConfig::for_variant(variant), cb);
  net::UdpClientOptions opts;
  opts.port = server.port();
  net::run_udp_client(session, opts, [&] { return done.load(); });
  loop.join();
  const auto t = server.timing();
  const double dev = std::abs(t.mean_period - cfg.dt()) / cfg.dt();
  return {t.monitors > 1000 && dev <= 0.05,
          fmt("informational, machine dependent: %llu monitors, mean period %.4f ms (%.2f%% off, limit 5%%), p99 "
              "jitter %.4f ms, max jitter %.4f ms",
              static_cast<unsigned long long>(t.monitors), t.mean_period * 1e3, dev * 100, t.p99_jitter * 1e3,
              t.max_jitter * 1e3)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"wire round trip", wire_round_trip},
      {"corruption detection", corruption_detection},
      {"multi-version", multi_version},
      {"session conformance", session_conformance},
      {"quality thresholds", quality_thresholds},
      {"kinematics", kinematics},
      {"control laws", control_laws},
      {"end-to-end sine demo", sine_demo},
      {"timing", timing},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
