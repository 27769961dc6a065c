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

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "drive.hpp"
#include "lbr/model/kinematics.hpp"

namespace lbr::cli {

using nlohmann::json;

std::optional<DemoKind> parse_demo_kind(const std::string& s) {
  if (s == "sine") return DemoKind::Sine;
  if (s == "hold") return DemoKind::Hold;
  if (s == "wrench-press") return DemoKind::WrenchPress;
  return std::nullopt;
}

const char* to_string(DemoKind k) {
  switch (k) {
    case DemoKind::Sine: return "sine";
    case DemoKind::Hold: return "hold";
    case DemoKind::WrenchPress: return "wrench-press";
  }
  return "?";
}

void DemoSpec::validate() const {
  auto fail = [](const std::string& what) { throw CliError(kExitConfig, what); };
  if (joint < 0 || joint >= static_cast<int>(kNumJoints)) fail("joint index must be 0-6");
  if (!(std::abs(amplitude) <= kMaxAmplitude))
    fail("amplitude " + std::to_string(amplitude) + " rad exceeds the demo cap of 0.2 rad");
  if (!(frequency >= 0.0 && frequency <= kMaxFrequency)) fail("frequency must lie in [0, 2] Hz");
  if (!(force >= 0.0 && force <= kMaxForce)) fail("force must lie in [0, 30] N");
  switch (kind) {
    case DemoKind::Sine:
      if (mode != CommandMode::POSITION && mode != CommandMode::TORQUE)
        fail("the sine demo runs in POSITION or TORQUE mode");
      break;
    case DemoKind::Hold:
      if (mode == CommandMode::WRENCH) fail("the hold demo runs in POSITION, TORQUE or CARTESIAN_POSE mode");
      break;
    case DemoKind::WrenchPress:
      if (mode != CommandMode::WRENCH) fail("the wrench-press demo runs in WRENCH mode");
      break;
  }
}

void write_report(const json& report, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw CliError(kExitConfig, "cannot write " + path.string());
  f << report.dump(2) << '\n';
}

namespace {

struct Window {
  double sum_sq{0.0};
  double max{0.0};
  std::uint64_t n{0};
  void add(double e) {
    sum_sq += e * e;
    max = std::max(max, e);
    ++n;
  }
  double rms() const { return n ? std::sqrt(sum_sq / static_cast<double>(n)) : 0.0; }
};

class DemoClient : public client::ClientCallbacks {
 public:
  DemoClient(const DemoSpec& spec, const model::RobotVariant& variant, double settle, std::ostream& out)
      : spec_(spec), variant_(variant), settle_(settle), out_(out) {}

  wire::CommandMessage on_command(const client::StateSample& s) override {
    const auto& m = s.monitor;
    if (!q0_) {
      q0_ = m.interpolated_command_position;
      z0_ = model::forward_kinematics(model::to_eigen(m.measured_joint_position), variant_).position.z();
    }
    const double t = static_cast<double>(ticks_++) * m.sample_period;
    active_time_ = t;

    JointArray ref = *q0_;
    if (spec_.kind == DemoKind::Sine)
      ref[spec_.joint] += spec_.amplitude * std::sin(2.0 * std::numbers::pi * spec_.frequency * t);

    double err = 0.0;
    for (std::size_t i = 0; i < kNumJoints; ++i) err = std::max(err, std::abs(m.measured_joint_position[i] - ref[i]));
    record(t, err);
    if (spec_.kind == DemoKind::WrenchPress) {
      dz_ = model::forward_kinematics(model::to_eigen(m.measured_joint_position), variant_).position.z() - z0_;
    }

    wire::CommandMessage c;
    c.client_command_mode = spec_.mode;
    switch (spec_.mode) {
      case CommandMode::POSITION:
        c.joint_position = ref;
        break;
      case CommandMode::TORQUE:
        c.joint_position = ref;
        c.torque_overlay = JointArray{};
        break;
      case CommandMode::CARTESIAN_POSE:
        c.cartesian_pose = model::forward_kinematics(model::to_eigen(ref), variant_).to_array();
        break;
      case CommandMode::WRENCH:
        c.wrench_overlay = WrenchArray{0.0, 0.0, -spec_.force * std::min(1.0, t), 0.0, 0.0, 0.0};
        break;
    }
    return c;
  }

  void finish() {
    if (second_.n > 0) print_second();
  }

  bool active() const { return q0_.has_value(); }
  double active_time() const { return active_time_; }
  const Window& steady() const { return steady_; }
  const json& per_second() const { return per_second_; }
  double displacement() const { return dz_; }

 private:
  void record(double t, double err) {
    const auto sec = static_cast<std::int64_t>(std::floor(t));
    if (sec != current_second_) {
      if (second_.n > 0) print_second();
      current_second_ = sec;
      second_ = {};
    }
    second_.add(err);
    if (t >= settle_) steady_.add(err);
  }

  void print_second() {
    char line[128];
    std::snprintf(line, sizeof line, "t=%4lld s  rms %.6f rad  max %.6f rad", static_cast<long long>(current_second_),
                  second_.rms(), second_.max);
    out_ << line << '\n';
    per_second_.push_back({{"t", current_second_}, {"rms", second_.rms()}, {"max", second_.max}});
  }

  DemoSpec spec_;
  const model::RobotVariant& variant_;
  double settle_;
  std::ostream& out_;
  std::optional<JointArray> q0_;
  double z0_{0.0};
  double dz_{0.0};
  std::uint64_t ticks_{0};
  double active_time_{0.0};
  std::int64_t current_second_{-1};
  Window second_;
  Window steady_;
  json per_second_ = json::array();
};

}  // namespace

DemoResult run_demo(const DemoOptions& opts, std::ostream& out) {
  DemoResult result;
  opts.spec.validate();
  const auto variant = detail::load_target_variant(opts.target);

  DemoClient demo(opts.spec, variant, opts.settle, out);
  client::ClientSession session(client::ClientConfig::for_variant(variant), demo);
  session.on_transmit = [&](const wire::MonitorMessage& m, const wire::CommandMessage& c) {
    if (m.session_state == SessionState::COMMANDING_ACTIVE) result.commands.push_back(c);
  };

  std::optional<double> requested_at;
  std::string failure;
  bool timed_out = false;
  const auto end = detail::drive(opts.target, variant, session, {}, [&](detail::Operator& op) {
    if (demo.active()) return demo.active_time() >= opts.duration;
    if (op.now() > opts.timeout) {
      timed_out = true;
      return true;
    }
    if (session.state() == SessionState::MONITORING_READY &&
        (!requested_at || op.now() - *requested_at > 1.0)) {
      const auto reply = op.request({{"event", "request_control"}, {"mode", std::string(to_string(opts.spec.mode))}});
      requested_at = op.now();
      if (!reply.value("ok", false)) {
        failure = "control request rejected: " + reply.value("error", std::string("?"));
        return true;
      }
    }
    return false;
  });
  demo.finish();

  const bool completed = end.end == detail::DriveEnd::Stopped && demo.active() && failure.empty() && !timed_out;
  if (!completed) {
    result.exit_code = kExitSession;
    if (failure.empty()) {
      failure = timed_out ? "COMMANDING_ACTIVE not reached within " + std::to_string(opts.timeout) + " s"
                          : std::string("session ended: ") + detail::to_string(end.end);
      if (session.error() != client::ClientErrc::None)
        failure += std::string(" (") + client::to_string(session.error()) + ")";
    }
  }

  json& r = result.report;
  r["report_version"] = kReportVersion;
  r["kind"] = "demo";
  r["demo"] = {{"name", to_string(opts.spec.kind)},
               {"joint", opts.spec.joint},
               {"amplitude", opts.spec.amplitude},
               {"frequency", opts.spec.frequency},
               {"mode", std::string(to_string(opts.spec.mode))},
               {"force", opts.spec.force}};
  r["variant"] = variant.name;
  r["transport"] = opts.target.loopback ? "loopback" : "udp";
  r["completed"] = completed;
  if (!failure.empty()) r["error"] = failure;
  r["active_seconds"] = demo.active_time();
  r["settle_seconds"] = opts.settle;
  r["rms_tracking_error"] = demo.steady().rms();
  r["max_tracking_error"] = demo.steady().max;
  r["steady_samples"] = demo.steady().n;
  r["per_second"] = demo.per_second();
  r["clamp_count"] = session.clamp_count();
  if (opts.spec.kind == DemoKind::WrenchPress) {
    r["flange_displacement_z"] = demo.displacement();
    r["predicted_displacement_z"] = -opts.spec.force / variant.cartesian_stiffness[2];
  }

  if (completed) {
    char line[160];
    std::snprintf(line, sizeof line, "%s demo: %.2f s active, steady-state rms %.6f rad, max %.6f rad",
                  to_string(opts.spec.kind), demo.active_time(), demo.steady().rms(), demo.steady().max);
    out << line << '\n';
    if (opts.spec.kind == DemoKind::WrenchPress) {
      std::snprintf(line, sizeof line, "flange z displacement %.6f m (predicted %.6f m)", demo.displacement(),
                    -opts.spec.force / variant.cartesian_stiffness[2]);
      out << line << '\n';
    }
  } else {
    out << "demo failed: " << failure << '\n';
  }
  if (opts.out) write_report(r, *opts.out);
  return result;
}

}  // namespace lbr::cli
