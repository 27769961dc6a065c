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

#include "drive.hpp"

#include <chrono>

#include "lbr/net/control.hpp"
#include "lbr/net/udp_client.hpp"
#include "lbr/sim/loopback.hpp"

namespace lbr::cli::detail {

using nlohmann::json;

const char* to_string(DriveEnd e) {
  switch (e) {
    case DriveEnd::Stopped: return "stopped";
    case DriveEnd::ServerBye: return "server ended the session";
    case DriveEnd::Aborted: return "client aborted";
    case DriveEnd::JoinTimeout: return "no answer to JOIN";
    case DriveEnd::LinkLost: return "link lost";
  }
  return "?";
}

model::RobotVariant load_target_variant(const Target& target) {
  try {
    return model::load_variant(target.variant, target.config_dir);
  } catch (const model::ModelError& e) {
    throw CliError(kExitConfig, e.what());
  }
}

namespace {

constexpr double kLoopbackJoinTimeout = 5.0;  // s, virtual

class LoopbackOperator : public Operator {
 public:
  LoopbackOperator(sim::Simulator& sim, const sim::Loopback& link) : sim_(sim), link_(link) {}
  double now() const override { return to_seconds(link_.now()); }
  json request(const json& req) override { return net::handle_control(sim_, req); }

 private:
  sim::Simulator& sim_;
  const sim::Loopback& link_;
};

DriveResult drive_loopback(const Target& target, const model::RobotVariant& variant, client::ClientSession& session,
                           std::function<Nanos()> delay, const std::function<bool(Operator&)>& stop) {
  sim::SimConfig cfg;
  cfg.variant = target.variant;
  cfg.sample_period = from_seconds(1.0 / target.hz);
  cfg.protocol_version = static_cast<std::uint8_t>(target.protocol_version);
  cfg.real_time = false;
  try {
    cfg.validate();
  } catch (const sim::SimError& e) {
    throw CliError(kExitConfig, e.what());
  }

  sim::Simulator sim(cfg, variant);
  sim::SessionDriver driver(session, delay ? std::move(delay) : [] { return Nanos{0}; });
  sim::Loopback link(sim, driver);
  LoopbackOperator op(sim, link);

  DriveResult result;
  link.send_to_sim(session.join_frame());
  std::uint64_t seen = 0;
  for (;;) {
    link.step();
    if (session.status() == client::ClientStatus::Ended) {
      result.end = DriveEnd::ServerBye;
      break;
    }
    if (session.status() == client::ClientStatus::Aborted) {
      result.end = DriveEnd::Aborted;
      break;
    }
    if (session.monitors_received() == 0) {
      if (op.now() > kLoopbackJoinTimeout) {
        result.end = DriveEnd::JoinTimeout;
        break;
      }
      continue;
    }
    if (session.monitors_received() == seen) continue;
    seen = session.monitors_received();
    if (stop(op)) {
      link.send_to_sim(session.bye_frame());
      link.step();
      result.end = DriveEnd::Stopped;
      break;
    }
  }
  result.stats = op.request({{"event", "stats"}});
  return result;
}

class UdpOperator : public Operator {
 public:
  explicit UdpOperator(net::ControlClient control)
      : control_(std::move(control)), start_(std::chrono::steady_clock::now()) {}
  double now() const override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  json request(const json& req) override {
    try {
      return control_.request(req);
    } catch (const net::NetError& e) {
      return {{"ok", false}, {"error", e.what()}};
    }
  }

 private:
  net::ControlClient control_;
  std::chrono::steady_clock::time_point start_;
};

DriveResult drive_udp(const Target& target, client::ClientSession& session, std::function<Nanos()> delay,
                      const std::function<bool(Operator&)>& stop) {
  std::optional<UdpOperator> op;
  try {
    op.emplace(net::ControlClient::connect(target.host, target.control_port));
  } catch (const net::NetError& e) {
    throw CliError(kExitSession, "cannot reach the control port " + target.host + ":" +
                                     std::to_string(target.control_port) + ": " + e.what());
  }

  net::UdpClientOptions opts;
  opts.host = target.host;
  opts.port = target.port;
  opts.delay = std::move(delay);
  std::uint64_t seen = 0;
  const auto r = net::run_udp_client(session, opts, [&] {
    if (session.monitors_received() == seen) return false;
    seen = session.monitors_received();
    return stop(*op);
  });

  DriveResult result;
  switch (r) {
    case net::UdpClientResult::Stopped: result.end = DriveEnd::Stopped; break;
    case net::UdpClientResult::ServerBye: result.end = DriveEnd::ServerBye; break;
    case net::UdpClientResult::Aborted: result.end = DriveEnd::Aborted; break;
    case net::UdpClientResult::JoinTimeout: result.end = DriveEnd::JoinTimeout; break;
    case net::UdpClientResult::LinkLost: result.end = DriveEnd::LinkLost; break;
  }
  result.stats = op->request({{"event", "stats"}});
  return result;
}

}  // namespace

DriveResult drive(const Target& target, const model::RobotVariant& variant, client::ClientSession& session,
                  std::function<Nanos()> delay, const std::function<bool(Operator&)>& stop) {
  if (target.loopback) return drive_loopback(target, variant, session, std::move(delay), stop);
  return drive_udp(target, session, std::move(delay), stop);
}

}  // namespace lbr::cli::detail
