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

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lbr/net/bounded_queue.hpp"
#include "lbr/net/control.hpp"
#include "lbr/net/socket.hpp"
#include "lbr/sim/simulator.hpp"

namespace lbr::net {

inline constexpr std::size_t kReceiveQueueCapacity = 8;

struct TimingStats {
  std::uint64_t monitors{0};
  double mean_period{0.0};  // s, between consecutive monitors
  double p99_jitter{0.0};   // s, |interval - sample_period|
  double max_jitter{0.0};
};

/// `tick seq state quality mode q1 .. q7`
std::string format_state_line(const sim::Simulator& sim, const wire::MonitorMessage& m);

/// Simulator bound to a UDP socket and a control socket. A receiver thread
/// feeds datagrams through a drop-oldest queue into the loop, which owns the
/// Simulator. With real_time the loop is paced by the wall clock; otherwise it
/// advances virtual time in lockstep with the client's answers.
class SimServer {
 public:
  /// Binds both sockets; throws NetError(Bind).
  SimServer(sim::SimConfig cfg, model::RobotVariant variant);
  ~SimServer();

  SimServer(const SimServer&) = delete;
  SimServer& operator=(const SimServer&) = delete;

  /// Runs until `stop` is set or `duration` of simulator time has passed.
  void run(const std::atomic<bool>& stop, std::optional<Nanos> duration = std::nullopt);

  std::uint16_t port() const { return socket_.local_port(); }
  std::uint16_t control_port() const { return control_.port(); }
  sim::Simulator& simulator() { return sim_; }
  TimingStats timing() const;
  std::uint64_t dropped_datagrams() const { return queue_.dropped(); }

  /// Structured state lines at `log_rate_hz` (0 disables). Defaults to stdout.
  double log_rate_hz{1.0};
  std::function<void(const std::string&)> on_log_line;

 private:
  struct Inbound {
    wire::Bytes bytes;
    Endpoint from;
    Nanos arrival;
  };

  void receive_loop();
  void transmit(const std::vector<sim::Outgoing>& out);
  Nanos elapsed() const;

  sim::SimConfig cfg_;
  sim::Simulator sim_;
  UdpSocket socket_;
  ControlServer control_;
  BoundedQueue<Inbound> queue_{kReceiveQueueCapacity};
  std::map<sim::PeerId, Endpoint> peers_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<bool> receiving_{true};
  std::thread receiver_;
  std::vector<Nanos> monitor_times_;
  std::uint64_t log_every_{0};
};

}  // namespace lbr::net
