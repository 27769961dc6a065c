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

#include "lbr/net/server.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "lbr/log.hpp"

namespace lbr::net {

std::string format_state_line(const sim::Simulator& sim, const wire::MonitorMessage& m) {
  char buf[256];
  const auto& q = m.measured_joint_position;
  std::snprintf(buf, sizeof buf, "%llu %u %s %s %s %.6f %.6f %.6f %.6f %.6f %.6f %.6f",
                static_cast<unsigned long long>(sim.state().tick), m.monitor_sequence,
                std::string(to_string(m.session_state)).c_str(), std::string(to_string(m.connection_quality)).c_str(),
                std::string(to_string(m.control_mode)).c_str(), q[0], q[1], q[2], q[3], q[4], q[5], q[6]);
  return buf;
}

SimServer::SimServer(sim::SimConfig cfg, model::RobotVariant variant)
    : cfg_(std::move(cfg)),
      sim_(cfg_, std::move(variant)),
      socket_(UdpSocket::bind(cfg_.bind_address, cfg_.port)),
      control_(ControlServer::bind(cfg_.bind_address, cfg_.control_port)),
      start_(std::chrono::steady_clock::now()) {
  sim_.on_monitor_sent = [this](const wire::MonitorMessage& m) {
    monitor_times_.push_back(elapsed());
    if (log_every_ > 0 && m.monitor_sequence % log_every_ == 0) {
      const std::string line = format_state_line(sim_, m);
      if (on_log_line) on_log_line(line);
      else std::printf("%s\n", line.c_str());
    }
  };
  receiver_ = std::thread([this] { receive_loop(); });
}

SimServer::~SimServer() {
  receiving_ = false;
  if (receiver_.joinable()) receiver_.join();
}

Nanos SimServer::elapsed() const {
  return std::chrono::duration_cast<Nanos>(std::chrono::steady_clock::now() - start_);
}

void SimServer::receive_loop() {
  while (receiving_) {
    auto r = socket_.receive(std::chrono::milliseconds(20));
    if (!r) continue;
    if (queue_.push(Inbound{std::move(r->bytes), r->from, elapsed()})) log::debug("receive queue full, dropped oldest");
  }
}

void SimServer::transmit(const std::vector<sim::Outgoing>& out) {
  for (const auto& o : out) {
    auto it = peers_.find(o.peer);
    if (it == peers_.end()) continue;
    try {
      socket_.send_to(o.bytes, it->second);
    } catch (const NetError& e) {
      log::warn("%s", e.what());
    }
  }
}

void SimServer::run(const std::atomic<bool>& stop, std::optional<Nanos> duration) {
  const Nanos dt = cfg_.sample_period;
  log_every_ = log_rate_hz > 0.0 ? std::max<std::uint64_t>(1, std::llround(1.0 / (log_rate_hz * cfg_.dt()))) : 0;
  start_ = std::chrono::steady_clock::now();
  monitor_times_.clear();

  std::vector<Inbound> inbound;
  std::vector<sim::Datagram> inbox;
  for (std::uint64_t k = 0; !stop; ++k) {
    const Nanos virtual_now = dt * static_cast<std::int64_t>(k);
    if (duration && virtual_now >= *duration) break;

    Nanos now;
    if (cfg_.real_time) {
      std::this_thread::sleep_until(start_ + virtual_now);
      now = elapsed();
    } else {
      now = virtual_now;
      // Lockstep: give the client a chance to answer the previous monitor,
      // serving operator requests meanwhile.
      const bool expecting = sim_.session_state() != SessionState::IDLE;
      const auto until = std::chrono::steady_clock::now() + (expecting ? std::chrono::milliseconds(100)
                                                                        : std::chrono::milliseconds(dt.count() / 1'000'000 + 1));
      while (queue_.size() == 0 && std::chrono::steady_clock::now() < until) {
        control_.poll(sim_);
        queue_.wait_for(std::chrono::milliseconds(1));
      }
    }

    control_.poll(sim_);
    inbound.clear();
    queue_.drain(inbound);
    inbox.clear();
    for (auto& in : inbound) {
      const sim::PeerId id = in.from.id();
      peers_[id] = in.from;
      inbox.push_back({std::move(in.bytes), cfg_.real_time ? in.arrival : now, id, 0});
    }
    transmit(sim_.tick(inbox, now));
  }
}

TimingStats SimServer::timing() const {
  TimingStats s;
  s.monitors = monitor_times_.size();
  if (monitor_times_.size() < 2) return s;
  const double period = cfg_.dt();
  std::vector<double> jitter;
  jitter.reserve(monitor_times_.size() - 1);
  for (std::size_t i = 1; i < monitor_times_.size(); ++i) {
    const double interval = to_seconds(monitor_times_[i] - monitor_times_[i - 1]);
    jitter.push_back(std::abs(interval - period));
  }
  s.mean_period = to_seconds(monitor_times_.back() - monitor_times_.front()) / static_cast<double>(jitter.size());
  std::sort(jitter.begin(), jitter.end());
  s.p99_jitter = jitter[std::min(jitter.size() - 1, static_cast<std::size_t>(std::ceil(0.99 * jitter.size())) - 1)];
  s.max_jitter = jitter.back();
  return s;
}

}  // namespace lbr::net
