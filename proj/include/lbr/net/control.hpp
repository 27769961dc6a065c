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

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbr/net/socket.hpp"
#include "lbr/sim/simulator.hpp"

namespace lbr::net {

/// Applies one operator request to the simulator and builds the reply.
///   {"event":"request_control","mode":"TORQUE"}
///   {"event":"release_control"}
///   {"event":"inject","torque":[7 values],"ticks":N}
///   {"event":"stats"}
/// Replies carry "ok" and either the result or an "error" string.
nlohmann::json handle_control(sim::Simulator& sim, const nlohmann::json& request);
std::string handle_control_line(sim::Simulator& sim, const std::string& line);

/// Newline-delimited JSON operator socket. Serviced from the simulator loop
/// by poll(), so requests are applied between ticks.
class ControlServer {
 public:
  static ControlServer bind(const std::string& address, std::uint16_t port);

  /// Accepts pending connections and answers every complete request line.
  void poll(sim::Simulator& sim);
  std::uint16_t port() const { return listener_.local_port(); }

 private:
  explicit ControlServer(TcpListener l) : listener_(std::move(l)) {}
  TcpListener listener_;
  std::vector<LineStream> clients_;
};

class ControlClient {
 public:
  static ControlClient connect(const std::string& host, std::uint16_t port,
                               std::chrono::milliseconds timeout = std::chrono::seconds(2));

  /// Sends one request and waits for its reply line.
  nlohmann::json request(const nlohmann::json& req, std::chrono::milliseconds timeout = std::chrono::seconds(2));

 private:
  explicit ControlClient(LineStream s) : stream_(std::move(s)) {}
  LineStream stream_;
};

}  // namespace lbr::net
