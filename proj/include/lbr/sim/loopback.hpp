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
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lbr/client/client.hpp"
#include "lbr/sim/simulator.hpp"

namespace lbr::sim {

/// A datagram the virtual client wants delivered to the simulator after
/// `delay` of virtual time.
struct Reply {
  wire::Bytes bytes;
  Nanos delay{0};
  std::uint64_t tag{0};
};

/// Client end of a Loopback link.
class ClientDriver {
 public:
  virtual ~ClientDriver() = default;
  /// Called for every datagram the simulator sends, at the tick it was sent.
  virtual std::vector<Reply> on_datagram(std::span<const std::uint8_t> bytes, Nanos now) = 0;
};

/// Runs a Simulator and one client in virtual time. Simulator -> client
/// delivery is instantaneous; client -> simulator datagrams arrive after the
/// delay the driver asks for. Fully deterministic.
class Loopback {
 public:
  Loopback(Simulator& sim, ClientDriver& driver) : sim_(sim), driver_(driver) {}

  /// Queues a client datagram for delivery at now() + delay.
  void send_to_sim(wire::Bytes bytes, Nanos delay = Nanos{0}, std::uint64_t tag = 0);

  /// Runs exactly one simulator tick at now(), then advances the clock.
  void step();
  void run_ticks(std::uint64_t n);
  /// Steps until `done()` is true or `max_ticks` ran; returns whether done.
  bool run_until(const std::function<bool()>& done, std::uint64_t max_ticks);

  Nanos now() const { return now_; }
  std::uint64_t ticks() const { return ticks_; }
  std::size_t in_flight() const { return in_flight_.size(); }

 private:
  struct InFlight {
    Datagram datagram;
    std::uint64_t order;
  };

  Simulator& sim_;
  ClientDriver& driver_;
  std::vector<InFlight> in_flight_;
  Nanos now_{0};
  std::uint64_t ticks_{0};
  std::uint64_t order_{0};
};

/// Drives a real ClientSession; each answer is delayed by `delay()`.
class SessionDriver : public ClientDriver {
 public:
  SessionDriver(client::ClientSession& session, std::function<Nanos()> delay = [] { return Nanos{0}; })
      : session_(session), delay_(std::move(delay)) {}

  std::vector<Reply> on_datagram(std::span<const std::uint8_t> bytes, Nanos now) override;

 private:
  client::ClientSession& session_;
  std::function<Nanos()> delay_;
};

}  // namespace lbr::sim
