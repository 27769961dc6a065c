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

#include <filesystem>
#include <functional>
#include <memory>

#include "lbr/sim/loopback.hpp"

namespace lbr::testing {

inline const std::filesystem::path kConfigDir = LBR_KIT_TEST_CONFIG_DIR;

/// Simulator + ClientSession wired through a virtual-time Loopback.
struct Harness {
  explicit Harness(client::ClientCallbacks& callbacks, sim::SimConfig sim_cfg = {},
                   std::set<std::uint8_t> client_versions = {1, 2})
      : variant(model::load_variant(sim_cfg.variant, kConfigDir)),
        sim(sim_cfg, variant),
        client([&] {
          auto c = client::ClientConfig::for_variant(variant);
          c.versions = std::move(client_versions);
          return c;
        }(),
               callbacks),
        driver(client, [this] { return delay ? delay() : Nanos{0}; }),
        link(sim, driver) {}

  void join() {
    link.send_to_sim(client.join_frame());
    link.step();
  }

  bool reach(SessionState target, std::uint64_t max_ticks = 1000) {
    return link.run_until([&] { return sim.session_state() == target; }, max_ticks);
  }

  /// Join, wait for MONITORING_READY, request `mode` and wait for ACTIVE.
  bool activate(CommandMode mode = CommandMode::POSITION) {
    join();
    if (!reach(SessionState::MONITORING_READY)) return false;
    if (sim.request_control(mode) != sim::OperatorResult::Accepted) return false;
    return reach(SessionState::COMMANDING_ACTIVE);
  }

  model::RobotVariant variant;
  sim::Simulator sim;
  client::ClientSession client;
  std::function<Nanos()> delay;
  sim::SessionDriver driver;
  sim::Loopback link;
};

}  // namespace lbr::testing
