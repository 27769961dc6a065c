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

#include <functional>

#include <nlohmann/json.hpp>

#include "lbr/cli/cli.hpp"

namespace lbr::cli::detail {

/// Operator-side access to the simulator a client is talking to.
class Operator {
 public:
  virtual ~Operator() = default;
  /// Seconds since the drive started: virtual in loopback, wall clock over UDP.
  virtual double now() const = 0;
  /// A control-socket request; same replies in both transports.
  virtual nlohmann::json request(const nlohmann::json& req) = 0;
};

enum class DriveEnd { Stopped, ServerBye, Aborted, JoinTimeout, LinkLost };
const char* to_string(DriveEnd e);

struct DriveResult {
  DriveEnd end{DriveEnd::Stopped};
  /// Simulator "stats" reply taken after the session ended.
  nlohmann::json stats;
};

model::RobotVariant load_target_variant(const Target& target);

/// Runs `session` against the target until `stop` returns true, then says BYE.
/// `stop` is checked after every monitor.
DriveResult drive(const Target& target, const model::RobotVariant& variant, client::ClientSession& session,
                  std::function<Nanos()> delay, const std::function<bool(Operator&)>& stop);

}  // namespace lbr::cli::detail
