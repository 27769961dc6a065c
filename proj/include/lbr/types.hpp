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

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lbr {

inline constexpr std::size_t kNumJoints = 7;

using JointArray = std::array<double, kNumJoints>;
using WrenchArray = std::array<double, 6>;
/// x, y, z, qw, qx, qy, qz
using PoseArray = std::array<double, 7>;

/// Virtual or wall-clock time, always in integer nanoseconds.
using Nanos = std::chrono::nanoseconds;

inline constexpr double to_seconds(Nanos t) { return static_cast<double>(t.count()) * 1e-9; }
inline Nanos from_seconds(double s) { return Nanos{static_cast<std::int64_t>(s * 1e9 + (s >= 0 ? 0.5 : -0.5))}; }

enum class SessionState : std::uint8_t {
  IDLE = 0,
  MONITORING_WAIT = 1,
  MONITORING_READY = 2,
  COMMANDING_WAIT = 3,
  COMMANDING_ACTIVE = 4,
};

/// Ordered: POOR < FAIR < GOOD < EXCELLENT.
enum class ConnectionQuality : std::uint8_t {
  POOR = 0,
  FAIR = 1,
  GOOD = 2,
  EXCELLENT = 3,
};

enum class CommandMode : std::uint8_t {
  POSITION = 0,
  TORQUE = 1,
  WRENCH = 2,
  CARTESIAN_POSE = 3,
};

std::string_view to_string(SessionState s);
std::string_view to_string(ConnectionQuality q);
std::string_view to_string(CommandMode m);

std::optional<SessionState> parse_session_state(std::string_view s);
std::optional<ConnectionQuality> parse_quality(std::string_view s);
std::optional<CommandMode> parse_command_mode(std::string_view s);

inline bool is_commanding(SessionState s) {
  return s == SessionState::COMMANDING_WAIT || s == SessionState::COMMANDING_ACTIVE;
}

}  // namespace lbr
