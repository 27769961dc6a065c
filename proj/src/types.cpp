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

#include "lbr/types.hpp"

#include <algorithm>

namespace lbr {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<std::string_view, N>& names) {
  auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) return std::nullopt;
  return static_cast<Enum>(std::distance(names.begin(), it));
}

constexpr std::array<std::string_view, 5> kStateNames{
    "IDLE", "MONITORING_WAIT", "MONITORING_READY", "COMMANDING_WAIT", "COMMANDING_ACTIVE"};
constexpr std::array<std::string_view, 4> kQualityNames{"POOR", "FAIR", "GOOD", "EXCELLENT"};
constexpr std::array<std::string_view, 4> kModeNames{"POSITION", "TORQUE", "WRENCH", "CARTESIAN_POSE"};

}  // namespace

std::string_view to_string(SessionState s) {
  auto i = static_cast<std::size_t>(s);
  return i < kStateNames.size() ? kStateNames[i] : "INVALID";
}

std::string_view to_string(ConnectionQuality q) {
  auto i = static_cast<std::size_t>(q);
  return i < kQualityNames.size() ? kQualityNames[i] : "INVALID";
}

std::string_view to_string(CommandMode m) {
  auto i = static_cast<std::size_t>(m);
  return i < kModeNames.size() ? kModeNames[i] : "INVALID";
}

std::optional<SessionState> parse_session_state(std::string_view s) {
  return lookup<SessionState>(s, kStateNames);
}

std::optional<ConnectionQuality> parse_quality(std::string_view s) {
  return lookup<ConnectionQuality>(s, kQualityNames);
}

std::optional<CommandMode> parse_command_mode(std::string_view s) {
  return lookup<CommandMode>(s, kModeNames);
}

}  // namespace lbr
