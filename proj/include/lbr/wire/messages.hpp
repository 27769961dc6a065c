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
#include <optional>
#include <variant>

#include "lbr/types.hpp"

namespace lbr::wire {

enum class MessageType : std::uint8_t {
  JOIN = 0x00,
  MONITOR = 0x01,
  COMMAND = 0x02,
  BYE = 0x03,
};

enum class WireType : std::uint8_t {
  U32 = 0,        // 4 bytes little-endian
  F64 = 1,        // 8 bytes IEEE-754 little-endian
  F64_ARRAY = 2,  // u8 count followed by count f64 values
  ENUM = 3,       // 1 byte
};

struct FrameHeader {
  std::uint8_t protocol_version{1};
  MessageType message_type{MessageType::JOIN};
  std::uint32_t sequence{0};
  std::uint16_t payload_length{0};

  bool operator==(const FrameHeader&) const = default;
};

struct Timestamp {
  std::uint32_t seconds{0};
  std::uint32_t nanoseconds{0};

  bool operator==(const Timestamp&) const = default;
};

Timestamp to_timestamp(Nanos t);
Nanos from_timestamp(Timestamp ts);

/// Controller -> client state sample, one per tick.
struct MonitorMessage {
  SessionState session_state{SessionState::IDLE};
  ConnectionQuality connection_quality{ConnectionQuality::POOR};
  CommandMode control_mode{CommandMode::POSITION};
  double sample_period{0.005};
  JointArray measured_joint_position{};
  JointArray measured_torque{};
  JointArray external_torque{};
  JointArray interpolated_command_position{};
  Timestamp timestamp{};
  std::uint32_t monitor_sequence{0};

  bool operator==(const MonitorMessage&) const = default;
};

/// Client -> controller answer. Which optional fields are present is fixed by
/// the mode, see required_fields().
struct CommandMessage {
  CommandMode client_command_mode{CommandMode::POSITION};
  std::optional<JointArray> joint_position;
  std::optional<JointArray> torque_overlay;
  std::optional<WrenchArray> wrench_overlay;
  std::optional<PoseArray> cartesian_pose;
  std::uint32_t reflected_sequence{0};

  bool operator==(const CommandMessage&) const = default;
};

struct JoinMessage {
  /// Bit v set means protocol version v is supported. Absent: only the
  /// frame's own version.
  std::optional<std::uint32_t> supported_versions;

  bool operator==(const JoinMessage&) const = default;
};

enum class ByeReason : std::uint8_t {
  NORMAL = 0,
  NO_COMMON_VERSION = 1,
  MODE_NOT_SUPPORTED = 2,
  CLIENT_ABORT = 3,
};

struct ByeMessage {
  std::optional<ByeReason> reason;

  bool operator==(const ByeMessage&) const = default;
};

using Payload = std::variant<JoinMessage, MonitorMessage, CommandMessage, ByeMessage>;

MessageType message_type_of(const Payload& payload);

namespace field {
// MonitorMessage
inline constexpr std::uint8_t kSessionState = 1;
inline constexpr std::uint8_t kQuality = 2;
inline constexpr std::uint8_t kControlMode = 3;
inline constexpr std::uint8_t kSamplePeriod = 4;
inline constexpr std::uint8_t kMeasuredJointPosition = 5;
inline constexpr std::uint8_t kMeasuredTorque = 6;
inline constexpr std::uint8_t kExternalTorque = 7;
inline constexpr std::uint8_t kInterpolatedCommandPosition = 8;
inline constexpr std::uint8_t kTimestampSeconds = 9;
inline constexpr std::uint8_t kTimestampNanoseconds = 10;
inline constexpr std::uint8_t kMonitorSequence = 11;
// CommandMessage
inline constexpr std::uint8_t kCommandMode = 1;
inline constexpr std::uint8_t kJointPosition = 2;
inline constexpr std::uint8_t kTorqueOverlay = 3;
inline constexpr std::uint8_t kWrenchOverlay = 4;
inline constexpr std::uint8_t kReflectedSequence = 5;
inline constexpr std::uint8_t kCartesianPose = 6;  // version 2 only
// JoinMessage
inline constexpr std::uint8_t kSupportedVersions = 1;
// ByeMessage
inline constexpr std::uint8_t kByeReason = 1;
}  // namespace field

}  // namespace lbr::wire
