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

#include "lbr/wire/codec.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

#include "lbr/wire/crc32.hpp"

namespace lbr::wire {

namespace {

// ── Byte-level writer/reader ────────────────────────────────────────────────

class Writer {
 public:
  explicit Writer(Bytes& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }

  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }

  // Typed field writers
  void field_u32(std::uint8_t id, std::uint32_t v) {
    u8(id);
    u8(static_cast<std::uint8_t>(WireType::U32));
    u32(v);
  }

  void field_f64(std::uint8_t id, double v) {
    u8(id);
    u8(static_cast<std::uint8_t>(WireType::F64));
    f64(v);
  }

  void field_enum(std::uint8_t id, std::uint8_t v) {
    u8(id);
    u8(static_cast<std::uint8_t>(WireType::ENUM));
    u8(v);
  }

  template <std::size_t N>
  void field_array(std::uint8_t id, const std::array<double, N>& values) {
    static_assert(N <= 255);
    u8(id);
    u8(static_cast<std::uint8_t>(WireType::F64_ARRAY));
    u8(static_cast<std::uint8_t>(N));
    for (double v : values) f64(v);
  }

 private:
  Bytes& out_;
};

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
  return v;
}

double read_f64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
  return std::bit_cast<double>(v);
}

// ── Structural field walk ───────────────────────────────────────────────────

struct RawField {
  std::uint8_t id;
  WireType type;
  std::span<const std::uint8_t> value;  // excludes the count byte for arrays
  std::size_t count;                    // elements for arrays, 1 otherwise
};

/// Length of a field's value given its wire type and the bytes that follow
/// the (id, type) pair. Returns 0 with `ok = false` on unknown wire type.
bool value_extent(std::uint8_t wire_type, std::span<const std::uint8_t> rest, std::size_t& header_bytes,
                  std::size_t& value_bytes, std::size_t& count) {
  switch (wire_type) {
    case 0:
      header_bytes = 0;
      value_bytes = 4;
      count = 1;
      return true;
    case 1:
      header_bytes = 0;
      value_bytes = 8;
      count = 1;
      return true;
    case 2:
      if (rest.empty()) throw WireError(WireErrc::Truncated, "array field missing count byte");
      header_bytes = 1;
      count = rest[0];
      value_bytes = 8 * count;
      return true;
    case 3:
      header_bytes = 0;
      value_bytes = 1;
      count = 1;
      return true;
    default:
      return false;
  }
}

std::vector<RawField> walk_fields(std::span<const std::uint8_t> payload) {
  std::vector<RawField> fields;
  std::size_t pos = 0;
  while (pos < payload.size()) {
    if (payload.size() - pos < 2) throw WireError(WireErrc::Truncated, "field header cut short");
    const std::uint8_t id = payload[pos];
    const std::uint8_t wt = payload[pos + 1];
    pos += 2;
    std::size_t header_bytes = 0, value_bytes = 0, count = 0;
    if (!value_extent(wt, payload.subspan(pos), header_bytes, value_bytes, count)) {
      throw WireError(WireErrc::UnknownWireType, "field " + std::to_string(id) + " has wire type " + std::to_string(wt));
    }
    if (payload.size() - pos < header_bytes + value_bytes) {
      throw WireError(WireErrc::Truncated, "field " + std::to_string(id) + " runs past payload end");
    }
    fields.push_back({id, static_cast<WireType>(wt), payload.subspan(pos + header_bytes, value_bytes), count});
    pos += header_bytes + value_bytes;
  }
  return fields;
}

// ── Schema ──────────────────────────────────────────────────────────────────

/// Known (field id -> wire type) for a message type under a reader version.
const std::map<std::uint8_t, WireType>& schema(MessageType type, std::uint8_t version) {
  static const std::map<std::uint8_t, WireType> kJoin{{field::kSupportedVersions, WireType::U32}};
  static const std::map<std::uint8_t, WireType> kBye{{field::kByeReason, WireType::ENUM}};
  static const std::map<std::uint8_t, WireType> kMonitor{
      {field::kSessionState, WireType::ENUM},
      {field::kQuality, WireType::ENUM},
      {field::kControlMode, WireType::ENUM},
      {field::kSamplePeriod, WireType::F64},
      {field::kMeasuredJointPosition, WireType::F64_ARRAY},
      {field::kMeasuredTorque, WireType::F64_ARRAY},
      {field::kExternalTorque, WireType::F64_ARRAY},
      {field::kInterpolatedCommandPosition, WireType::F64_ARRAY},
      {field::kTimestampSeconds, WireType::U32},
      {field::kTimestampNanoseconds, WireType::U32},
      {field::kMonitorSequence, WireType::U32},
  };
  static const std::map<std::uint8_t, WireType> kCommandV1{
      {field::kCommandMode, WireType::ENUM},         {field::kJointPosition, WireType::F64_ARRAY},
      {field::kTorqueOverlay, WireType::F64_ARRAY},  {field::kWrenchOverlay, WireType::F64_ARRAY},
      {field::kReflectedSequence, WireType::U32},
  };
  static const std::map<std::uint8_t, WireType> kCommandV2 = [] {
    auto m = kCommandV1;
    m.emplace(field::kCartesianPose, WireType::F64_ARRAY);
    return m;
  }();

  switch (type) {
    case MessageType::JOIN:
      return kJoin;
    case MessageType::MONITOR:
      return kMonitor;
    case MessageType::COMMAND:
      return version >= 2 ? kCommandV2 : kCommandV1;
    case MessageType::BYE:
      return kBye;
  }
  return kJoin;
}

template <std::size_t N>
std::array<double, N> read_array(const RawField& f, const char* name) {
  if (f.count != N) {
    throw WireError(WireErrc::InvariantViolation,
                    std::string(name) + " carries " + std::to_string(f.count) + " values, expected " + std::to_string(N));
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = read_f64(f.value, 8 * i);
  return out;
}

template <std::size_t N>
bool all_finite(const std::array<double, N>& a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

template <typename Enum>
Enum read_enum(const RawField& f, std::uint8_t max_value, const char* name) {
  const std::uint8_t v = f.value[0];
  if (v > max_value) {
    throw WireError(WireErrc::InvariantViolation, std::string(name) + " value " + std::to_string(v) + " out of range");
  }
  return static_cast<Enum>(v);
}

[[noreturn]] void missing(const char* name) {
  throw WireError(WireErrc::InvariantViolation, std::string("required field ") + name + " absent");
}

MonitorMessage build_monitor(const std::map<std::uint8_t, RawField>& f) {
  auto get = [&](std::uint8_t id, const char* name) -> const RawField& {
    auto it = f.find(id);
    if (it == f.end()) missing(name);
    return it->second;
  };
  MonitorMessage m;
  m.session_state = read_enum<SessionState>(get(field::kSessionState, "session_state"), 4, "session_state");
  m.connection_quality = read_enum<ConnectionQuality>(get(field::kQuality, "connection_quality"), 3, "connection_quality");
  m.control_mode = read_enum<CommandMode>(get(field::kControlMode, "control_mode"), 3, "control_mode");
  m.sample_period = read_f64(get(field::kSamplePeriod, "sample_period").value, 0);
  m.measured_joint_position = read_array<kNumJoints>(get(field::kMeasuredJointPosition, "measured_joint_position"),
                                                     "measured_joint_position");
  m.measured_torque = read_array<kNumJoints>(get(field::kMeasuredTorque, "measured_torque"), "measured_torque");
  m.external_torque = read_array<kNumJoints>(get(field::kExternalTorque, "external_torque"), "external_torque");
  m.interpolated_command_position = read_array<kNumJoints>(
      get(field::kInterpolatedCommandPosition, "interpolated_command_position"), "interpolated_command_position");
  m.timestamp.seconds = read_u32(get(field::kTimestampSeconds, "timestamp_s").value, 0);
  m.timestamp.nanoseconds = read_u32(get(field::kTimestampNanoseconds, "timestamp_ns").value, 0);
  m.monitor_sequence = read_u32(get(field::kMonitorSequence, "monitor_sequence").value, 0);
  validate(m);
  return m;
}

CommandMessage build_command(const std::map<std::uint8_t, RawField>& f, std::uint8_t reader_version) {
  CommandMessage c;
  auto mode_it = f.find(field::kCommandMode);
  if (mode_it == f.end()) missing("client_command_mode");
  c.client_command_mode = read_enum<CommandMode>(mode_it->second, 3, "client_command_mode");
  auto seq_it = f.find(field::kReflectedSequence);
  if (seq_it == f.end()) missing("reflected_sequence");
  c.reflected_sequence = read_u32(seq_it->second.value, 0);

  // Presence rule, restricted to the optional fields this reader knows.
  const auto required = required_fields(c.client_command_mode);
  const auto& known = schema(MessageType::COMMAND, reader_version);
  for (std::uint8_t id : {field::kJointPosition, field::kTorqueOverlay, field::kWrenchOverlay, field::kCartesianPose}) {
    if (!known.contains(id)) continue;
    const bool present = f.contains(id);
    if (present != required.contains(id)) {
      throw WireError(WireErrc::ModeFieldMismatch, std::string("mode ") + std::string(to_string(c.client_command_mode)) +
                                                       (present ? " forbids" : " requires") + " field " +
                                                       std::to_string(id));
    }
  }

  if (auto it = f.find(field::kJointPosition); it != f.end())
    c.joint_position = read_array<kNumJoints>(it->second, "joint_position");
  if (auto it = f.find(field::kTorqueOverlay); it != f.end())
    c.torque_overlay = read_array<kNumJoints>(it->second, "torque_overlay");
  if (auto it = f.find(field::kWrenchOverlay); it != f.end())
    c.wrench_overlay = read_array<6>(it->second, "wrench_overlay");
  if (auto it = f.find(field::kCartesianPose); it != f.end())
    c.cartesian_pose = read_array<7>(it->second, "cartesian_pose");

  if (mode_supported(reader_version, c.client_command_mode)) validate(c, reader_version);
  return c;
}

void encode_payload(Writer& w, const JoinMessage& m, std::uint8_t) {
  if (m.supported_versions) w.field_u32(field::kSupportedVersions, *m.supported_versions);
}

void encode_payload(Writer& w, const ByeMessage& m, std::uint8_t) {
  if (m.reason) w.field_enum(field::kByeReason, static_cast<std::uint8_t>(*m.reason));
}

void encode_payload(Writer& w, const MonitorMessage& m, std::uint8_t) {
  validate(m);
  w.field_enum(field::kSessionState, static_cast<std::uint8_t>(m.session_state));
  w.field_enum(field::kQuality, static_cast<std::uint8_t>(m.connection_quality));
  w.field_enum(field::kControlMode, static_cast<std::uint8_t>(m.control_mode));
  w.field_f64(field::kSamplePeriod, m.sample_period);
  w.field_array(field::kMeasuredJointPosition, m.measured_joint_position);
  w.field_array(field::kMeasuredTorque, m.measured_torque);
  w.field_array(field::kExternalTorque, m.external_torque);
  w.field_array(field::kInterpolatedCommandPosition, m.interpolated_command_position);
  w.field_u32(field::kTimestampSeconds, m.timestamp.seconds);
  w.field_u32(field::kTimestampNanoseconds, m.timestamp.nanoseconds);
  w.field_u32(field::kMonitorSequence, m.monitor_sequence);
}

void encode_payload(Writer& w, const CommandMessage& c, std::uint8_t version) {
  validate(c, version);
  w.field_enum(field::kCommandMode, static_cast<std::uint8_t>(c.client_command_mode));
  if (c.joint_position) w.field_array(field::kJointPosition, *c.joint_position);
  if (c.torque_overlay) w.field_array(field::kTorqueOverlay, *c.torque_overlay);
  if (c.wrench_overlay) w.field_array(field::kWrenchOverlay, *c.wrench_overlay);
  w.field_u32(field::kReflectedSequence, c.reflected_sequence);
  if (c.cartesian_pose) w.field_array(field::kCartesianPose, *c.cartesian_pose);
}

}  // namespace

// ── Public API ──────────────────────────────────────────────────────────────

const char* to_string(WireErrc code) {
  switch (code) {
    case WireErrc::BadMagic: return "BadMagic";
    case WireErrc::BadVersion: return "BadVersion";
    case WireErrc::BadChecksum: return "BadChecksum";
    case WireErrc::Truncated: return "Truncated";
    case WireErrc::TrailingBytes: return "TrailingBytes";
    case WireErrc::UnknownWireType: return "UnknownWireType";
    case WireErrc::UnknownMessageType: return "UnknownMessageType";
    case WireErrc::ModeFieldMismatch: return "ModeFieldMismatch";
    case WireErrc::InvariantViolation: return "InvariantViolation";
    case WireErrc::Overflow: return "Overflow";
    case WireErrc::NoCommonVersion: return "NoCommonVersion";
  }
  return "Unknown";
}

WireError::WireError(WireErrc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

Timestamp to_timestamp(Nanos t) {
  const auto ns = t.count();
  return {static_cast<std::uint32_t>(ns / 1'000'000'000), static_cast<std::uint32_t>(ns % 1'000'000'000)};
}

Nanos from_timestamp(Timestamp ts) {
  return Nanos{static_cast<std::int64_t>(ts.seconds) * 1'000'000'000 + ts.nanoseconds};
}

MessageType message_type_of(const Payload& payload) {
  return static_cast<MessageType>(payload.index());
}

std::set<std::uint8_t> required_fields(CommandMode mode) {
  switch (mode) {
    case CommandMode::POSITION: return {field::kJointPosition};
    case CommandMode::TORQUE: return {field::kJointPosition, field::kTorqueOverlay};
    case CommandMode::WRENCH: return {field::kWrenchOverlay};
    case CommandMode::CARTESIAN_POSE: return {field::kCartesianPose};
  }
  return {};
}

void validate(const MonitorMessage& m) {
  if (!(m.sample_period > 0.0) || !std::isfinite(m.sample_period))
    throw WireError(WireErrc::InvariantViolation, "sample_period must be positive and finite");
  if (m.timestamp.nanoseconds >= 1'000'000'000u)
    throw WireError(WireErrc::InvariantViolation, "timestamp nanoseconds out of range");
  if (!all_finite(m.measured_joint_position) || !all_finite(m.measured_torque) || !all_finite(m.external_torque) ||
      !all_finite(m.interpolated_command_position)) {
    throw WireError(WireErrc::InvariantViolation, "monitor joint vector holds a non-finite value");
  }
}

void validate(const CommandMessage& c, std::uint8_t version) {
  if (!mode_supported(version, c.client_command_mode)) {
    throw WireError(WireErrc::InvariantViolation, std::string(to_string(c.client_command_mode)) +
                                                      " is not part of protocol version " + std::to_string(version));
  }
  const auto req = required_fields(c.client_command_mode);
  const bool ok = c.joint_position.has_value() == req.contains(field::kJointPosition) &&
                  c.torque_overlay.has_value() == req.contains(field::kTorqueOverlay) &&
                  c.wrench_overlay.has_value() == req.contains(field::kWrenchOverlay) &&
                  c.cartesian_pose.has_value() == req.contains(field::kCartesianPose);
  if (!ok) throw WireError(WireErrc::ModeFieldMismatch, "optional fields do not match command mode");
  if ((c.joint_position && !all_finite(*c.joint_position)) || (c.torque_overlay && !all_finite(*c.torque_overlay)) ||
      (c.wrench_overlay && !all_finite(*c.wrench_overlay)) || (c.cartesian_pose && !all_finite(*c.cartesian_pose))) {
    throw WireError(WireErrc::InvariantViolation, "command holds a non-finite value");
  }
  if (c.cartesian_pose) {
    const auto& p = *c.cartesian_pose;
    const double norm = std::sqrt(p[3] * p[3] + p[4] * p[4] + p[5] * p[5] + p[6] * p[6]);
    if (std::abs(norm - 1.0) > 1e-9) throw WireError(WireErrc::InvariantViolation, "cartesian_pose quaternion not unit");
  }
}

Bytes encode_frame(const FrameHeader& header, const Payload& payload) {
  if (header.protocol_version < kMinVersion || header.protocol_version > kMaxVersion)
    throw WireError(WireErrc::InvariantViolation, "protocol_version must be 1 or 2");
  if (header.message_type != message_type_of(payload))
    throw WireError(WireErrc::InvariantViolation, "header message_type does not match payload");

  Bytes out;
  out.reserve(kHeaderSize + 256 + kCrcSize);
  Writer w(out);
  for (std::uint8_t b : kMagic) w.u8(b);
  w.u8(header.protocol_version);
  w.u8(static_cast<std::uint8_t>(header.message_type));
  w.u32(header.sequence);
  w.u16(0);  // patched below

  std::visit([&](const auto& msg) { encode_payload(w, msg, header.protocol_version); }, payload);

  const std::size_t payload_len = out.size() - kHeaderSize;
  if (payload_len > kMaxPayloadSize) throw WireError(WireErrc::Overflow, "payload exceeds 65535 bytes");
  out[10] = static_cast<std::uint8_t>(payload_len);
  out[11] = static_cast<std::uint8_t>(payload_len >> 8);
  w.u32(crc32(out));
  return out;
}

DecodedFrame decode_frame(std::span<const std::uint8_t> bytes, std::uint8_t reader_version) {
  if (bytes.size() < kHeaderSize + kCrcSize) throw WireError(WireErrc::Truncated, "frame shorter than header + CRC");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw WireError(WireErrc::BadMagic, "magic is not FRI1");

  DecodedFrame out;
  out.header.protocol_version = bytes[4];
  if (out.header.protocol_version < kMinVersion || out.header.protocol_version > kMaxVersion)
    throw WireError(WireErrc::BadVersion, "protocol_version " + std::to_string(bytes[4]));
  if (bytes[5] > static_cast<std::uint8_t>(MessageType::BYE))
    throw WireError(WireErrc::UnknownMessageType, "message_type " + std::to_string(bytes[5]));
  out.header.message_type = static_cast<MessageType>(bytes[5]);
  out.header.sequence = read_u32(bytes, 6);
  out.header.payload_length = read_u16(bytes, 10);

  const std::size_t total = kHeaderSize + out.header.payload_length + kCrcSize;
  if (bytes.size() < total) throw WireError(WireErrc::Truncated, "payload_length exceeds datagram");
  if (bytes.size() > total) throw WireError(WireErrc::TrailingBytes, "bytes after CRC");

  const std::uint32_t expected = read_u32(bytes, total - kCrcSize);
  if (crc32(bytes.first(total - kCrcSize)) != expected) throw WireError(WireErrc::BadChecksum, "CRC mismatch");

  const auto payload = bytes.subspan(kHeaderSize, out.header.payload_length);
  const auto& known = schema(out.header.message_type, reader_version);
  std::map<std::uint8_t, RawField> fields;
  for (const RawField& f : walk_fields(payload)) {
    auto it = known.find(f.id);
    if (it == known.end()) {
      out.skipped_fields.push_back(f.id);
      continue;
    }
    if (it->second != f.type) {
      throw WireError(WireErrc::InvariantViolation, "field " + std::to_string(f.id) + " has unexpected wire type");
    }
    if (!fields.emplace(f.id, f).second) {
      throw WireError(WireErrc::InvariantViolation, "duplicate field " + std::to_string(f.id));
    }
  }

  switch (out.header.message_type) {
    case MessageType::JOIN: {
      JoinMessage j;
      if (auto it = fields.find(field::kSupportedVersions); it != fields.end())
        j.supported_versions = read_u32(it->second.value, 0);
      out.payload = j;
      break;
    }
    case MessageType::MONITOR:
      out.payload = build_monitor(fields);
      break;
    case MessageType::COMMAND:
      out.payload = build_command(fields, reader_version);
      break;
    case MessageType::BYE: {
      ByeMessage b;
      if (auto it = fields.find(field::kByeReason); it != fields.end())
        b.reason = read_enum<ByeReason>(it->second, 3, "bye_reason");
      out.payload = b;
      break;
    }
  }
  return out;
}

std::uint8_t negotiate_version(const std::set<std::uint8_t>& client_supported, std::uint8_t server_version) {
  if (client_supported.empty()) throw WireError(WireErrc::InvariantViolation, "client supports no versions");
  for (auto it = client_supported.rbegin(); it != client_supported.rend(); ++it) {
    if (*it >= kMinVersion && *it <= server_version) return *it;
  }
  throw WireError(WireErrc::NoCommonVersion, "server speaks up to version " + std::to_string(server_version));
}

std::set<CommandMode> supported_modes(std::uint8_t version) {
  std::set<CommandMode> modes{CommandMode::POSITION, CommandMode::TORQUE, CommandMode::WRENCH};
  if (version >= 2) modes.insert(CommandMode::CARTESIAN_POSE);
  return modes;
}

bool mode_supported(std::uint8_t version, CommandMode mode) {
  return supported_modes(version).contains(mode);
}

std::uint32_t version_mask(const std::set<std::uint8_t>& versions) {
  std::uint32_t mask = 0;
  for (auto v : versions) {
    if (v < 32) mask |= 1u << v;
  }
  return mask;
}

std::set<std::uint8_t> versions_from_mask(std::uint32_t mask) {
  std::set<std::uint8_t> out;
  for (std::uint8_t v = 0; v < 32; ++v) {
    if (mask & (1u << v)) out.insert(v);
  }
  return out;
}

std::string dump_frame(std::span<const std::uint8_t> bytes) {
  std::ostringstream os;
  if (bytes.size() < kHeaderSize + kCrcSize) {
    os << "# error: Truncated (" << bytes.size() << " bytes)\n";
    return os.str();
  }
  const std::uint16_t len = read_u16(bytes, 10);
  os << "# magic=" << std::string(reinterpret_cast<const char*>(bytes.data()), 4)
     << " version=" << static_cast<int>(bytes[4]) << " type=" << static_cast<int>(bytes[5])
     << " sequence=" << read_u32(bytes, 6) << " payload_length=" << len << "\n";
  const std::size_t total = kHeaderSize + len + kCrcSize;
  if (bytes.size() != total) {
    os << "# error: " << (bytes.size() < total ? "Truncated" : "TrailingBytes") << "\n";
    if (bytes.size() < total) return os.str();
  }
  const std::uint32_t stored = read_u32(bytes, total - kCrcSize);
  const std::uint32_t actual = crc32(bytes.first(total - kCrcSize));
  char crcbuf[64];
  std::snprintf(crcbuf, sizeof crcbuf, "# crc=0x%08x %s\n", stored, stored == actual ? "ok" : "BAD");
  os << crcbuf;

  const auto payload = bytes.subspan(kHeaderSize, len);
  try {
    for (const RawField& f : walk_fields(payload)) {
      os << static_cast<int>(f.id) << ' ' << static_cast<int>(f.type) << ' ';
      char buf[32];
      switch (f.type) {
        case WireType::U32:
          os << read_u32(f.value, 0);
          break;
        case WireType::F64:
          std::snprintf(buf, sizeof buf, "%.17g", read_f64(f.value, 0));
          os << buf;
          break;
        case WireType::ENUM:
          os << static_cast<int>(f.value[0]);
          break;
        case WireType::F64_ARRAY:
          os << '[';
          for (std::size_t i = 0; i < f.count; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", read_f64(f.value, 8 * i));
            os << (i ? " " : "") << buf;
          }
          os << ']';
          break;
      }
      os << '\n';
    }
  } catch (const WireError& e) {
    os << "# error: " << e.what() << '\n';
  }
  return os.str();
}

Bytes parse_hex(std::string_view hex) {
  Bytes out;
  int nibble = -1;
  for (char ch : hex) {
    int v;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
    else if (ch == ' ' || ch == ':' || ch == '\n' || ch == '\t') continue;
    else throw std::invalid_argument(std::string("not a hex digit: ") + ch);
    if (nibble < 0) {
      nibble = v;
    } else {
      out.push_back(static_cast<std::uint8_t>((nibble << 4) | v));
      nibble = -1;
    }
  }
  if (nibble >= 0) throw std::invalid_argument("odd number of hex digits");
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xf]);
  }
  return s;
}

}  // namespace lbr::wire
