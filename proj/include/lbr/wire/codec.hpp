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
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbr/wire/messages.hpp"

namespace lbr::wire {

inline constexpr std::uint8_t kMagic[4] = {0x46, 0x52, 0x49, 0x31};  // "FRI1"
inline constexpr std::size_t kHeaderSize = 12;
inline constexpr std::size_t kCrcSize = 4;
inline constexpr std::size_t kMaxPayloadSize = 65535;
inline constexpr std::uint8_t kMinVersion = 1;
inline constexpr std::uint8_t kMaxVersion = 2;

using Bytes = std::vector<std::uint8_t>;

enum class WireErrc {
  BadMagic,
  BadVersion,
  BadChecksum,
  Truncated,
  TrailingBytes,
  UnknownWireType,
  UnknownMessageType,
  ModeFieldMismatch,
  InvariantViolation,
  Overflow,
  NoCommonVersion,
};

const char* to_string(WireErrc code);

class WireError : public std::runtime_error {
 public:
  WireError(WireErrc code, const std::string& detail);

  WireErrc code() const noexcept { return code_; }

 private:
  WireErrc code_;
};

struct DecodedFrame {
  FrameHeader header;
  Payload payload;
  /// Field ids the reader version does not know, in wire order.
  std::vector<std::uint8_t> skipped_fields;
};

/// Serializes header || fields (ascending id) || CRC-32. The header's
/// message_type must match the payload alternative; payload_length is
/// computed and the passed value ignored.
Bytes encode_frame(const FrameHeader& header, const Payload& payload);

/// Accepts arbitrary bytes. Fields unknown to `reader_version` are skipped
/// structurally and reported in DecodedFrame::skipped_fields.
DecodedFrame decode_frame(std::span<const std::uint8_t> bytes, std::uint8_t reader_version);

/// Highest version in client_supported that the server also speaks.
std::uint8_t negotiate_version(const std::set<std::uint8_t>& client_supported, std::uint8_t server_version);

std::set<CommandMode> supported_modes(std::uint8_t version);
bool mode_supported(std::uint8_t version, CommandMode mode);

std::uint32_t version_mask(const std::set<std::uint8_t>& versions);
std::set<std::uint8_t> versions_from_mask(std::uint32_t mask);

/// Field ids that must be present for a command in the given mode.
std::set<std::uint8_t> required_fields(CommandMode mode);

/// Throws WireError(InvariantViolation) on failure.
void validate(const MonitorMessage& msg);
void validate(const CommandMessage& msg, std::uint8_t version);

/// Human readable dump: a header line, then one `field_id wire_type value`
/// line per payload field. Never throws; problems are reported inline.
std::string dump_frame(std::span<const std::uint8_t> bytes);

Bytes parse_hex(std::string_view hex);
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace lbr::wire
