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

#include <gtest/gtest.h>

#include <cstring>

#include "lbr/wire/codec.hpp"
#include "lbr/wire/crc32.hpp"
#include "support/crc_oracle.hpp"
#include "support/generators.hpp"

namespace lbr::wire {
namespace {

using testing::Gen;

Bytes frame_of(const Payload& p, std::uint8_t version, std::uint32_t seq) {
  FrameHeader h;
  h.protocol_version = version;
  h.message_type = message_type_of(p);
  h.sequence = seq;
  return encode_frame(h, p);
}

TEST(Crc32, MatchesBitwiseOracle) {
  Gen g(7);
  for (int n = 0; n < 200; ++n) {
    Bytes b(static_cast<std::size_t>(g.integer(0, 300)));
    for (auto& x : b) x = static_cast<std::uint8_t>(g.integer(0, 255));
    EXPECT_EQ(crc32(b), testing::bitwise_crc32(b));
  }
}

TEST(Crc32, CheckValue) {
  const std::string s = "123456789";
  const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
  EXPECT_EQ(crc32(bytes), 0xCBF43926u);
}

TEST(Codec, GoldenJoinFrame) {
  FrameHeader h;
  h.protocol_version = 1;
  h.message_type = MessageType::JOIN;
  h.sequence = 0;
  const Bytes got = encode_frame(h, JoinMessage{});
  const Bytes want = parse_hex("46 52 49 31 01 00 00 00 00 00 00 00 ff 48 16 13");
  EXPECT_EQ(got, want);

  const DecodedFrame d = decode_frame(want, 1);
  EXPECT_EQ(d.header.message_type, MessageType::JOIN);
  EXPECT_EQ(d.header.payload_length, 0);
  EXPECT_EQ(std::get<JoinMessage>(d.payload), JoinMessage{});
}

TEST(Codec, HeaderLayoutIsLittleEndian) {
  MonitorMessage m;
  const Bytes b = frame_of(m, 2, 0x01020304u);
  ASSERT_GE(b.size(), kHeaderSize + kCrcSize);
  EXPECT_EQ(0, std::memcmp(b.data(), kMagic, 4));
  EXPECT_EQ(b[4], 2);
  EXPECT_EQ(b[5], 1);
  EXPECT_EQ(b[6], 0x04);
  EXPECT_EQ(b[9], 0x01);
  const std::size_t len = b[10] | (b[11] << 8);
  EXPECT_EQ(len, b.size() - kHeaderSize - kCrcSize);

  const std::span<const std::uint8_t> body(b.data(), b.size() - 4);
  const std::uint32_t crc = testing::bitwise_crc32(body);
  EXPECT_EQ(b[b.size() - 4], crc & 0xFF);
  EXPECT_EQ(b[b.size() - 1], crc >> 24);
}

TEST(Codec, MonitorRoundTripProperty) {
  Gen g(11);
  for (int n = 0; n < 2000; ++n) {
    const MonitorMessage m = g.monitor();
    const std::uint8_t v = static_cast<std::uint8_t>(g.integer(1, 2));
    const std::uint32_t seq = g.u32();
    const Bytes b = frame_of(m, v, seq);
    const DecodedFrame d = decode_frame(b, v);
    EXPECT_EQ(d.header.sequence, seq);
    EXPECT_EQ(std::get<MonitorMessage>(d.payload), m);
    EXPECT_TRUE(d.skipped_fields.empty());
  }
}

TEST(Codec, CommandRoundTripProperty) {
  Gen g(12);
  for (int n = 0; n < 2000; ++n) {
    const std::uint8_t v = static_cast<std::uint8_t>(g.integer(1, 2));
    const CommandMessage c = g.command(v);
    const Bytes b = frame_of(c, v, g.u32());
    EXPECT_EQ(std::get<CommandMessage>(decode_frame(b, v).payload), c);
    // Re-encoding the decoded value gives identical bytes.
    const DecodedFrame d = decode_frame(b, v);
    EXPECT_EQ(encode_frame(d.header, d.payload), b);
  }
}

TEST(Codec, JoinAndByeRoundTrip) {
  for (auto mask : {std::optional<std::uint32_t>{}, std::optional<std::uint32_t>{0b110u}}) {
    const Bytes b = frame_of(JoinMessage{mask}, 1, 3);
    EXPECT_EQ(std::get<JoinMessage>(decode_frame(b, 1).payload).supported_versions, mask);
  }
  for (int r = 0; r <= 3; ++r) {
    const ByeMessage bye{static_cast<ByeReason>(r)};
    EXPECT_EQ(std::get<ByeMessage>(decode_frame(frame_of(bye, 2, 9), 2).payload), bye);
  }
}

TEST(Codec, EverySingleByteFlipIsRejected) {
  Gen g(13);
  const Bytes b = frame_of(g.monitor(), 2, 42);
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (int bit = 0; bit < 8; ++bit) {
      Bytes c = b;
      c[i] ^= static_cast<std::uint8_t>(1u << bit);
      EXPECT_THROW(decode_frame(c, 2), WireError) << "byte " << i << " bit " << bit;
    }
  }
}

TEST(Codec, ChecksumErrorForPayloadCorruption) {
  Gen g(14);
  const Bytes b = frame_of(g.command(2), 2, 1);
  Bytes c = b;
  c[kHeaderSize + 3] ^= 0x10;
  try {
    decode_frame(c, 2);
    FAIL();
  } catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrc::BadChecksum);
  }
}

WireErrc error_of(std::span<const std::uint8_t> b, std::uint8_t reader = 2) {
  try {
    decode_frame(b, reader);
  } catch (const WireError& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return WireErrc::Overflow;
}

TEST(Codec, ErrorClassification) {
  const Bytes good = frame_of(JoinMessage{}, 1, 0);

  Bytes magic = good;
  magic[0] = 'X';
  EXPECT_EQ(error_of(magic), WireErrc::BadMagic);

  EXPECT_EQ(error_of(std::span(good).first(5)), WireErrc::Truncated);
  EXPECT_EQ(error_of(std::span(good).first(good.size() - 1)), WireErrc::Truncated);

  Bytes trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(error_of(trailing), WireErrc::TrailingBytes);
}

// Builds a frame by hand with a valid CRC so later checks are reached.
Bytes raw_frame(std::uint8_t version, std::uint8_t type, const Bytes& payload) {
  Bytes b{0x46, 0x52, 0x49, 0x31, version, type, 0, 0, 0, 0, static_cast<std::uint8_t>(payload.size()),
          static_cast<std::uint8_t>(payload.size() >> 8)};
  for (std::uint8_t x : payload) b.push_back(x);
  const std::uint32_t crc = testing::bitwise_crc32(b);
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
  return b;
}

TEST(Codec, StructuralErrorsBehindValidCrc) {
  EXPECT_EQ(error_of(raw_frame(3, 0, {})), WireErrc::BadVersion);
  EXPECT_EQ(error_of(raw_frame(1, 9, {})), WireErrc::UnknownMessageType);
  EXPECT_EQ(error_of(raw_frame(1, 0, {1, 7, 0})), WireErrc::UnknownWireType);
  EXPECT_EQ(error_of(raw_frame(1, 0, {1, 0, 0})), WireErrc::Truncated);
  // Array count running past the payload.
  EXPECT_EQ(error_of(raw_frame(1, 2, {2, 2, 7, 0, 0})), WireErrc::Truncated);
  // POSITION command without joint_position.
  EXPECT_EQ(error_of(raw_frame(1, 2, {1, 3, 0, 5, 0, 0, 0, 0, 0})), WireErrc::ModeFieldMismatch);
}

TEST(Codec, ModeFieldMismatchOnExtraField) {
  CommandMessage c;
  c.client_command_mode = CommandMode::POSITION;
  c.joint_position = JointArray{};
  c.wrench_overlay = WrenchArray{};
  FrameHeader h;
  h.message_type = MessageType::COMMAND;
  EXPECT_THROW(encode_frame(h, c), WireError);
}

TEST(Codec, EncodeRejectsNonFinite) {
  CommandMessage c;
  c.joint_position = JointArray{};
  (*c.joint_position)[3] = std::numeric_limits<double>::quiet_NaN();
  FrameHeader h;
  h.message_type = MessageType::COMMAND;
  EXPECT_THROW(encode_frame(h, c), WireError);
}

TEST(Codec, V1ReaderSkipsV2OnlyFields) {
  Gen g(15);
  int pose_frames = 0;
  for (int n = 0; n < 1000; ++n) {
    const CommandMessage c = g.command(2);
    const Bytes b = frame_of(c, 2, static_cast<std::uint32_t>(n));
    const DecodedFrame d = decode_frame(b, 1);
    const auto& got = std::get<CommandMessage>(d.payload);
    EXPECT_EQ(got.client_command_mode, c.client_command_mode);
    EXPECT_EQ(got.reflected_sequence, c.reflected_sequence);
    EXPECT_FALSE(got.cartesian_pose.has_value());
    if (c.cartesian_pose) {
      ++pose_frames;
      EXPECT_EQ(d.skipped_fields, std::vector<std::uint8_t>{field::kCartesianPose});
    } else {
      EXPECT_EQ(got, c);
      EXPECT_TRUE(d.skipped_fields.empty());
    }
  }
  EXPECT_GT(pose_frames, 0);
}

TEST(Codec, UnknownFieldIdsAreSkipped) {
  // JOIN with an extra field id 9 (u32).
  const Bytes b = raw_frame(2, 0, {9, 0, 1, 2, 3, 4});
  const DecodedFrame d = decode_frame(b, 2);
  EXPECT_EQ(d.skipped_fields, std::vector<std::uint8_t>{9});
}

TEST(Negotiation, Matrix) {
  using V = std::set<std::uint8_t>;
  EXPECT_EQ(negotiate_version(V{1}, 1), 1);
  EXPECT_EQ(negotiate_version(V{1}, 2), 1);
  EXPECT_EQ(negotiate_version(V{1, 2}, 1), 1);
  EXPECT_EQ(negotiate_version(V{1, 2}, 2), 2);
  EXPECT_EQ(negotiate_version(V{2}, 2), 2);
  try {
    negotiate_version(V{2}, 1);
    FAIL();
  } catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrc::NoCommonVersion);
  }
  EXPECT_THROW(negotiate_version(V{}, 2), WireError);
}

TEST(Negotiation, ModesPerVersion) {
  EXPECT_FALSE(mode_supported(1, CommandMode::CARTESIAN_POSE));
  EXPECT_TRUE(mode_supported(2, CommandMode::CARTESIAN_POSE));
  EXPECT_EQ(supported_modes(1).size(), 3u);
  EXPECT_EQ(supported_modes(2).size(), 4u);
  EXPECT_EQ(versions_from_mask(version_mask({1, 2})), (std::set<std::uint8_t>{1, 2}));
}

TEST(Validate, MonitorInvariants) {
  MonitorMessage m;
  EXPECT_NO_THROW(validate(m));
  m.sample_period = 0.0;
  EXPECT_THROW(validate(m), WireError);
  m.sample_period = 0.005;
  m.timestamp.nanoseconds = 1'000'000'000;
  EXPECT_THROW(validate(m), WireError);
}

TEST(Validate, CartesianPoseNeedsVersion2AndUnitQuaternion) {
  CommandMessage c;
  c.client_command_mode = CommandMode::CARTESIAN_POSE;
  c.cartesian_pose = PoseArray{0.1, 0, 0.5, 1, 0, 0, 0};
  EXPECT_NO_THROW(validate(c, 2));
  EXPECT_THROW(validate(c, 1), WireError);
  (*c.cartesian_pose)[3] = 0.5;
  EXPECT_THROW(validate(c, 2), WireError);
}

TEST(Dump, ListsFieldsAndCrc) {
  const std::string s = dump_frame(parse_hex("46 52 49 31 01 00 00 00 00 00 00 00 ff 48 16 13"));
  EXPECT_NE(s.find("magic="), std::string::npos);
  EXPECT_NE(s.find("ok"), std::string::npos);

  Gen g(16);
  const std::string m = dump_frame(frame_of(g.monitor(), 1, 5));
  EXPECT_NE(m.find("\n11 0 "), std::string::npos);
  EXPECT_NE(m.find("\n5 2 "), std::string::npos);

  const std::string bad = dump_frame(parse_hex("46 52 49 31 01 00 00 00 00 00 00 00 ff 48 16 14"));
  EXPECT_NE(bad.find("BAD"), std::string::npos);
  EXPECT_NO_THROW(dump_frame(parse_hex("00 01")));
}

TEST(Hex, RoundTrip) {
  const Bytes b{0, 1, 0xab, 0xff};
  EXPECT_EQ(parse_hex(to_hex(b)), b);
  EXPECT_EQ(parse_hex("00:01:AB:ff"), b);
  EXPECT_THROW(parse_hex("0g"), std::invalid_argument);
}

}  // namespace
}  // namespace lbr::wire
