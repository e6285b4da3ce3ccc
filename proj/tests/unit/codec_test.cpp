// Copyright 2026 The adsbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "adsbench/ams/codec.hpp"
#include "support/generators.hpp"
#include "support/harness.hpp"

namespace adsbench::ams {
namespace {

using testing::hex;

template <typename T>
const T& payload_as(const DecodeResult& r) {
  return std::get<T>(std::get<Decoded>(r).frame.payload);
}

Header request_header(CommandId cmd, std::uint32_t invoke = 1) {
  Header h;
  h.target = {NetId::parse("5.16.3.178.1.1"), 851};
  h.source = {NetId::parse("192.168.0.10.1.1"), 32905};
  h.command = cmd;
  h.state_flags = state_flags::kRequest;
  h.invoke_id = invoke;
  return h;
}

TEST(NetIdTest, ParsesSixTokens) {
  EXPECT_EQ(NetId::parse("5.16.3.178.1.1").octets, (std::array<std::uint8_t, 6>{5, 16, 3, 178, 1, 1}));
  EXPECT_EQ(NetId::parse("0.0.0.0.0.0").octets, (std::array<std::uint8_t, 6>{}));
}

TEST(NetIdTest, RejectsWrongArity) {
  EXPECT_THROW(NetId::parse("1.2.3.4.5"), std::invalid_argument);
  EXPECT_THROW(NetId::parse("1.2.3.4.5.6.7"), std::invalid_argument);
  EXPECT_THROW(NetId::parse(""), std::invalid_argument);
}

TEST(NetIdTest, ErrorNamesOffendingToken) {
  try {
    NetId::parse("1.2.300.4.5.6");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string{e.what()}.find("'300'"), std::string::npos) << e.what();
  }
  try {
    NetId::parse("1.2.x3.4.5.6");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string{e.what()}.find("'x3'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(NetId::parse("1..3.4.5.6"), std::invalid_argument);
  EXPECT_THROW(NetId::parse("1.2.3.4.5.-1"), std::invalid_argument);
}

TEST(NetIdTest, RenderParseRoundTrip) {
  testing::Rng rng{7};
  for (int i = 0; i < 1000; ++i) {
    const auto id = testing::net_id(rng);
    EXPECT_EQ(NetId::parse(id.to_string()), id);
  }
}

TEST(EncodeTest, ReadRequestIsFiftyBytes) {
  const auto bytes = encode_frame(request_header(CommandId::kRead, 0x01020304),
                                  ReadRequest{0xF005, 0x11223344, 8});
  // Layout written out field by field.
  const auto expected = hex(
      "00 00  2c 00 00 00"                    // reserved, length 44
      " 05 10 03 b2 01 01  53 03"             // target 5.16.3.178.1.1:851
      " c0 a8 00 0a 01 01  89 80"             // source 192.168.0.10.1.1:32905
      " 02 00  04 00  0c 00 00 00"            // Read, request flags, 12 payload bytes
      " 00 00 00 00  04 03 02 01"             // error code, invoke id
      " 05 f0 00 00  44 33 22 11  08 00 00 00");
  EXPECT_EQ(bytes.size(), 50u);
  EXPECT_EQ(bytes, expected);
}

TEST(EncodeTest, EmptyPayloadGivesLength32) {
  const auto bytes = encode_frame(request_header(CommandId::kReadDeviceInfo), ReadDeviceInfoRequest{});
  ASSERT_EQ(bytes.size(), 38u);
  EXPECT_EQ(bytes[2], 32);
  EXPECT_EQ(bytes[3] | bytes[4] | bytes[5], 0);
}

TEST(EncodeTest, RecomputesPayloadLength) {
  auto h = request_header(CommandId::kWrite);
  h.payload_length = 999;
  const auto bytes = encode_frame(h, WriteRequest{1, 2, {9, 9, 9}});
  auto decoded = std::get<Decoded>(decode_frame(bytes));
  EXPECT_EQ(decoded.frame.header.payload_length, 15u);
}

TEST(EncodeTest, CommandPayloadMismatchThrows) {
  EXPECT_THROW(encode_frame(request_header(CommandId::kWrite), ReadRequest{}), EncodeError);
  auto h = request_header(CommandId::kRead);
  EXPECT_THROW(encode_frame(h, ReadResponse{}), EncodeError);
  EXPECT_THROW(encode_frame(h, AmsErrorResponse{}), EncodeError);
}

TEST(EncodeTest, DeviceNameLongerThan16Throws) {
  auto h = request_header(CommandId::kReadDeviceInfo);
  h.state_flags = state_flags::kReply;
  EXPECT_THROW(encode_frame(h, ReadDeviceInfoResponse{0, 1, 2, 3, std::string(17, 'a')}),
               EncodeError);
}

TEST(DecodeTest, TenBytesIsIncomplete) {
  const auto bytes = encode_frame(request_header(CommandId::kRead), ReadRequest{0xF005, 1, 8});
  auto r = decode_frame(std::span{bytes}.first(10));
  ASSERT_TRUE(std::holds_alternative<Incomplete>(r));
  EXPECT_EQ(std::get<Incomplete>(r).need, 40u);

  auto tiny = decode_frame(std::span{bytes}.first(3));
  ASSERT_TRUE(std::holds_alternative<Incomplete>(tiny));
  EXPECT_EQ(std::get<Incomplete>(tiny).need, 3u);
}

TEST(DecodeTest, EveryPrefixIsIncomplete) {
  const auto bytes = encode_frame(request_header(CommandId::kWrite), WriteRequest{1, 2, {1, 2, 3}});
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    auto r = decode_frame(std::span{bytes}.first(n));
    ASSERT_TRUE(std::holds_alternative<Incomplete>(r)) << n;
  }
}

TEST(DecodeTest, RejectsNonzeroReserved) {
  auto bytes = encode_frame(request_header(CommandId::kRead), ReadRequest{});
  bytes[1] = 0x80;
  EXPECT_THROW(decode_frame(bytes), ProtocolError);
}

TEST(DecodeTest, RejectsUnknownCommand) {
  auto bytes = encode_frame(request_header(CommandId::kRead), ReadRequest{});
  bytes[22] = 10;
  EXPECT_THROW(decode_frame(bytes), ProtocolError);
  bytes[22] = 0;
  EXPECT_THROW(decode_frame(bytes), ProtocolError);
}

TEST(DecodeTest, RejectsLengthDisagreement) {
  auto bytes = encode_frame(request_header(CommandId::kRead), ReadRequest{});
  bytes[26] = 11;  // AMS payload length
  EXPECT_THROW(decode_frame(bytes), ProtocolError);
}

TEST(DecodeTest, RejectsShortTcpLength) {
  auto bytes = hex("00 00 10 00 00 00");
  EXPECT_THROW(decode_frame(bytes), ProtocolError);
}

TEST(DecodeTest, RejectsPayloadThatDoesNotFitCommand) {
  // A Read request whose payload is 13 bytes instead of 12.
  auto bytes = encode_frame(request_header(CommandId::kWrite), WriteRequest{1, 2, {7}});
  bytes[22] = 2;  // now claims to be Read
  EXPECT_THROW(decode_frame(bytes), ProtocolError);
}

TEST(DecodeTest, WriteDataLengthMustMatch) {
  auto bytes = encode_frame(request_header(CommandId::kWrite), WriteRequest{1, 2, {7, 8}});
  bytes[46] = 3;  // declared write length
  EXPECT_THROW(decode_frame(bytes), ProtocolError);
}

TEST(DecodeTest, PreservesUnknownStateFlagBits) {
  auto h = request_header(CommandId::kRead);
  h.state_flags = 0x0044;
  auto bytes = encode_frame(h, ReadRequest{});
  auto f = std::get<Decoded>(decode_frame(bytes)).frame;
  EXPECT_EQ(f.header.state_flags, 0x0044);
  EXPECT_EQ(encode_frame(f), bytes);
}

TEST(DecodeTest, ErrorResponseWithoutPayload) {
  auto h = request_header(CommandId::kRead);
  h.state_flags = state_flags::kReply;
  h.error_code = 0x6;
  const auto bytes = encode_frame(h, AmsErrorResponse{});
  EXPECT_EQ(bytes.size(), 38u);
  auto f = std::get<Decoded>(decode_frame(bytes)).frame;
  EXPECT_TRUE(std::holds_alternative<AmsErrorResponse>(f.payload));
  EXPECT_EQ(f.header.error_code, 0x6u);
}

TEST(DecodeTest, CanaryBytesAreNotConsumed) {
  testing::Rng rng{11};
  for (std::size_t kind = 0; kind < testing::kPayloadKinds; ++kind) {
    const auto f = testing::frame(rng, kind);
    auto bytes = encode_frame(f);
    const auto size = bytes.size();
    bytes.insert(bytes.end(), {0xCC, 0xCC, 0xCC, 0xCC});
    auto decoded = std::get<Decoded>(decode_frame(bytes));
    EXPECT_EQ(decoded.consumed, size);
    EXPECT_EQ(decoded.frame.payload, f.payload);
  }
}

// Notification streams ------------------------------------------------------

TEST(StreamTest, OneStampOneSample) {
  const auto data = hex(
      "1c 00 00 00  01 00 00 00"
      " 00 80 3e d5 de b1 9d 01  01 00 00 00"
      " 07 00 00 00  04 00 00 00  01 00 00 00");
  const auto s = decode_notification_stream(data);
  ASSERT_EQ(s.stamps.size(), 1u);
  EXPECT_EQ(s.stamps[0].timestamp, 0x019db1ded53e8000ULL);
  ASSERT_EQ(s.stamps[0].samples.size(), 1u);
  EXPECT_EQ(s.stamps[0].samples[0].handle, 7u);
  EXPECT_EQ(s.stamps[0].samples[0].data, (Bytes{1, 0, 0, 0}));

  Bytes out;
  ByteWriter w{out};
  encode_notification_stream(s, w);
  EXPECT_EQ(out, data);
}

TEST(StreamTest, ZeroStamps) {
  const auto s = decode_notification_stream(hex("04 00 00 00 00 00 00 00"));
  EXPECT_TRUE(s.stamps.empty());
}

TEST(StreamTest, TwoStampsKeepOrder) {
  NotificationStream s;
  s.stamps.push_back({100, {{1, {0xAA}}}});
  s.stamps.push_back({200, {{2, {0xBB, 0xCC}}}});
  Bytes out;
  ByteWriter w{out};
  encode_notification_stream(s, w);
  const auto back = decode_notification_stream(out);
  ASSERT_EQ(back.stamps.size(), 2u);
  EXPECT_EQ(back.stamps[0].timestamp, 100u);
  EXPECT_EQ(back.stamps[1].samples[0].data, (Bytes{0xBB, 0xCC}));
}

TEST(StreamTest, InconsistentSampleSizeNamesIndices) {
  auto data = hex(
      "1c 00 00 00  01 00 00 00"
      " 00 00 00 00 00 00 00 00  01 00 00 00"
      " 07 00 00 00  05 00 00 00  01 00 00 00");
  try {
    decode_notification_stream(data);
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_NE(std::string{e.what()}.find("stamp 0 sample 0"), std::string::npos) << e.what();
  }
}

TEST(StreamTest, DeclaredLengthMustMatch) {
  EXPECT_THROW(decode_notification_stream(hex("08 00 00 00 00 00 00 00")), ProtocolError);
  EXPECT_THROW(decode_notification_stream(hex("04 00 00 00 00 00 00 00 ff")), ProtocolError);
}

TEST(StreamTest, HugeSampleCountIsRejected) {
  EXPECT_THROW(decode_notification_stream(hex(
                   "10 00 00 00  01 00 00 00  00 00 00 00 00 00 00 00  ff ff ff ff")),
               ProtocolError);
}

// Splitting ----------------------------------------------------------------

TEST(SplitterTest, ByteAtATime) {
  testing::Rng rng{3};
  std::vector<Frame> frames;
  Bytes wire;
  for (int i = 0; i < 50; ++i) {
    frames.push_back(testing::frame(rng, rng() % testing::kPayloadKinds));
    const auto b = encode_frame(frames.back());
    wire.insert(wire.end(), b.begin(), b.end());
  }
  FrameSplitter splitter;
  std::vector<Frame> out;
  for (auto byte : wire) {
    splitter.append(std::span{&byte, 1});
    while (auto f = splitter.next()) out.push_back(std::move(*f));
  }
  ASSERT_EQ(out.size(), frames.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].header, frames[i].header);
    EXPECT_EQ(out[i].payload, frames[i].payload);
  }
  EXPECT_EQ(splitter.buffered(), 0u);
}

TEST(SplitterTest, CorruptionThrows) {
  FrameSplitter splitter;
  const auto junk = hex("01 00 20 00 00 00");
  splitter.append(junk);
  EXPECT_THROW(splitter.next(), ProtocolError);
}

// Properties ---------------------------------------------------------------

TEST(CodecPropertyTest, RoundTripAndLengthCoherence) {
  testing::Rng rng{20240101};
  for (std::size_t kind = 0; kind < testing::kPayloadKinds; ++kind) {
    for (int i = 0; i < 1000; ++i) {
      const auto f = testing::frame(rng, kind);
      const auto bytes = encode_frame(f);
      ByteReader r{bytes};
      r.skip(2);
      const auto tcp_len = r.get<std::uint32_t>();
      r.skip(20);
      const auto payload_len = r.get<std::uint32_t>();
      ASSERT_EQ(tcp_len, bytes.size() - kAmsTcpHeaderSize);
      ASSERT_EQ(tcp_len, kAmsHeaderSize + payload_len);
      ASSERT_EQ(payload_len, encode_payload(f.payload).size());

      auto decoded = std::get<Decoded>(decode_frame(bytes));
      ASSERT_EQ(decoded.consumed, bytes.size());
      ASSERT_EQ(decoded.frame.header, f.header) << "kind " << kind;
      ASSERT_EQ(decoded.frame.payload, f.payload) << "kind " << kind;
    }
  }
}

TEST(CodecPropertyTest, RandomBytesNeverCrash) {
  testing::Rng rng{99};
  for (int i = 0; i < 20000; ++i) {
    auto bytes = testing::bytes(rng, 96);
    if (bytes.size() >= 6 && rng() % 2) {
      bytes[0] = bytes[1] = 0;
      const auto len = static_cast<std::uint32_t>(bytes.size() - 6);
      std::memcpy(bytes.data() + 2, &len, 4);
    }
    try {
      (void)decode_frame(bytes);
    } catch (const ProtocolError&) {
    }
  }
}

}  // namespace
}  // namespace adsbench::ams
