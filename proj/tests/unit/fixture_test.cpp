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

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "adsbench/ams/codec.hpp"
#include "adsbench/ams/error_codes.hpp"
#include "support/harness.hpp"

namespace adsbench::ams {
namespace {

using testing::load_hex;

Frame decode_fixture(const std::string& name) {
  const auto bytes = load_hex(name);
  auto r = decode_frame(bytes);
  auto* d = std::get_if<Decoded>(&r);
  if (d == nullptr) throw std::runtime_error(name + " is incomplete");
  EXPECT_EQ(d->consumed, bytes.size()) << name;
  return d->frame;
}

nlohmann::json oracle() {
  std::ifstream in{std::string{ADSBENCH_FIXTURE_DIR} + "/oracle_results.json"};
  return nlohmann::json::parse(in);
}

const Address kClient{NetId{{127, 0, 0, 1, 1, 20}}, 30000};
const Address kServer{NetId{{127, 0, 0, 1, 1, 1}}, 851};

Header header_like(const Frame& f, bool response) {
  Header h;
  h.target = response ? kClient : kServer;
  h.source = response ? kServer : kClient;
  h.command = f.header.command;
  h.state_flags = response ? state_flags::kReply : state_flags::kRequest;
  h.invoke_id = f.header.invoke_id;
  return h;
}

TEST(FixtureTest, EveryFixtureRoundTripsBitExact) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator{ADSBENCH_FIXTURE_DIR}) {
    if (entry.path().extension() != ".hex") continue;
    const auto name = entry.path().filename().string();
    const auto bytes = load_hex(name);
    const auto f = decode_fixture(name);
    EXPECT_EQ(encode_frame(f), bytes) << name;
    ++count;
  }
  EXPECT_GE(count, 19);
}

TEST(FixtureTest, ReadRequestFromReferenceClient) {
  const auto f = decode_fixture("read_request.hex");
  EXPECT_EQ(f.header.target, kServer);
  EXPECT_EQ(f.header.source, kClient);
  EXPECT_EQ(std::get<ReadRequest>(f.payload), (ReadRequest{0xF005, 1, 4}));
  EXPECT_EQ(encode_frame(header_like(f, false), ReadRequest{0xF005, 1, 4}),
            load_hex("read_request.hex"));
}

TEST(FixtureTest, ReadResponseCarriesValue) {
  const auto f = decode_fixture("read_response.hex");
  EXPECT_EQ(std::get<ReadResponse>(f.payload), (ReadResponse{0, {0x78, 0x56, 0x34, 0x12}}));
  EXPECT_EQ(oracle()["read"]["data"], "78563412");
}

TEST(FixtureTest, WriteRequestFromReferenceClient) {
  const auto f = decode_fixture("write_request.hex");
  const WriteRequest expected{0xF005, 1, {0x78, 0x56, 0x34, 0x12}};
  EXPECT_EQ(std::get<WriteRequest>(f.payload), expected);
  EXPECT_EQ(encode_frame(header_like(f, false), expected), load_hex("write_request.hex"));
  EXPECT_EQ(std::get<WriteResponse>(decode_fixture("write_response.hex").payload).result, 0u);
}

TEST(FixtureTest, HandleLookupFromReferenceClient) {
  const auto f = decode_fixture("read_write_request.hex");
  const auto& rq = std::get<ReadWriteRequest>(f.payload);
  EXPECT_EQ(rq.index_group, index_group::kSymbolHandleByName);
  EXPECT_EQ(rq.read_length, 0xFFFFFFFFu);
  const std::string name{"MAIN.diVar"};
  Bytes expected_name(name.begin(), name.end());
  expected_name.push_back(0);
  EXPECT_EQ(rq.write_data, expected_name);
  EXPECT_EQ(encode_frame(header_like(f, false), rq), load_hex("read_write_request.hex"));

  const auto resp = std::get<ReadWriteResponse>(decode_fixture("read_write_response.hex").payload);
  EXPECT_EQ(resp.result, 0u);
  ByteReader r{resp.data};
  EXPECT_EQ(r.get<std::uint32_t>(), oracle()["read_write"]["handle"].get<std::uint32_t>());
  EXPECT_EQ(r.get<std::uint32_t>(), oracle()["read_write"]["size"].get<std::uint32_t>());
}

TEST(FixtureTest, AddNotificationRequestIs40BytePayload) {
  const auto f = decode_fixture("add_notification_request.hex");
  EXPECT_EQ(f.header.payload_length, 40u);
  const AddNotificationRequest expected{0xF005, 1, {4, TransMode::kOnChange, 0, 100000}};
  EXPECT_EQ(std::get<AddNotificationRequest>(f.payload), expected);
  EXPECT_EQ(encode_frame(header_like(f, false), expected), load_hex("add_notification_request.hex"));
}

TEST(FixtureTest, AddNotificationResponseHandleOne) {
  const auto f = decode_fixture("add_notification_response.hex");
  EXPECT_EQ(std::get<AddNotificationResponse>(f.payload), (AddNotificationResponse{0, 1}));
  EXPECT_EQ(oracle()["add_notification"]["handle"], 1);
}

TEST(FixtureTest, DeviceNotificationStream) {
  const auto f = decode_fixture("device_notification.hex");
  EXPECT_EQ(f.header.command, CommandId::kDeviceNotification);
  EXPECT_FALSE(f.header.is_response());
  const auto& s = std::get<DeviceNotification>(f.payload).stream;
  ASSERT_EQ(s.stamps.size(), 1u);
  ASSERT_EQ(s.stamps[0].samples.size(), 1u);
  EXPECT_EQ(s.stamps[0].samples[0].handle, 1u);
  EXPECT_EQ(s.stamps[0].samples[0].data, (Bytes{0x78, 0x56, 0x34, 0x12}));
  EXPECT_EQ(oracle()["device_notification"]["value"], "78563412");
}

TEST(FixtureTest, DeleteNotification) {
  EXPECT_EQ(std::get<DeleteNotificationRequest>(decode_fixture("delete_notification_request.hex").payload).handle, 1u);
  EXPECT_EQ(std::get<DeleteNotificationResponse>(decode_fixture("delete_notification_response.hex").payload).result, 0u);
}

TEST(FixtureTest, DeviceInfoAndState) {
  const auto info = std::get<ReadDeviceInfoResponse>(decode_fixture("read_device_info_response.hex").payload);
  const auto j = oracle()["read_device_info"];
  EXPECT_EQ(info.device_name, j["deviceName"].get<std::string>());
  EXPECT_EQ(info.major, j["majorVersion"].get<int>());
  EXPECT_EQ(info.minor, j["minorVersion"].get<int>());
  EXPECT_EQ(info.build, j["versionBuild"].get<int>());
  EXPECT_TRUE(std::holds_alternative<ReadDeviceInfoRequest>(decode_fixture("read_device_info_request.hex").payload));

  const auto state = std::get<ReadStateResponse>(decode_fixture("read_state_response.hex").payload);
  EXPECT_EQ(state.ads_state, oracle()["read_state"]["adsState"].get<int>());
}

TEST(FixtureTest, ErrorCodesMatchReferenceClient) {
  const auto wc = std::get<WriteControlResponse>(decode_fixture("write_control_response.hex").payload);
  EXPECT_EQ(wc.result, oracle()["write_control"]["code"].get<std::uint32_t>());
  const auto nf = std::get<ReadWriteResponse>(decode_fixture("symbol_not_found_response.hex").payload);
  EXPECT_EQ(nf.result, ads_error::kSymbolNotFound);
  EXPECT_EQ(nf.result, oracle()["symbol_not_found"]["code"].get<std::uint32_t>());
}

}  // namespace
}  // namespace adsbench::ams
