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

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adsbench/ams/byte_io.hpp"

namespace adsbench::ams {

/// Six-octet AMS device identifier, rendered as "a.b.c.d.e.f".
struct NetId {
  std::array<std::uint8_t, 6> octets{};

  /// Throws std::invalid_argument naming the offending token.
  static NetId parse(std::string_view text);
  std::string to_string() const;

  friend auto operator<=>(const NetId&, const NetId&) = default;
};

struct Address {
  NetId net_id;
  std::uint16_t port = 0;

  friend auto operator<=>(const Address&, const Address&) = default;
};

enum class CommandId : std::uint16_t {
  kReadDeviceInfo = 1,
  kRead = 2,
  kWrite = 3,
  kReadState = 4,
  kWriteControl = 5,
  kAddDeviceNotification = 6,
  kDeleteDeviceNotification = 7,
  kDeviceNotification = 8,
  kReadWrite = 9,
};

bool is_known_command(std::uint16_t raw);
std::string_view command_name(CommandId id);

namespace state_flags {
inline constexpr std::uint16_t kResponse = 0x0001;
inline constexpr std::uint16_t kAdsCommand = 0x0004;
inline constexpr std::uint16_t kRequest = kAdsCommand;
inline constexpr std::uint16_t kReply = kAdsCommand | kResponse;
}  // namespace state_flags

inline constexpr std::size_t kAmsTcpHeaderSize = 6;
inline constexpr std::size_t kAmsHeaderSize = 32;
inline constexpr std::uint16_t kDefaultTcpPort = 48898;
inline constexpr std::uint16_t kDefaultPlcPort = 851;

/// Reserved index groups of the symbol service.
namespace index_group {
inline constexpr std::uint32_t kSymbolHandleByName = 0xF003;
inline constexpr std::uint32_t kSymbolValueByHandle = 0xF005;
inline constexpr std::uint32_t kSymbolReleaseHandle = 0xF006;
/// Process-image data area holding every simulated symbol.
inline constexpr std::uint32_t kPlcDataArea = 0x4020;
/// Simulator diagnostics (offset 0: u64 dropped notification streams).
inline constexpr std::uint32_t kSimDiagnostics = 0xF100;
}  // namespace index_group

struct Header {
  Address target;
  Address source;
  CommandId command = CommandId::kRead;
  std::uint16_t state_flags = state_flags::kRequest;
  std::uint32_t payload_length = 0;
  std::uint32_t error_code = 0;
  std::uint32_t invoke_id = 0;

  bool is_response() const { return (state_flags & state_flags::kResponse) != 0; }

  friend bool operator==(const Header&, const Header&) = default;
};

enum class TransMode : std::uint32_t { kCyclic = 3, kOnChange = 4 };

/// Time values are in 100 ns units.
struct NotificationAttrib {
  std::uint32_t length = 0;
  TransMode trans_mode = TransMode::kOnChange;
  std::uint32_t max_delay = 0;
  std::uint32_t cycle_time = 0;

  friend bool operator==(const NotificationAttrib&, const NotificationAttrib&) = default;
};

struct Sample {
  std::uint32_t handle = 0;
  Bytes data;
  friend bool operator==(const Sample&, const Sample&) = default;
};

struct NotificationStamp {
  /// 100 ns ticks since 1601-01-01 UTC.
  std::uint64_t timestamp = 0;
  std::vector<Sample> samples;
  friend bool operator==(const NotificationStamp&, const NotificationStamp&) = default;
};

struct NotificationStream {
  std::vector<NotificationStamp> stamps;
  std::size_t sample_count() const;
  friend bool operator==(const NotificationStream&, const NotificationStream&) = default;
};

// Command payloads. Requests and responses are distinct types so the variant
// alternative alone identifies the wire layout.

struct ReadDeviceInfoRequest {
  friend bool operator==(const ReadDeviceInfoRequest&, const ReadDeviceInfoRequest&) = default;
};
struct ReadDeviceInfoResponse {
  std::uint32_t result = 0;
  std::uint8_t major = 0;
  std::uint8_t minor = 0;
  std::uint16_t build = 0;
  /// At most 16 bytes on the wire, NUL padded.
  std::string device_name;
  friend bool operator==(const ReadDeviceInfoResponse&, const ReadDeviceInfoResponse&) = default;
};
struct ReadRequest {
  std::uint32_t index_group = 0;
  std::uint32_t index_offset = 0;
  std::uint32_t read_length = 0;
  friend bool operator==(const ReadRequest&, const ReadRequest&) = default;
};
struct ReadResponse {
  std::uint32_t result = 0;
  Bytes data;
  friend bool operator==(const ReadResponse&, const ReadResponse&) = default;
};
struct WriteRequest {
  std::uint32_t index_group = 0;
  std::uint32_t index_offset = 0;
  Bytes data;
  friend bool operator==(const WriteRequest&, const WriteRequest&) = default;
};
struct WriteResponse {
  std::uint32_t result = 0;
  friend bool operator==(const WriteResponse&, const WriteResponse&) = default;
};
struct ReadStateRequest {
  friend bool operator==(const ReadStateRequest&, const ReadStateRequest&) = default;
};
struct ReadStateResponse {
  std::uint32_t result = 0;
  std::uint16_t ads_state = 0;
  std::uint16_t device_state = 0;
  friend bool operator==(const ReadStateResponse&, const ReadStateResponse&) = default;
};
struct WriteControlRequest {
  std::uint16_t ads_state = 0;
  std::uint16_t device_state = 0;
  Bytes data;
  friend bool operator==(const WriteControlRequest&, const WriteControlRequest&) = default;
};
struct WriteControlResponse {
  std::uint32_t result = 0;
  friend bool operator==(const WriteControlResponse&, const WriteControlResponse&) = default;
};
struct AddNotificationRequest {
  std::uint32_t index_group = 0;
  std::uint32_t index_offset = 0;
  NotificationAttrib attrib;
  friend bool operator==(const AddNotificationRequest&, const AddNotificationRequest&) = default;
};
struct AddNotificationResponse {
  std::uint32_t result = 0;
  std::uint32_t handle = 0;
  friend bool operator==(const AddNotificationResponse&, const AddNotificationResponse&) = default;
};
struct DeleteNotificationRequest {
  std::uint32_t handle = 0;
  friend bool operator==(const DeleteNotificationRequest&,
                         const DeleteNotificationRequest&) = default;
};
struct DeleteNotificationResponse {
  std::uint32_t result = 0;
  friend bool operator==(const DeleteNotificationResponse&,
                         const DeleteNotificationResponse&) = default;
};
struct DeviceNotification {
  NotificationStream stream;
  friend bool operator==(const DeviceNotification&, const DeviceNotification&) = default;
};
struct ReadWriteRequest {
  std::uint32_t index_group = 0;
  std::uint32_t index_offset = 0;
  std::uint32_t read_length = 0;
  Bytes write_data;
  friend bool operator==(const ReadWriteRequest&, const ReadWriteRequest&) = default;
};
struct ReadWriteResponse {
  std::uint32_t result = 0;
  Bytes data;
  friend bool operator==(const ReadWriteResponse&, const ReadWriteResponse&) = default;
};
/// Response carrying only a nonzero AMS header error code and no payload.
struct AmsErrorResponse {
  friend bool operator==(const AmsErrorResponse&, const AmsErrorResponse&) = default;
};

using Payload = std::variant<ReadDeviceInfoRequest, ReadDeviceInfoResponse, ReadRequest,
                             ReadResponse, WriteRequest, WriteResponse, ReadStateRequest,
                             ReadStateResponse, WriteControlRequest, WriteControlResponse,
                             AddNotificationRequest, AddNotificationResponse,
                             DeleteNotificationRequest, DeleteNotificationResponse,
                             DeviceNotification, ReadWriteRequest, ReadWriteResponse,
                             AmsErrorResponse>;

struct Frame {
  Header header;
  Payload payload;
  friend bool operator==(const Frame&, const Frame&) = default;
};

}  // namespace adsbench::ams
