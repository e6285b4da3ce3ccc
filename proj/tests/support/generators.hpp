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

#include <random>
#include <string>

#include "adsbench/ams/codec.hpp"

namespace adsbench::testing {

using Rng = std::mt19937_64;

inline std::uint32_t u32(Rng& rng) { return static_cast<std::uint32_t>(rng()); }
inline std::uint16_t u16(Rng& rng) { return static_cast<std::uint16_t>(rng()); }
inline std::uint8_t u8(Rng& rng) { return static_cast<std::uint8_t>(rng()); }

inline ams::Bytes bytes(Rng& rng, std::size_t max_len = 64) {
  ams::Bytes b(rng() % (max_len + 1));
  for (auto& x : b) x = u8(rng);
  return b;
}

inline ams::NetId net_id(Rng& rng) {
  ams::NetId id;
  for (auto& o : id.octets) o = u8(rng);
  return id;
}

inline ams::NotificationStream stream(Rng& rng) {
  ams::NotificationStream s;
  const auto stamps = rng() % 4;
  std::uint64_t ts = rng() >> 8;
  for (std::size_t i = 0; i < stamps; ++i) {
    ams::NotificationStamp stamp;
    ts += rng() % 100000;
    stamp.timestamp = ts;
    const auto samples = rng() % 4;
    for (std::size_t k = 0; k < samples; ++k) stamp.samples.push_back({u32(rng), bytes(rng, 16)});
    s.stamps.push_back(std::move(stamp));
  }
  return s;
}

/// Number of alternatives in ams::Payload.
inline constexpr std::size_t kPayloadKinds = std::variant_size_v<ams::Payload>;

/// Random payload of the given variant index.
inline ams::Payload payload(Rng& rng, std::size_t kind) {
  using namespace ams;
  switch (kind) {
    case 0: return ReadDeviceInfoRequest{};
    case 1: {
      std::string name(rng() % 17, 'x');
      for (auto& c : name) c = static_cast<char>('A' + rng() % 26);
      return ReadDeviceInfoResponse{u32(rng), u8(rng), u8(rng), u16(rng), name};
    }
    case 2: return ReadRequest{u32(rng), u32(rng), u32(rng)};
    case 3: return ReadResponse{u32(rng), bytes(rng)};
    case 4: return WriteRequest{u32(rng), u32(rng), bytes(rng)};
    case 5: return WriteResponse{u32(rng)};
    case 6: return ReadStateRequest{};
    case 7: return ReadStateResponse{u32(rng), u16(rng), u16(rng)};
    case 8: return WriteControlRequest{u16(rng), u16(rng), bytes(rng)};
    case 9: return WriteControlResponse{u32(rng)};
    case 10: {
      NotificationAttrib a{u32(rng), rng() % 2 ? TransMode::kOnChange : TransMode::kCyclic,
                           u32(rng), u32(rng)};
      return AddNotificationRequest{u32(rng), u32(rng), a};
    }
    case 11: return AddNotificationResponse{u32(rng), u32(rng)};
    case 12: return DeleteNotificationRequest{u32(rng)};
    case 13: return DeleteNotificationResponse{u32(rng)};
    case 14: return DeviceNotification{stream(rng)};
    case 15: return ReadWriteRequest{u32(rng), u32(rng), u32(rng), bytes(rng)};
    case 16: return ReadWriteResponse{u32(rng), bytes(rng)};
    default: return AmsErrorResponse{};
  }
}

/// A random, internally consistent frame carrying a payload of `kind`.
inline ams::Frame frame(Rng& rng, std::size_t kind) {
  using namespace ams;
  Frame f;
  f.payload = payload(rng, kind);
  auto& h = f.header;
  h.target = {net_id(rng), u16(rng)};
  h.source = {net_id(rng), u16(rng)};
  h.invoke_id = u32(rng);
  // Bits other than the response flag are opaque and must survive a round trip.
  const auto extra = static_cast<std::uint16_t>(u16(rng) & ~state_flags::kResponse);
  if (auto k = payload_kind(f.payload)) {
    h.command = k->command;
    h.state_flags = static_cast<std::uint16_t>(extra | (k->response ? state_flags::kResponse : 0));
    h.error_code = rng() % 4 == 0 ? u32(rng) : 0;
  } else {
    static constexpr CommandId kCommands[] = {
        CommandId::kReadDeviceInfo, CommandId::kRead,  CommandId::kWrite,
        CommandId::kReadState,      CommandId::kWriteControl, CommandId::kAddDeviceNotification,
        CommandId::kDeleteDeviceNotification, CommandId::kReadWrite};
    h.command = kCommands[rng() % std::size(kCommands)];
    h.state_flags = static_cast<std::uint16_t>(extra | state_flags::kResponse);
    h.error_code = u32(rng) | 1u;
  }
  h.payload_length = static_cast<std::uint32_t>(encode_payload(f.payload).size());
  return f;
}

}  // namespace adsbench::testing
