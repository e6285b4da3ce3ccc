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

#include "adsbench/ams/codec.hpp"

#include <algorithm>
#include <string>

#include <fmt/format.h>

namespace adsbench::ams {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::size_t kDeviceNameSize = 16;
constexpr std::size_t kAddNotificationReserved = 16;

void put_address(ByteWriter& w, const Address& a) {
  w.put_bytes(a.net_id.octets);
  w.put(a.port);
}

Address get_address(ByteReader& r) {
  Address a;
  auto octets = r.get_span(6);
  std::copy(octets.begin(), octets.end(), a.net_id.octets.begin());
  a.port = r.get<std::uint16_t>();
  return a;
}

void put_sized(ByteWriter& w, const Bytes& data) {
  w.put(static_cast<std::uint32_t>(data.size()));
  w.put_bytes(data);
}

Bytes get_sized(ByteReader& r) {
  const auto n = r.get<std::uint32_t>();
  return r.get_bytes(n);
}

void encode_payload_into(const Payload& payload, ByteWriter& w) {
  std::visit(
      Overloaded{
          [](const ReadDeviceInfoRequest&) {},
          [&](const ReadDeviceInfoResponse& p) {
            if (p.device_name.size() > kDeviceNameSize) {
              throw EncodeError("device name longer than 16 bytes");
            }
            w.put(p.result);
            w.put(p.major);
            w.put(p.minor);
            w.put(p.build);
            w.put_bytes({reinterpret_cast<const std::uint8_t*>(p.device_name.data()),
                         p.device_name.size()});
            w.put_zeros(kDeviceNameSize - p.device_name.size());
          },
          [&](const ReadRequest& p) {
            w.put(p.index_group);
            w.put(p.index_offset);
            w.put(p.read_length);
          },
          [&](const ReadResponse& p) {
            w.put(p.result);
            put_sized(w, p.data);
          },
          [&](const WriteRequest& p) {
            w.put(p.index_group);
            w.put(p.index_offset);
            put_sized(w, p.data);
          },
          [&](const WriteResponse& p) { w.put(p.result); },
          [](const ReadStateRequest&) {},
          [&](const ReadStateResponse& p) {
            w.put(p.result);
            w.put(p.ads_state);
            w.put(p.device_state);
          },
          [&](const WriteControlRequest& p) {
            w.put(p.ads_state);
            w.put(p.device_state);
            put_sized(w, p.data);
          },
          [&](const WriteControlResponse& p) { w.put(p.result); },
          [&](const AddNotificationRequest& p) {
            w.put(p.index_group);
            w.put(p.index_offset);
            w.put(p.attrib.length);
            w.put(static_cast<std::uint32_t>(p.attrib.trans_mode));
            w.put(p.attrib.max_delay);
            w.put(p.attrib.cycle_time);
            w.put_zeros(kAddNotificationReserved);
          },
          [&](const AddNotificationResponse& p) {
            w.put(p.result);
            w.put(p.handle);
          },
          [&](const DeleteNotificationRequest& p) { w.put(p.handle); },
          [&](const DeleteNotificationResponse& p) { w.put(p.result); },
          [&](const DeviceNotification& p) { encode_notification_stream(p.stream, w); },
          [&](const ReadWriteRequest& p) {
            w.put(p.index_group);
            w.put(p.index_offset);
            w.put(p.read_length);
            put_sized(w, p.write_data);
          },
          [&](const ReadWriteResponse& p) {
            w.put(p.result);
            put_sized(w, p.data);
          },
          [](const AmsErrorResponse&) {},
      },
      payload);
}

Payload decode_payload(CommandId command, bool response, std::uint32_t error_code,
                       std::span<const std::uint8_t> bytes) {
  if (response && error_code != 0 && bytes.empty()) return AmsErrorResponse{};

  ByteReader r{bytes, fmt::format("{} {}", command_name(command),
                                  response ? "response" : "request")};
  Payload out;
  switch (command) {
    case CommandId::kReadDeviceInfo:
      if (!response) {
        out = ReadDeviceInfoRequest{};
      } else {
        ReadDeviceInfoResponse p;
        p.result = r.get<std::uint32_t>();
        p.major = r.get<std::uint8_t>();
        p.minor = r.get<std::uint8_t>();
        p.build = r.get<std::uint16_t>();
        auto name = r.get_span(kDeviceNameSize);
        auto end = std::find(name.begin(), name.end(), std::uint8_t{0});
        p.device_name.assign(name.begin(), end);
        out = std::move(p);
      }
      break;
    case CommandId::kRead:
      if (!response) {
        ReadRequest p;
        p.index_group = r.get<std::uint32_t>();
        p.index_offset = r.get<std::uint32_t>();
        p.read_length = r.get<std::uint32_t>();
        out = p;
      } else {
        ReadResponse p;
        p.result = r.get<std::uint32_t>();
        p.data = get_sized(r);
        out = std::move(p);
      }
      break;
    case CommandId::kWrite:
      if (!response) {
        WriteRequest p;
        p.index_group = r.get<std::uint32_t>();
        p.index_offset = r.get<std::uint32_t>();
        p.data = get_sized(r);
        out = std::move(p);
      } else {
        out = WriteResponse{r.get<std::uint32_t>()};
      }
      break;
    case CommandId::kReadState:
      if (!response) {
        out = ReadStateRequest{};
      } else {
        ReadStateResponse p;
        p.result = r.get<std::uint32_t>();
        p.ads_state = r.get<std::uint16_t>();
        p.device_state = r.get<std::uint16_t>();
        out = p;
      }
      break;
    case CommandId::kWriteControl:
      if (!response) {
        WriteControlRequest p;
        p.ads_state = r.get<std::uint16_t>();
        p.device_state = r.get<std::uint16_t>();
        p.data = get_sized(r);
        out = std::move(p);
      } else {
        out = WriteControlResponse{r.get<std::uint32_t>()};
      }
      break;
    case CommandId::kAddDeviceNotification:
      if (!response) {
        AddNotificationRequest p;
        p.index_group = r.get<std::uint32_t>();
        p.index_offset = r.get<std::uint32_t>();
        p.attrib.length = r.get<std::uint32_t>();
        p.attrib.trans_mode = static_cast<TransMode>(r.get<std::uint32_t>());
        p.attrib.max_delay = r.get<std::uint32_t>();
        p.attrib.cycle_time = r.get<std::uint32_t>();
        r.skip(kAddNotificationReserved);
        out = p;
      } else {
        AddNotificationResponse p;
        p.result = r.get<std::uint32_t>();
        p.handle = r.get<std::uint32_t>();
        out = p;
      }
      break;
    case CommandId::kDeleteDeviceNotification:
      if (!response) {
        out = DeleteNotificationRequest{r.get<std::uint32_t>()};
      } else {
        out = DeleteNotificationResponse{r.get<std::uint32_t>()};
      }
      break;
    case CommandId::kDeviceNotification:
      if (response) throw ProtocolError("DeviceNotification frames are never responses");
      return DeviceNotification{decode_notification_stream(bytes)};
    case CommandId::kReadWrite:
      if (!response) {
        ReadWriteRequest p;
        p.index_group = r.get<std::uint32_t>();
        p.index_offset = r.get<std::uint32_t>();
        p.read_length = r.get<std::uint32_t>();
        p.write_data = get_sized(r);
        out = std::move(p);
      } else {
        ReadWriteResponse p;
        p.result = r.get<std::uint32_t>();
        p.data = get_sized(r);
        out = std::move(p);
      }
      break;
  }
  r.expect_end();
  return out;
}

}  // namespace

std::optional<PayloadKind> payload_kind(const Payload& payload) {
  return std::visit(
      Overloaded{
          [](const ReadDeviceInfoRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kReadDeviceInfo, false};
          },
          [](const ReadDeviceInfoResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kReadDeviceInfo, true};
          },
          [](const ReadRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kRead, false};
          },
          [](const ReadResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kRead, true};
          },
          [](const WriteRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kWrite, false};
          },
          [](const WriteResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kWrite, true};
          },
          [](const ReadStateRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kReadState, false};
          },
          [](const ReadStateResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kReadState, true};
          },
          [](const WriteControlRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kWriteControl, false};
          },
          [](const WriteControlResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kWriteControl, true};
          },
          [](const AddNotificationRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kAddDeviceNotification, false};
          },
          [](const AddNotificationResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kAddDeviceNotification, true};
          },
          [](const DeleteNotificationRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kDeleteDeviceNotification, false};
          },
          [](const DeleteNotificationResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kDeleteDeviceNotification, true};
          },
          [](const DeviceNotification&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kDeviceNotification, false};
          },
          [](const ReadWriteRequest&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kReadWrite, false};
          },
          [](const ReadWriteResponse&) -> std::optional<PayloadKind> {
            return PayloadKind{CommandId::kReadWrite, true};
          },
          [](const AmsErrorResponse&) -> std::optional<PayloadKind> { return std::nullopt; },
      },
      payload);
}

Bytes encode_payload(const Payload& payload) {
  Bytes out;
  ByteWriter w{out};
  encode_payload_into(payload, w);
  return out;
}

void encode_frame_into(const Header& header, const Payload& payload, Bytes& out) {
  if (auto kind = payload_kind(payload)) {
    if (kind->command != header.command) {
      throw EncodeError(fmt::format("header command {} does not match {} payload",
                                    command_name(header.command), command_name(kind->command)));
    }
    if (kind->response != header.is_response()) {
      throw EncodeError(fmt::format("{} payload is a {} but the header response flag is {}",
                                    command_name(kind->command),
                                    kind->response ? "response" : "request",
                                    header.is_response() ? "set" : "clear"));
    }
  } else if (!header.is_response() || header.error_code == 0) {
    throw EncodeError("an empty error payload requires a response header with an error code");
  }

  const std::size_t start = out.size();
  const std::size_t want = start + kAmsTcpHeaderSize + kAmsHeaderSize + 64;
  if (out.capacity() < want) out.reserve(std::max(want, 2 * out.capacity()));
  ByteWriter w{out};
  w.put(std::uint16_t{0});
  w.put(std::uint32_t{0});  // AMS/TCP length, patched below
  put_address(w, header.target);
  put_address(w, header.source);
  w.put(static_cast<std::uint16_t>(header.command));
  w.put(header.state_flags);
  const std::size_t length_pos = w.size();
  w.put(std::uint32_t{0});  // payload length, patched below
  w.put(header.error_code);
  w.put(header.invoke_id);
  const std::size_t payload_start = w.size();
  encode_payload_into(payload, w);

  const auto payload_size = w.size() - payload_start;
  if (kAmsTcpHeaderSize + kAmsHeaderSize + payload_size > kMaxFrameSize) {
    out.resize(start);
    throw EncodeError("frame exceeds maximum frame size");
  }
  w.patch_u32(start + 2, static_cast<std::uint32_t>(kAmsHeaderSize + payload_size));
  w.patch_u32(length_pos, static_cast<std::uint32_t>(payload_size));
}

Bytes encode_frame(const Header& header, const Payload& payload) {
  Bytes out;
  encode_frame_into(header, payload, out);
  return out;
}

DecodeResult decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kAmsTcpHeaderSize) {
    return Incomplete{kAmsTcpHeaderSize - bytes.size()};
  }
  ByteReader tcp{bytes.first(kAmsTcpHeaderSize), "AMS/TCP header"};
  const auto reserved = tcp.get<std::uint16_t>();
  const auto length = tcp.get<std::uint32_t>();
  if (reserved != 0) {
    throw ProtocolError(fmt::format("AMS/TCP reserved field is 0x{:04x}, expected 0", reserved));
  }
  if (length < kAmsHeaderSize) {
    throw ProtocolError(fmt::format("AMS/TCP length {} is shorter than the AMS header", length));
  }
  if (length > kMaxFrameSize) {
    throw ProtocolError(fmt::format("AMS/TCP length {} exceeds the frame limit", length));
  }
  const std::size_t total = kAmsTcpHeaderSize + length;
  if (bytes.size() < total) return Incomplete{total - bytes.size()};

  ByteReader r{bytes.subspan(kAmsTcpHeaderSize, length), "AMS header"};
  Header h;
  h.target = get_address(r);
  h.source = get_address(r);
  const auto raw_command = r.get<std::uint16_t>();
  h.state_flags = r.get<std::uint16_t>();
  h.payload_length = r.get<std::uint32_t>();
  h.error_code = r.get<std::uint32_t>();
  h.invoke_id = r.get<std::uint32_t>();
  if (!is_known_command(raw_command)) {
    throw ProtocolError(fmt::format("unknown ADS command id {}", raw_command));
  }
  h.command = static_cast<CommandId>(raw_command);
  if (h.payload_length != length - kAmsHeaderSize) {
    throw ProtocolError(fmt::format("AMS payload length {} disagrees with AMS/TCP length {}",
                                    h.payload_length, length));
  }
  auto payload = decode_payload(h.command, h.is_response(), h.error_code,
                                r.get_span(h.payload_length));
  return Decoded{Frame{h, std::move(payload)}, total};
}

void encode_notification_stream(const NotificationStream& stream, ByteWriter& w) {
  const std::size_t length_pos = w.size();
  w.put(std::uint32_t{0});
  const std::size_t body_start = w.size();
  w.put(static_cast<std::uint32_t>(stream.stamps.size()));
  for (const auto& stamp : stream.stamps) {
    w.put(stamp.timestamp);
    w.put(static_cast<std::uint32_t>(stamp.samples.size()));
    for (const auto& sample : stamp.samples) {
      w.put(sample.handle);
      put_sized(w, sample.data);
    }
  }
  w.patch_u32(length_pos, static_cast<std::uint32_t>(w.size() - body_start));
}

NotificationStream decode_notification_stream(std::span<const std::uint8_t> data) {
  ByteReader head{data, "notification stream header"};
  const auto declared = head.get<std::uint32_t>();
  if (declared != head.remaining()) {
    throw ProtocolError(fmt::format(
        "notification stream declares {} bytes but {} follow the length field", declared,
        head.remaining()));
  }
  const auto stamp_count = head.get<std::uint32_t>();
  auto body = data.subspan(head.position());

  NotificationStream stream;
  std::size_t pos = 0;
  for (std::uint32_t s = 0; s < stamp_count; ++s) {
    ByteReader stamp_reader{body.subspan(pos), fmt::format("notification stamp {}", s)};
    NotificationStamp stamp;
    stamp.timestamp = stamp_reader.get<std::uint64_t>();
    const auto sample_count = stamp_reader.get<std::uint32_t>();
    pos += stamp_reader.position();
    // Each sample needs at least 8 bytes; refuse absurd counts before reserving.
    if (sample_count > (body.size() - pos) / 8) {
      throw ProtocolError(fmt::format("notification stamp {}: {} samples cannot fit in {} bytes",
                                      s, sample_count, body.size() - pos));
    }
    stamp.samples.reserve(sample_count);
    for (std::uint32_t i = 0; i < sample_count; ++i) {
      ByteReader sample_reader{body.subspan(pos),
                               fmt::format("notification stamp {} sample {}", s, i)};
      Sample sample;
      sample.handle = sample_reader.get<std::uint32_t>();
      sample.data = get_sized(sample_reader);
      pos += sample_reader.position();
      stamp.samples.push_back(std::move(sample));
    }
    stream.stamps.push_back(std::move(stamp));
  }
  if (pos != body.size()) {
    throw ProtocolError(fmt::format("notification stream: {} trailing bytes after {} stamps",
                                    body.size() - pos, stamp_count));
  }
  return stream;
}

void FrameSplitter::append(std::span<const std::uint8_t> bytes) {
  if (read_pos_ > 0 && read_pos_ == buffer_.size()) {
    buffer_.clear();
    read_pos_ = 0;
  } else if (read_pos_ > 64 * 1024) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(read_pos_));
    read_pos_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameSplitter::next() {
  auto view = std::span<const std::uint8_t>{buffer_}.subspan(read_pos_);
  auto result = decode_frame(view);
  if (auto* decoded = std::get_if<Decoded>(&result)) {
    read_pos_ += decoded->consumed;
    return std::move(decoded->frame);
  }
  return std::nullopt;
}

}  // namespace adsbench::ams
