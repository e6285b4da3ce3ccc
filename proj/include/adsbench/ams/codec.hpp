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

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>

#include "adsbench/ams/byte_io.hpp"
#include "adsbench/ams/types.hpp"

namespace adsbench::ams {

class EncodeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Command id and direction implied by a payload alternative.
/// AmsErrorResponse has no command of its own and yields nullopt.
struct PayloadKind {
  CommandId command;
  bool response;
};
std::optional<PayloadKind> payload_kind(const Payload& payload);

/// Serializes `payload` alone (no headers).
Bytes encode_payload(const Payload& payload);

/// AMS/TCP header + AMS header + payload. The header's payload_length is
/// recomputed from the payload. Throws EncodeError when the header command or
/// response flag disagrees with the payload alternative.
Bytes encode_frame(const Header& header, const Payload& payload);
inline Bytes encode_frame(const Frame& frame) { return encode_frame(frame.header, frame.payload); }

/// Appends the encoded frame to `out` instead of allocating.
void encode_frame_into(const Header& header, const Payload& payload, Bytes& out);

struct Decoded {
  Frame frame;
  std::size_t consumed = 0;
};

/// Not an error: the buffer holds a prefix of a frame.
struct Incomplete {
  std::size_t need = 0;
};

using DecodeResult = std::variant<Decoded, Incomplete>;

/// Frames larger than this are rejected as corrupt.
inline constexpr std::size_t kMaxFrameSize = 16u * 1024u * 1024u;

/// Decodes the first frame in `bytes`. Throws ProtocolError on corruption.
DecodeResult decode_frame(std::span<const std::uint8_t> bytes);

/// Parses a DeviceNotification payload.
NotificationStream decode_notification_stream(std::span<const std::uint8_t> data);
void encode_notification_stream(const NotificationStream& stream, ByteWriter& out);

/// Splits a TCP byte stream into frames.
class FrameSplitter {
 public:
  void append(std::span<const std::uint8_t> bytes);
  /// Next complete frame, or nullopt if more bytes are needed.
  /// Throws ProtocolError on corrupt input; the splitter is unusable afterwards.
  std::optional<Frame> next();
  std::size_t buffered() const { return buffer_.size() - read_pos_; }

 private:
  Bytes buffer_;
  std::size_t read_pos_ = 0;
};

}  // namespace adsbench::ams
