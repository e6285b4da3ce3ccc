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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace adsbench::ams {

using Bytes = std::vector<std::uint8_t>;

/// Raised when a buffer is structurally invalid (as opposed to merely incomplete).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Appends little-endian integers to a byte vector.
class ByteWriter {
 public:
  explicit ByteWriter(Bytes& out) : out_{out} {}

  template <typename T>
    requires std::is_integral_v<T>
  void put(T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    if constexpr (std::endian::native == std::endian::little) {
      const auto pos = out_.size();
      out_.resize(pos + sizeof(T));
      std::memcpy(out_.data() + pos, &u, sizeof(T));
    } else {
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        out_.push_back(static_cast<std::uint8_t>(u & 0xFFu));
        if constexpr (sizeof(T) > 1) u = static_cast<U>(u >> 8);
      }
    }
  }

  void put_bytes(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }

  void put_zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }

  /// Overwrites a u32 previously written at `pos`.
  void patch_u32(std::size_t pos, std::uint32_t value) {
    for (std::size_t i = 0; i < 4; ++i) {
      out_[pos + i] = static_cast<std::uint8_t>((value >> (8 * i)) & 0xFFu);
    }
  }

  std::size_t size() const { return out_.size(); }

 private:
  Bytes& out_;
};

/// Bounds-checked little-endian reader over a borrowed span.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data, std::string context = "buffer")
      : data_{data}, context_{std::move(context)} {}

  template <typename T>
    requires std::is_integral_v<T>
  T get() {
    require(sizeof(T));
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u = static_cast<U>(u | (static_cast<U>(data_[pos_ + i]) << (8 * i)));
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  std::span<const std::uint8_t> get_span(std::size_t n) {
    require(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  Bytes get_bytes(std::size_t n) {
    auto s = get_span(n);
    return Bytes(s.begin(), s.end());
  }

  void skip(std::size_t n) {
    require(n);
    pos_ += n;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  void expect_end() const {
    if (remaining() != 0) {
      throw ProtocolError(context_ + ": " + std::to_string(remaining()) +
                          " trailing bytes after declared content");
    }
  }

 private:
  void require(std::size_t n) const {
    if (n > remaining()) {
      throw ProtocolError(context_ + ": declared length exceeds available bytes (need " +
                          std::to_string(n) + ", have " + std::to_string(remaining()) + ")");
    }
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::string context_;
};

}  // namespace adsbench::ams
