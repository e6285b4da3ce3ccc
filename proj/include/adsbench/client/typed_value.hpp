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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adsbench/ams/byte_io.hpp"
#include "adsbench/plc/plc_type.hpp"

namespace adsbench::client {

/// One decoded element: BOOL -> bool, signed integers -> int64, unsigned
/// integers -> uint64, REAL -> float, LREAL -> double.
using ScalarValue = std::variant<bool, std::int64_t, std::uint64_t, float, double>;

/// Raw little-endian bytes tagged with their PLC type.
class TypedValue {
 public:
  /// Throws std::invalid_argument when raw.size() != type.size().
  TypedValue(plc::PlcType type, ams::Bytes raw);

  static TypedValue zero(plc::PlcType type);
  /// Throws std::out_of_range when a value does not fit the element type.
  static TypedValue from_elements(plc::PlcType type, std::span<const ScalarValue> values);
  static TypedValue scalar(plc::ScalarType type, ScalarValue value);
  /// Parses "3.5", "-5", "true" or a comma separated list for arrays.
  static TypedValue parse(plc::PlcType type, std::string_view text);

  const plc::PlcType& type() const { return type_; }
  const ams::Bytes& raw() const { return raw_; }
  std::size_t count() const { return type_.count(); }

  ScalarValue element(std::size_t index) const;
  std::vector<ScalarValue> elements() const;
  void set_element(std::size_t index, ScalarValue value);

  /// Element converted to an arithmetic type.
  template <typename T>
  T as(std::size_t index = 0) const {
    return std::visit([](auto v) { return static_cast<T>(v); }, element(index));
  }

  /// "3.5" for scalars, "[1, 2, 3]" for arrays.
  std::string to_string() const;

  friend bool operator==(const TypedValue&, const TypedValue&) = default;

 private:
  plc::PlcType type_;
  ams::Bytes raw_;
};

}  // namespace adsbench::client
