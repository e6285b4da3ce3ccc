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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace adsbench::plc {

/// Elementary IEC 61131-3 types served by the simulator.
enum class ScalarType : std::uint8_t {
  kBool,
  kByte,
  kWord,
  kDWord,
  kSInt,
  kUSInt,
  kInt,
  kUInt,
  kDInt,
  kUDInt,
  kLInt,
  kULInt,
  kReal,
  kLReal,
};

inline constexpr std::array<ScalarType, 14> kAllScalarTypes{
    ScalarType::kBool, ScalarType::kByte,  ScalarType::kWord,  ScalarType::kDWord,
    ScalarType::kSInt, ScalarType::kUSInt, ScalarType::kInt,   ScalarType::kUInt,
    ScalarType::kDInt, ScalarType::kUDInt, ScalarType::kLInt,  ScalarType::kULInt,
    ScalarType::kReal, ScalarType::kLReal,
};

constexpr std::uint32_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::kBool:
    case ScalarType::kByte:
    case ScalarType::kSInt:
    case ScalarType::kUSInt: return 1;
    case ScalarType::kWord:
    case ScalarType::kInt:
    case ScalarType::kUInt: return 2;
    case ScalarType::kDWord:
    case ScalarType::kDInt:
    case ScalarType::kUDInt:
    case ScalarType::kReal: return 4;
    case ScalarType::kLInt:
    case ScalarType::kULInt:
    case ScalarType::kLReal: return 8;
  }
  return 0;
}

constexpr bool is_integer(ScalarType t) {
  return t != ScalarType::kReal && t != ScalarType::kLReal;
}

constexpr bool is_signed(ScalarType t) {
  return t == ScalarType::kSInt || t == ScalarType::kInt || t == ScalarType::kDInt ||
         t == ScalarType::kLInt;
}

/// Upper-case keyword, e.g. "LREAL".
std::string_view keyword(ScalarType t);
/// Mixed-case display name used in reports, e.g. "LReal".
std::string_view display_name(ScalarType t);
std::optional<ScalarType> parse_scalar_type(std::string_view keyword);

/// A scalar or a one-dimensional array of scalars. `array_length == 0` is a scalar.
struct PlcType {
  ScalarType element = ScalarType::kBool;
  std::uint32_t array_length = 0;

  static constexpr PlcType scalar(ScalarType t) { return {t, 0}; }
  static constexpr PlcType array(ScalarType t, std::uint32_t n) { return {t, n}; }

  constexpr bool is_array() const { return array_length != 0; }
  constexpr std::uint32_t count() const { return is_array() ? array_length : 1; }
  constexpr std::uint32_t size() const { return count() * scalar_size(element); }

  /// "LREAL" or "LREAL[3]".
  std::string to_string() const;
  /// "LReal" or "LReal[3]".
  std::string display() const;

  friend constexpr bool operator==(const PlcType&, const PlcType&) = default;
};

/// Accepts "DINT", "LREAL[3]" and "ARRAY[0..2] OF LREAL" (case-insensitive keywords).
std::optional<PlcType> parse_plc_type(std::string_view text);

}  // namespace adsbench::plc
