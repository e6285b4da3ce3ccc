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

#include "adsbench/plc/plc_type.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace adsbench::plc {
namespace {

struct TypeNames {
  ScalarType type;
  std::string_view keyword;
  std::string_view display;
};

constexpr std::array<TypeNames, 14> kNames{{
    {ScalarType::kBool, "BOOL", "Bool"},
    {ScalarType::kByte, "BYTE", "Byte"},
    {ScalarType::kWord, "WORD", "Word"},
    {ScalarType::kDWord, "DWORD", "DWord"},
    {ScalarType::kSInt, "SINT", "SInt"},
    {ScalarType::kUSInt, "USINT", "USInt"},
    {ScalarType::kInt, "INT", "Int"},
    {ScalarType::kUInt, "UINT", "UInt"},
    {ScalarType::kDInt, "DINT", "DInt"},
    {ScalarType::kUDInt, "UDINT", "UDInt"},
    {ScalarType::kLInt, "LINT", "LInt"},
    {ScalarType::kULInt, "ULINT", "ULInt"},
    {ScalarType::kReal, "REAL", "Real"},
    {ScalarType::kLReal, "LREAL", "LReal"},
}};

std::string upper(std::string_view s) {
  std::string out{s};
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<std::uint32_t> parse_u32(std::string_view s) {
  s = trim(s);
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view keyword(ScalarType t) {
  return kNames[static_cast<std::size_t>(t)].keyword;
}

std::string_view display_name(ScalarType t) {
  return kNames[static_cast<std::size_t>(t)].display;
}

std::optional<ScalarType> parse_scalar_type(std::string_view kw) {
  const std::string u = upper(trim(kw));
  for (const auto& n : kNames) {
    if (n.keyword == u) return n.type;
  }
  return std::nullopt;
}

std::string PlcType::to_string() const {
  std::string s{keyword(element)};
  if (is_array()) s += "[" + std::to_string(array_length) + "]";
  return s;
}

std::string PlcType::display() const {
  std::string s{display_name(element)};
  if (is_array()) s += "[" + std::to_string(array_length) + "]";
  return s;
}

std::optional<PlcType> parse_plc_type(std::string_view text) {
  text = trim(text);
  const std::string u = upper(text);

  // ARRAY[lo..hi] OF T
  if (u.rfind("ARRAY", 0) == 0) {
    auto open = u.find('[');
    auto dots = u.find("..");
    auto close = u.find(']');
    auto of = u.find(" OF ");
    if (open == std::string::npos || dots == std::string::npos || close == std::string::npos ||
        of == std::string::npos || !(open < dots && dots < close && close < of)) {
      return std::nullopt;
    }
    auto lo = parse_u32(std::string_view{u}.substr(open + 1, dots - open - 1));
    auto hi = parse_u32(std::string_view{u}.substr(dots + 2, close - dots - 2));
    auto elem = parse_scalar_type(std::string_view{u}.substr(of + 4));
    if (!lo || !hi || !elem || *hi < *lo) return std::nullopt;
    return PlcType::array(*elem, *hi - *lo + 1);
  }

  // T[n]
  if (auto open = u.find('['); open != std::string::npos) {
    if (u.back() != ']') return std::nullopt;
    auto elem = parse_scalar_type(std::string_view{u}.substr(0, open));
    auto n = parse_u32(std::string_view{u}.substr(open + 1, u.size() - open - 2));
    if (!elem || !n || *n == 0) return std::nullopt;
    return PlcType::array(*elem, *n);
  }

  if (auto elem = parse_scalar_type(u)) return PlcType::scalar(*elem);
  return std::nullopt;
}

}  // namespace adsbench::plc
