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

#include "adsbench/client/typed_value.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace adsbench::client {

using plc::ScalarType;

namespace {

std::uint64_t load_le(std::span<const std::uint8_t> bytes) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void store_le(std::span<std::uint8_t> bytes, std::uint64_t v) {
  for (auto& b : bytes) {
    b = static_cast<std::uint8_t>(v & 0xFF);
    v >>= 8;
  }
}

std::int64_t sign_extend(std::uint64_t v, std::uint32_t size) {
  if (size == 8) return static_cast<std::int64_t>(v);
  const unsigned bits = size * 8;
  const std::uint64_t sign = std::uint64_t{1} << (bits - 1);
  return static_cast<std::int64_t>((v ^ sign) - sign);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(fmt::format("cannot parse '{}' as a number", text));
  }
  return v;
}

ScalarValue parse_element(ScalarType t, std::string_view text) {
  text = trim(text);
  switch (t) {
    case ScalarType::kBool:
      if (text == "true" || text == "TRUE" || text == "1") return true;
      if (text == "false" || text == "FALSE" || text == "0") return false;
      throw std::invalid_argument(fmt::format("cannot parse '{}' as BOOL", text));
    case ScalarType::kReal: return parse_number<float>(text);
    case ScalarType::kLReal: return parse_number<double>(text);
    default:
      if (plc::is_signed(t)) return parse_number<std::int64_t>(text);
      return parse_number<std::uint64_t>(text);
  }
}

}  // namespace

TypedValue::TypedValue(plc::PlcType type, ams::Bytes raw) : type_{type}, raw_{std::move(raw)} {
  if (raw_.size() != type_.size()) {
    throw std::invalid_argument(fmt::format("{} needs {} bytes, got {}", type_.to_string(),
                                            type_.size(), raw_.size()));
  }
}

TypedValue TypedValue::zero(plc::PlcType type) { return TypedValue{type, ams::Bytes(type.size())}; }

TypedValue TypedValue::from_elements(plc::PlcType type, std::span<const ScalarValue> values) {
  if (values.size() != type.count()) {
    throw std::invalid_argument(fmt::format("{} needs {} elements, got {}", type.to_string(),
                                            type.count(), values.size()));
  }
  auto v = zero(type);
  for (std::size_t i = 0; i < values.size(); ++i) v.set_element(i, values[i]);
  return v;
}

TypedValue TypedValue::scalar(ScalarType type, ScalarValue value) {
  const ScalarValue values[] = {value};
  return from_elements(plc::PlcType::scalar(type), values);
}

TypedValue TypedValue::parse(plc::PlcType type, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
  }
  std::vector<ScalarValue> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    values.push_back(parse_element(
        type.element, text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return from_elements(type, values);
}

ScalarValue TypedValue::element(std::size_t index) const {
  if (index >= count()) throw std::out_of_range("element index out of range");
  const auto size = plc::scalar_size(type_.element);
  const auto bytes = std::span<const std::uint8_t>{raw_}.subspan(index * size, size);
  const auto bits = load_le(bytes);
  switch (type_.element) {
    case ScalarType::kBool: return bits != 0;
    case ScalarType::kReal: return std::bit_cast<float>(static_cast<std::uint32_t>(bits));
    case ScalarType::kLReal: return std::bit_cast<double>(bits);
    default:
      if (plc::is_signed(type_.element)) return sign_extend(bits, size);
      return bits;
  }
}

std::vector<ScalarValue> TypedValue::elements() const {
  std::vector<ScalarValue> out;
  out.reserve(count());
  for (std::size_t i = 0; i < count(); ++i) out.push_back(element(i));
  return out;
}

void TypedValue::set_element(std::size_t index, ScalarValue value) {
  if (index >= count()) throw std::out_of_range("element index out of range");
  const auto t = type_.element;
  const auto size = plc::scalar_size(t);
  auto bytes = std::span<std::uint8_t>{raw_}.subspan(index * size, size);

  if (t == ScalarType::kReal || t == ScalarType::kLReal) {
    const double d = std::visit([](auto v) { return static_cast<double>(v); }, value);
    if (t == ScalarType::kReal) {
      // A float element is stored as-is so NaN payloads survive.
      const float f = std::holds_alternative<float>(value) ? std::get<float>(value)
                                                           : static_cast<float>(d);
      store_le(bytes, std::bit_cast<std::uint32_t>(f));
    } else {
      store_le(bytes, std::bit_cast<std::uint64_t>(d));
    }
    return;
  }
  if (t == ScalarType::kBool) {
    const bool b = std::visit([](auto v) { return v != decltype(v){}; }, value);
    bytes[0] = b ? 1 : 0;
    return;
  }

  const unsigned bits = size * 8;
  if (plc::is_signed(t)) {
    std::int64_t v = 0;
    if (const auto* u = std::get_if<std::uint64_t>(&value)) {
      if (*u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw std::out_of_range(fmt::format("{} does not fit {}", *u, plc::keyword(t)));
      }
      v = static_cast<std::int64_t>(*u);
    } else if (std::holds_alternative<float>(value) || std::holds_alternative<double>(value)) {
      v = static_cast<std::int64_t>(std::visit([](auto x) { return static_cast<double>(x); }, value));
    } else {
      v = std::visit([](auto x) { return static_cast<std::int64_t>(x); }, value);
    }
    if (bits < 64) {
      const std::int64_t lo = -(std::int64_t{1} << (bits - 1));
      const std::int64_t hi = (std::int64_t{1} << (bits - 1)) - 1;
      if (v < lo || v > hi) {
        throw std::out_of_range(fmt::format("{} does not fit {}", v, plc::keyword(t)));
      }
    }
    store_le(bytes, static_cast<std::uint64_t>(v));
  } else {
    std::uint64_t v = 0;
    if (const auto* s = std::get_if<std::int64_t>(&value)) {
      if (*s < 0) throw std::out_of_range(fmt::format("{} does not fit {}", *s, plc::keyword(t)));
      v = static_cast<std::uint64_t>(*s);
    } else {
      v = std::visit([](auto x) { return static_cast<std::uint64_t>(x); }, value);
    }
    if (bits < 64 && v > (std::uint64_t{1} << bits) - 1) {
      throw std::out_of_range(fmt::format("{} does not fit {}", v, plc::keyword(t)));
    }
    store_le(bytes, v);
  }
}

std::string TypedValue::to_string() const {
  auto one = [](const ScalarValue& v) {
    return std::visit(
        [](auto x) -> std::string {
          if constexpr (std::is_same_v<decltype(x), bool>) {
            return x ? "true" : "false";
          } else {
            return fmt::format("{}", x);
          }
        },
        v);
  };
  if (!type_.is_array()) return one(element(0));
  std::string s = "[";
  for (std::size_t i = 0; i < count(); ++i) {
    if (i != 0) s += ", ";
    s += one(element(i));
  }
  return s + "]";
}

}  // namespace adsbench::client
