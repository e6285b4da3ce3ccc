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

#include "adsbench/plc/symbol_config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "adsbench/ams/types.hpp"

namespace adsbench::plc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<ams::Bytes> parse_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  ams::Bytes out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    std::uint8_t b = 0;
    auto [ptr, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, b, 16);
    if (ec != std::errc{} || ptr != hex.data() + i + 2) return std::nullopt;
    out.push_back(b);
  }
  return out;
}

const std::string& op_symbol(const ProgramOp& op) {
  return std::visit([](const auto& o) -> const std::string& { return o.symbol; }, op);
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : fmt::format("line {}: {}", line, message)),
      line_{line} {}

void PlcConfig::add_symbol(std::string name, PlcType type) {
  if (name.empty()) throw ConfigError(0, "empty symbol name");
  if (by_name_.contains(name)) throw ConfigError(0, fmt::format("duplicate symbol '{}'", name));
  SymbolInfo info{name, ams::index_group::kPlcDataArea, next_offset_, type, type.size()};
  next_offset_ += info.size;
  by_name_.emplace(std::move(name), symbols_.size());
  symbols_.push_back(std::move(info));
}

void PlcConfig::set_cycle_time(Ticks cycle) {
  if (cycle < kMinCycleTime) {
    throw ConfigError(0, fmt::format("cycle time {} ns is below the 50 us minimum",
                                     cycle.count() * 100));
  }
  task_.cycle_time = cycle;
}

void PlcConfig::add_op(ProgramOp op) {
  const auto& name = op_symbol(op);
  const auto* sym = find(name);
  if (sym == nullptr) throw ConfigError(0, fmt::format("unknown symbol '{}'", name));
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Increment>) {
          if (sym->type.is_array() || !is_integer(sym->type.element) ||
              sym->type.element == ScalarType::kBool) {
            throw ConfigError(0, fmt::format("increment needs an integer scalar, '{}' is {}",
                                             name, sym->type.to_string()));
          }
        } else if constexpr (std::is_same_v<T, op::Toggle>) {
          if (sym->type.is_array() || !is_integer(sym->type.element)) {
            throw ConfigError(0, fmt::format("toggle needs a BOOL or integer scalar, '{}' is {}",
                                             name, sym->type.to_string()));
          }
        } else {
          if (o.value.size() != sym->size) {
            throw ConfigError(0, fmt::format("set value for '{}' has {} bytes, symbol has {}",
                                             name, o.value.size(), sym->size));
          }
        }
      },
      op);
  task_.program.push_back(std::move(op));
}

const SymbolInfo* PlcConfig::find(std::string_view name) const {
  auto idx = index_of(name);
  return idx ? &symbols_[*idx] : nullptr;
}

std::optional<std::size_t> PlcConfig::index_of(std::string_view name) const {
  auto it = by_name_.find(std::string{name});
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<Ticks> parse_duration(std::string_view text) {
  text = trim(text);
  std::size_t digits = 0;
  while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) {
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + digits, value);
  if (ec != std::errc{}) return std::nullopt;
  const auto unit = text.substr(digits);
  using namespace std::chrono;
  if (unit == "ns") {
    if (value % 100 != 0) return std::nullopt;
    return Ticks{value / 100};
  }
  if (unit.empty() || unit == "us") return duration_cast<Ticks>(microseconds{value});
  if (unit == "ms") return duration_cast<Ticks>(milliseconds{value});
  if (unit == "s") return duration_cast<Ticks>(seconds{value});
  return std::nullopt;
}

PlcConfig load_symbol_config(std::string_view document) {
  enum class Section { kNone, kSymbols, kTask };
  PlcConfig config;
  Section section = Section::kNone;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= document.size()) {
    const auto eol = document.find('\n', pos);
    auto line = document.substr(pos, eol == std::string_view::npos ? document.npos : eol - pos);
    pos = eol == std::string_view::npos ? document.size() + 1 : eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    try {
      if (line.front() == '[') {
        if (line == "[symbols]") {
          section = Section::kSymbols;
        } else if (line == "[task]") {
          section = Section::kTask;
        } else {
          throw ConfigError(0, fmt::format("unknown section {}", line));
        }
        continue;
      }

      auto tokens = split_ws(line);
      switch (section) {
        case Section::kNone:
          throw ConfigError(0, "entry outside of a [symbols] or [task] section");
        case Section::kSymbols: {
          if (tokens.size() < 2) throw ConfigError(0, "expected '<name> <type>'");
          // Type may contain spaces ("ARRAY[0..2] OF LREAL").
          auto type_text = trim(line.substr(tokens[0].size()));
          auto type = parse_plc_type(type_text);
          if (!type) throw ConfigError(0, fmt::format("unknown type '{}'", type_text));
          config.add_symbol(std::string{tokens[0]}, *type);
          break;
        }
        case Section::kTask: {
          const auto key = tokens[0];
          if (key == "cycle_time" || key == "cycle_time_us") {
            if (tokens.size() != 2) throw ConfigError(0, "expected 'cycle_time <duration>'");
            auto d = parse_duration(tokens[1]);
            if (!d) throw ConfigError(0, fmt::format("bad duration '{}'", tokens[1]));
            config.set_cycle_time(*d);
          } else if (key == "increment" || key == "toggle") {
            if (tokens.size() != 2) throw ConfigError(0, fmt::format("expected '{} <symbol>'", key));
            if (key == "increment") {
              config.add_op(op::Increment{std::string{tokens[1]}});
            } else {
              config.add_op(op::Toggle{std::string{tokens[1]}});
            }
          } else if (key == "set") {
            if (tokens.size() != 3) throw ConfigError(0, "expected 'set <symbol> <hex bytes>'");
            auto bytes = parse_hex(tokens[2]);
            if (!bytes) throw ConfigError(0, fmt::format("bad hex value '{}'", tokens[2]));
            config.add_op(op::Set{std::string{tokens[1]}, std::move(*bytes)});
          } else {
            throw ConfigError(0, fmt::format("unknown task entry '{}'", key));
          }
          break;
        }
      }
    } catch (const ConfigError& e) {
      if (e.line() != 0) throw;
      throw ConfigError(line_no, e.what());
    }
  }
  return config;
}

PlcConfig load_symbol_config_file(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw ConfigError(0, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_symbol_config(ss.str());
}

}  // namespace adsbench::plc
