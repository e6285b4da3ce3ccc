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

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "adsbench/ams/byte_io.hpp"
#include "adsbench/plc/plc_type.hpp"

namespace adsbench::plc {

/// Duration in the 100 ns unit used on the wire.
using Ticks = std::chrono::duration<std::int64_t, std::ratio<1, 10'000'000>>;

/// Shortest cycle the simulator accepts.
inline constexpr Ticks kMinCycleTime = std::chrono::microseconds{50};
inline constexpr Ticks kDefaultCycleTime = std::chrono::milliseconds{10};

struct SymbolInfo {
  std::string name;
  std::uint32_t index_group = 0;
  std::uint32_t index_offset = 0;
  PlcType type;
  std::uint32_t size = 0;

  friend bool operator==(const SymbolInfo&, const SymbolInfo&) = default;
};

namespace op {
/// Wrapping (two's complement) +1 on an integer scalar.
struct Increment {
  std::string symbol;
  friend bool operator==(const Increment&, const Increment&) = default;
};
struct Set {
  std::string symbol;
  ams::Bytes value;
  friend bool operator==(const Set&, const Set&) = default;
};
/// BOOL flips between 0 and 1; other integers are bitwise inverted.
struct Toggle {
  std::string symbol;
  friend bool operator==(const Toggle&, const Toggle&) = default;
};
}  // namespace op

using ProgramOp = std::variant<op::Increment, op::Set, op::Toggle>;

struct TaskConfig {
  Ticks cycle_time = kDefaultCycleTime;
  std::vector<ProgramOp> program;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Symbol table plus the cyclic task definition.
class PlcConfig {
 public:
  /// Symbols are laid out back to back in the data area in declaration order.
  void add_symbol(std::string name, PlcType type);
  void set_cycle_time(Ticks cycle);
  /// Validates the op against the symbol table.
  void add_op(ProgramOp op);

  const std::vector<SymbolInfo>& symbols() const { return symbols_; }
  const TaskConfig& task() const { return task_; }
  const SymbolInfo* find(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Total bytes of the data area.
  std::uint32_t data_size() const { return next_offset_; }

 private:
  std::vector<SymbolInfo> symbols_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::uint32_t next_offset_ = 0;
  TaskConfig task_;
};

/// Parses the line-oriented configuration format:
///
///     # comment
///     [symbols]
///     MAIN.lrVar   LREAL
///     MAIN.lrArr   LREAL[3]
///     [task]
///     cycle_time   100us        # ns, us, ms or s
///     increment    MAIN.counter
///     set          MAIN.flag 01
///     toggle       MAIN.flag
///
/// Throws ConfigError carrying the 1-based line number.
PlcConfig load_symbol_config(std::string_view document);
PlcConfig load_symbol_config_file(const std::string& path);

/// Parses "100us", "1ms", "250000ns", "2s"; a bare number is microseconds.
std::optional<Ticks> parse_duration(std::string_view text);

}  // namespace adsbench::plc
