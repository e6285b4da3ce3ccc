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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace adsbench::bench {

inline constexpr int kReportSchemaVersion = 1;

enum class Direction { kRead, kWrite };
std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view text);

struct LatencyRow {
  std::string symbol;
  /// Display form of the PLC type, e.g. "LReal" or "LReal[3]".
  std::string type;
  Direction direction = Direction::kRead;
  std::uint64_t count = 0;
  double total_s = 0.0;
  double mean_us = 0.0;
  double p50_us = 0.0;
  double p99_us = 0.0;

  friend bool operator==(const LatencyRow&, const LatencyRow&) = default;
};

/// Split of the measured sync time. other_s is the remainder, so the parts
/// add up to total_s.
struct Attribution {
  double total_s = 0.0;
  double encode_decode_s = 0.0;
  double wire_wait_s = 0.0;
  double other_s = 0.0;

  friend bool operator==(const Attribution&, const Attribution&) = default;
};

struct NotificationCounts {
  std::uint64_t expected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t initial_count = 0;
  std::uint64_t missed = 0;
  std::uint64_t duplicated = 0;
  std::uint64_t out_of_order = 0;
  /// Streams the server discarded; absent when the server does not expose it.
  std::optional<std::uint64_t> server_dropped;
  /// Samples the client discarded because its dispatch queue was full.
  std::uint64_t client_dropped = 0;
  /// Every delivery after the initial one was exactly previous + 1.
  bool strictly_increasing = false;
  bool timed_out = false;
  std::int64_t first_value = 0;
  std::uint64_t cycle_time_us = 0;
  std::string clock;
  double elapsed_s = 0.0;

  friend bool operator==(const NotificationCounts&, const NotificationCounts&) = default;
};

struct BenchReport {
  std::string kind;  // "sync" or "notify"
  bool valid = true;
  std::string error;

  std::vector<LatencyRow> rows;
  std::optional<Attribution> attribution;
  std::uint64_t warmup_ops = 0;
  std::string write_values;
  /// Highest number of concurrently outstanding requests seen.
  std::uint64_t max_in_flight = 0;
  double cpu_s = 0.0;

  std::optional<NotificationCounts> notification;

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

enum class ReportFormat { kTable, kCsv, kJson };
std::optional<ReportFormat> parse_report_format(std::string_view text);

/// CSV header for latency rows.
inline constexpr std::string_view kCsvHeader = "type,direction,count,total_s,mean_us,p50_us,p99_us";

nlohmann::json to_json(const BenchReport& report);
/// Throws std::runtime_error on schema violations.
BenchReport report_from_json(const nlohmann::json& j);

void emit_report(const BenchReport& report, ReportFormat format, std::ostream& out);
/// "-" writes to stdout. Throws std::runtime_error if the file cannot be written.
void emit_report(const BenchReport& report, ReportFormat format, const std::string& path);

/// Nearest-rank percentile of unsorted samples; q in (0, 1]. Zero for empty input.
double percentile(std::vector<double> samples, double q);

/// User plus system CPU time of this process.
double process_cpu_seconds();

}  // namespace adsbench::bench
