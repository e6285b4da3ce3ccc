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

#include "adsbench/bench/report.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace adsbench::bench {

using nlohmann::json;

std::string_view to_string(Direction d) { return d == Direction::kRead ? "read" : "write"; }

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "read") return Direction::kRead;
  if (text == "write") return Direction::kWrite;
  return std::nullopt;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::kTable;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  return std::nullopt;
}

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) return 0.0;
  const auto n = samples.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  auto nth = samples.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(samples.begin(), nth, samples.end());
  return *nth;
}

double process_cpu_seconds() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  auto secs = [](const timeval& tv) {
    return static_cast<double>(tv.tv_sec) + static_cast<double>(tv.tv_usec) / 1e6;
  };
  return secs(ru.ru_utime) + secs(ru.ru_stime);
}

// JSON ------------------------------------------------------------------

json to_json(const BenchReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = r.kind;
  j["valid"] = r.valid;
  j["error"] = r.error;
  j["warmup_ops"] = r.warmup_ops;
  j["write_values"] = r.write_values;
  j["max_in_flight"] = r.max_in_flight;
  j["cpu_s"] = r.cpu_s;
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back({{"symbol", row.symbol},
                         {"type", row.type},
                         {"direction", to_string(row.direction)},
                         {"count", row.count},
                         {"total_s", row.total_s},
                         {"mean_us", row.mean_us},
                         {"p50_us", row.p50_us},
                         {"p99_us", row.p99_us}});
  }
  if (r.attribution) {
    const auto& a = *r.attribution;
    j["attribution"] = {{"total_s", a.total_s},
                        {"encode_decode_s", a.encode_decode_s},
                        {"wire_wait_s", a.wire_wait_s},
                        {"other_s", a.other_s}};
  } else {
    j["attribution"] = nullptr;
  }
  if (r.notification) {
    const auto& n = *r.notification;
    j["notification"] = {{"expected", n.expected},
                         {"delivered", n.delivered},
                         {"initial_count", n.initial_count},
                         {"missed", n.missed},
                         {"duplicated", n.duplicated},
                         {"out_of_order", n.out_of_order},
                         {"server_dropped", n.server_dropped ? json(*n.server_dropped) : json()},
                         {"client_dropped", n.client_dropped},
                         {"strictly_increasing", n.strictly_increasing},
                         {"timed_out", n.timed_out},
                         {"first_value", n.first_value},
                         {"cycle_time_us", n.cycle_time_us},
                         {"clock", n.clock},
                         {"elapsed_s", n.elapsed_s}};
  } else {
    j["notification"] = nullptr;
  }
  return j;
}

BenchReport report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw std::runtime_error("unsupported schema_version");
    }
    BenchReport r;
    r.kind = j.at("kind").get<std::string>();
    r.valid = j.at("valid").get<bool>();
    r.error = j.at("error").get<std::string>();
    r.warmup_ops = j.at("warmup_ops").get<std::uint64_t>();
    r.write_values = j.at("write_values").get<std::string>();
    r.max_in_flight = j.at("max_in_flight").get<std::uint64_t>();
    r.cpu_s = j.at("cpu_s").get<double>();
    for (const auto& row : j.at("rows")) {
      LatencyRow l;
      l.symbol = row.at("symbol").get<std::string>();
      l.type = row.at("type").get<std::string>();
      auto dir = parse_direction(row.at("direction").get<std::string>());
      if (!dir) throw std::runtime_error("bad direction");
      l.direction = *dir;
      l.count = row.at("count").get<std::uint64_t>();
      l.total_s = row.at("total_s").get<double>();
      l.mean_us = row.at("mean_us").get<double>();
      l.p50_us = row.at("p50_us").get<double>();
      l.p99_us = row.at("p99_us").get<double>();
      r.rows.push_back(std::move(l));
    }
    if (const auto& a = j.at("attribution"); !a.is_null()) {
      r.attribution = Attribution{a.at("total_s").get<double>(), a.at("encode_decode_s").get<double>(),
                                  a.at("wire_wait_s").get<double>(), a.at("other_s").get<double>()};
    }
    if (const auto& n = j.at("notification"); !n.is_null()) {
      NotificationCounts c;
      c.expected = n.at("expected").get<std::uint64_t>();
      c.delivered = n.at("delivered").get<std::uint64_t>();
      c.initial_count = n.at("initial_count").get<std::uint64_t>();
      c.missed = n.at("missed").get<std::uint64_t>();
      c.duplicated = n.at("duplicated").get<std::uint64_t>();
      c.out_of_order = n.at("out_of_order").get<std::uint64_t>();
      if (!n.at("server_dropped").is_null()) {
        c.server_dropped = n.at("server_dropped").get<std::uint64_t>();
      }
      c.client_dropped = n.at("client_dropped").get<std::uint64_t>();
      c.strictly_increasing = n.at("strictly_increasing").get<bool>();
      c.timed_out = n.at("timed_out").get<bool>();
      c.first_value = n.at("first_value").get<std::int64_t>();
      c.cycle_time_us = n.at("cycle_time_us").get<std::uint64_t>();
      c.clock = n.at("clock").get<std::string>();
      c.elapsed_s = n.at("elapsed_s").get<double>();
      r.notification = c;
    }
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string{"bad report: "} + e.what());
  }
}

// Text ------------------------------------------------------------------

namespace {

void emit_csv(const BenchReport& r, std::ostream& out) {
  if (r.kind == "notify" && r.notification) {
    const auto& n = *r.notification;
    out << "metric,value\n";
    out << "expected," << n.expected << "\n";
    out << "delivered," << n.delivered << "\n";
    out << "initial_count," << n.initial_count << "\n";
    out << "missed," << n.missed << "\n";
    out << "duplicated," << n.duplicated << "\n";
    out << "out_of_order," << n.out_of_order << "\n";
    out << "server_dropped," << (n.server_dropped ? std::to_string(*n.server_dropped) : "") << "\n";
    out << "client_dropped," << n.client_dropped << "\n";
    return;
  }
  out << kCsvHeader << "\n";
  for (const auto& row : r.rows) {
    out << fmt::format("{},{},{},{:.6f},{:.3f},{:.3f},{:.3f}\n", row.type, to_string(row.direction),
                       row.count, row.total_s, row.mean_us, row.p50_us, row.p99_us);
  }
}

std::string cell(const LatencyRow* row, double LatencyRow::*field, int precision) {
  if (row == nullptr) return "-";
  return fmt::format("{:.{}f}", row->*field, precision);
}

void emit_sync_table(const BenchReport& r, std::ostream& out) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<const LatencyRow*, const LatencyRow*>> by_type;
  std::uint64_t count = 0;
  for (const auto& row : r.rows) {
    auto [it, inserted] = by_type.try_emplace(row.type);
    if (inserted) order.push_back(row.type);
    (row.direction == Direction::kRead ? it->second.first : it->second.second) = &row;
    count = std::max(count, row.count);
  }
  out << fmt::format("Results for {} accesses per variable ({} warmup ops excluded)\n", count,
                     r.warmup_ops);
  out << fmt::format("{:<12} {:>10} {:>10} {:>12} {:>12} {:>12} {:>12}\n", "Type", "Read [s]",
                     "Write [s]", "R mean [us]", "W mean [us]", "R p99 [us]", "W p99 [us]");
  for (const auto& type : order) {
    const auto [rd, wr] = by_type[type];
    out << fmt::format("{:<12} {:>10} {:>10} {:>12} {:>12} {:>12} {:>12}\n", type,
                       cell(rd, &LatencyRow::total_s, 3), cell(wr, &LatencyRow::total_s, 3),
                       cell(rd, &LatencyRow::mean_us, 2), cell(wr, &LatencyRow::mean_us, 2),
                       cell(rd, &LatencyRow::p99_us, 2), cell(wr, &LatencyRow::p99_us, 2));
  }
  if (r.attribution) {
    const auto& a = *r.attribution;
    const auto pct = [&](double v) { return a.total_s > 0 ? 100.0 * v / a.total_s : 0.0; };
    out << fmt::format(
        "\nTime attribution over {:.3f} s: codec {:.3f} s ({:.2f}%), wire wait {:.3f} s "
        "({:.2f}%), other {:.3f} s ({:.2f}%)\n",
        a.total_s, a.encode_decode_s, pct(a.encode_decode_s), a.wire_wait_s, pct(a.wire_wait_s),
        a.other_s, pct(a.other_s));
  }
  if (!r.write_values.empty()) out << "Write values: " << r.write_values << "\n";
  out << fmt::format("Max requests in flight: {}\n", r.max_in_flight);
}

void emit_notify_table(const BenchReport& r, std::ostream& out) {
  const auto& n = *r.notification;
  out << fmt::format("Notification run: {} changes at {} us cycle, {} clock, {:.2f} s\n",
                     n.expected, n.cycle_time_us, n.clock, n.elapsed_s);
  out << fmt::format("  expected      {}\n", n.expected);
  out << fmt::format("  delivered     {}\n", n.delivered);
  out << fmt::format("  initial       {}\n", n.initial_count);
  out << fmt::format("  missed        {}\n", n.missed);
  out << fmt::format("  duplicated    {}\n", n.duplicated);
  out << fmt::format("  out of order  {}\n", n.out_of_order);
  out << fmt::format("  server drops  {}\n",
                     n.server_dropped ? std::to_string(*n.server_dropped) : "unavailable");
  out << fmt::format("  client drops  {}\n", n.client_dropped);
  out << fmt::format("  sequence      {}\n",
                     n.strictly_increasing ? "strictly increasing by 1" : "has gaps or repeats");
  if (n.timed_out) out << "  timed out before the last change arrived\n";
}

}  // namespace

void emit_report(const BenchReport& r, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::kJson:
      out << to_json(r).dump(2) << "\n";
      break;
    case ReportFormat::kCsv:
      emit_csv(r, out);
      break;
    case ReportFormat::kTable:
      if (!r.valid) out << "INVALID REPORT: " << r.error << "\n";
      if (r.notification) {
        emit_notify_table(r, out);
      } else {
        emit_sync_table(r, out);
      }
      break;
  }
}

void emit_report(const BenchReport& r, ReportFormat format, const std::string& path) {
  if (path == "-") {
    emit_report(r, format, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out{path};
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  emit_report(r, format, out);
  out.flush();
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace adsbench::bench
