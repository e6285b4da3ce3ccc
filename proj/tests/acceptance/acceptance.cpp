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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "adsbench/ams/codec.hpp"
#include "adsbench/bench/notify_bench.hpp"
#include "adsbench/bench/report.hpp"
#include "adsbench/bench/sync_bench.hpp"
#include "adsbench/bench/workloads.hpp"
#include "adsbench/log.hpp"
#include "adsbench/plc/runtime.hpp"
#include "support/generators.hpp"
#include "support/harness.hpp"

namespace {

using namespace adsbench;
using namespace std::chrono_literals;
namespace ig = ams::index_group;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok, std::move(detail)}; }

// Notifications ---------------------------------------------------------------

Outcome ac1_virtual_completeness() {
  bench::NotifyBenchSpec spec;
  spec.changes = 250000;
  spec.cycle_time = 100us;
  spec.clock = plc::ClockMode::kVirtual;
  const auto r = bench::bench_notify(spec);
  if (!r.valid || !r.notification) return check(false, "report invalid: " + r.error);
  const auto& n = *r.notification;
  const bool ok = n.delivered == 250000 && n.missed == 0 && n.duplicated == 0 &&
                  n.out_of_order == 0 && n.strictly_increasing && !n.timed_out;
  return check(ok, fmt::format("delivered={} missed={} duplicated={} out_of_order={} "
                               "strictly_increasing={} elapsed_s={:.2f}",
                               n.delivered, n.missed, n.duplicated, n.out_of_order,
                               n.strictly_increasing, n.elapsed_s));
}

Outcome ac2_real_clock_10khz() {
  bench::NotifyBenchSpec spec;
  spec.changes = 100000;
  spec.cycle_time = 100us;
  spec.clock = plc::ClockMode::kReal;
  const auto r = bench::bench_notify(spec);
  if (!r.valid || !r.notification) return check(false, "report invalid: " + r.error);
  const auto& n = *r.notification;

  // Misses and both drop counters have to show up in the emitted report.
  std::ostringstream csv;
  bench::emit_report(r, bench::ReportFormat::kCsv, csv);
  const bool surfaced = n.server_dropped.has_value() &&
                        csv.str().find("missed,") != std::string::npos &&
                        csv.str().find("server_dropped,") != std::string::npos;
  const double missed_pct = 100.0 * static_cast<double>(n.missed) / static_cast<double>(n.expected);
  const bool ok = surfaced && n.missed * 1000 <= n.expected;
  return check(ok, fmt::format("delivered={} missed={} ({:.3f}%) server_dropped={} client_dropped={} "
                               "elapsed_s={:.2f} cores={}",
                               n.delivered, n.missed, missed_pct,
                               n.server_dropped ? std::to_string(*n.server_dropped) : "n/a",
                               n.client_dropped, n.elapsed_s, std::thread::hardware_concurrency()));
}

struct Emitted {
  std::uint64_t flushed;
  std::uint64_t stamped;
  std::uint32_t handle;
  ams::Bytes data;
};

void collect(const std::vector<plc::Delivery>& ds, std::uint64_t now, std::vector<Emitted>& out) {
  for (const auto& d : ds) {
    for (const auto& st : d.stream.stamps) {
      for (const auto& s : st.samples) out.push_back({now, st.timestamp, s.handle, s.data});
    }
  }
}

ams::Bytes dint(std::int32_t v) {
  ams::Bytes b(4);
  std::memcpy(b.data(), &v, 4);
  return b;
}

plc::PlcConfig dints(std::size_t n, std::chrono::microseconds cycle) {
  plc::PlcConfig c;
  for (std::size_t i = 0; i < n; ++i) {
    c.add_symbol(fmt::format("MAIN.x{}", i), plc::PlcType::scalar(plc::ScalarType::kDInt));
  }
  c.set_cycle_time(cycle);
  return c;
}

Outcome ac3_once_per_cycle() {
  std::mt19937_64 rng{3};
  std::size_t intervals = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t cycle_us = 50 + rng() % 500;
    const std::uint64_t cycle = cycle_us * 10;
    // Sample every `every` cycles; writes land between sampling points.
    const std::uint64_t every = 1 + rng() % 4;
    const bool cyclic = rng() % 2 == 0;
    plc::Runtime rt{dints(1, std::chrono::microseconds{cycle_us})};
    const auto session = rt.open_session();
    const auto h = rt.lookup_handle(session, "MAIN.x0").value;
    const ams::NotificationAttrib attrib{
        4, cyclic ? ams::TransMode::kCyclic : ams::TransMode::kOnChange, 0,
        static_cast<std::uint32_t>(every * cycle)};
    const std::uint64_t t0 = 1'000'000;
    const auto n = rt.add_notification(session, {ig::kSymbolValueByHandle, h, attrib}, t0).value;
    std::vector<Emitted> out;
    collect(rt.flush_due(t0), t0, out);
    if (out.size() != 1) return check(false, "missing initial sample");

    std::int32_t last_sent = 0;
    std::uint64_t now = t0;
    for (int interval = 0; interval < 50; ++interval) {
      auto first = static_cast<std::int32_t>(rng() % 1000) + 1;
      auto final_value = static_cast<std::int32_t>(rng() % 1000) + 1;
      if (final_value == last_sent) ++final_value;
      rt.write(session, ig::kSymbolValueByHandle, h, dint(first));
      rt.write(session, ig::kSymbolValueByHandle, h, dint(final_value));
      out.clear();
      for (std::uint64_t k = 0; k < every; ++k) {
        now += cycle;
        collect(rt.run_cycle(now), now, out);
      }
      if (out.size() != 1 || out[0].handle != n || out[0].data != dint(final_value)) {
        return check(false, fmt::format("trial {} interval {}: {} samples, expected one carrying {}",
                                        trial, interval, out.size(), final_value));
      }
      last_sent = final_value;
      ++intervals;
    }
  }
  return check(true, fmt::format("{} sampling intervals with two writes each, one sample apiece",
                                 intervals));
}

Outcome ac4_max_delay_bound() {
  std::mt19937_64 rng{4};
  std::size_t samples = 0;
  std::uint64_t worst_slack = UINT64_MAX;
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t cycle_us = 50 + rng() % 2000;
    const std::uint64_t cycle = cycle_us * 10;
    const std::size_t vars = 1 + rng() % 4;
    plc::Runtime rt{dints(vars, std::chrono::microseconds{cycle_us})};
    const auto session = rt.open_session();
    std::map<std::uint32_t, std::uint64_t> max_delay;
    std::vector<std::uint32_t> handles;
    const std::uint64_t t0 = 5'000'000;
    for (std::size_t i = 0; i < vars; ++i) {
      const auto h = rt.lookup_handle(session, fmt::format("MAIN.x{}", i)).value;
      handles.push_back(h);
      const std::uint64_t md = rng() % 4 == 0 ? 0 : rng() % (40 * cycle);
      const ams::NotificationAttrib a{4, rng() % 3 == 0 ? ams::TransMode::kCyclic : ams::TransMode::kOnChange,
                                      static_cast<std::uint32_t>(md),
                                      static_cast<std::uint32_t>((1 + rng() % 3) * cycle)};
      const auto n = rt.add_notification(session, {ig::kSymbolValueByHandle, h, a}, t0).value;
      max_delay[n] = md;
    }
    std::vector<Emitted> out;
    collect(rt.flush_due(t0), t0, out);
    const std::size_t cycles = 50 + rng() % 400;
    for (std::size_t k = 1; k <= cycles; ++k) {
      const auto writes = rng() % 3;
      for (std::uint64_t w = 0; w < writes; ++w) {
        rt.write(session, ig::kSymbolValueByHandle, handles[rng() % vars],
                 dint(static_cast<std::int32_t>(rng() % 8)));
      }
      const auto now = t0 + k * cycle;
      collect(rt.run_cycle(now), now, out);
    }
    for (const auto& e : out) {
      const auto latency = e.flushed - e.stamped;
      const auto bound = max_delay.at(e.handle) + cycle;
      if (latency > bound) {
        return check(false, fmt::format("trial {}: latency {} ticks exceeds bound {}", trial,
                                         latency, bound));
      }
      worst_slack = std::min(worst_slack, bound - latency);
      ++samples;
    }
  }
  return check(samples > 0, fmt::format("{} samples within maxDelay + one cycle (tightest slack "
                                        "{} x100ns)", samples, worst_slack));
}

// Sync benchmark ----------------------------------------------------------------

struct SyncRun {
  bench::BenchReport report;
  std::string table;
};

const SyncRun& sync_run() {
  static const SyncRun run = [] {
    testing::LocalServer local{bench::sync_workload_config()};
    bench::SyncBenchSpec spec;
    spec.variables = bench::sync_workload_config().symbols();
    spec.ops_per_variable = 1000;
    spec.directions = {bench::Direction::kRead, bench::Direction::kWrite};
    SyncRun r;
    r.report = bench::bench_sync(spec, local.client_config());
    std::ostringstream out;
    bench::emit_report(r.report, bench::ReportFormat::kTable, out);
    r.table = out.str();
    return r;
  }();
  return run;
}

Outcome ac5_sync_28_variables() {
  const auto& run = sync_run();
  const auto& r = run.report;
  if (!r.valid) return check(false, "run failed: " + r.error);
  double worst = 0;
  std::string worst_row;
  for (const auto& row : r.rows) {
    if (row.mean_us > worst) {
      worst = row.mean_us;
      worst_row = row.type + " " + std::string{bench::to_string(row.direction)};
    }
  }
  // One table line per variable, each with read and write columns filled.
  std::size_t type_lines = 0;
  const auto config = bench::sync_workload_config();
  for (const auto& sym : config.symbols()) {
    const auto display = sym.type.display();
    std::istringstream in{run.table};
    for (std::string line; std::getline(in, line);) {
      if (line.rfind(display + " ", 0) == 0 && line.find(" - ") == std::string::npos) {
        ++type_lines;
        break;
      }
    }
  }
  const bool shape = r.rows.size() == 56 &&
                     run.table.find("Results for 1000 accesses per variable") != std::string::npos &&
                     type_lines == 28;
  const bool ok = shape && worst < 1000.0;
  return check(ok, fmt::format("rows={} table_type_lines={} worst_mean_us={:.1f} ({})",
                               r.rows.size(), type_lines, worst, worst_row));
}

Outcome ac6_attribution() {
  const auto& r = sync_run().report;
  if (!r.valid || !r.attribution) return check(false, "no attribution");
  const auto& a = *r.attribution;
  const double codec_pct = 100.0 * a.encode_decode_s / a.total_s;
  const double sum = a.encode_decode_s + a.wire_wait_s + a.other_s;
  const double sum_err = std::abs(sum - a.total_s) / a.total_s;
  const bool parts_ok = a.encode_decode_s >= 0 && a.wire_wait_s >= 0 && a.other_s >= 0;
  return check(codec_pct < 5.0 && sum_err <= 0.01 && parts_ok,
               fmt::format("total_s={:.4f} codec={:.2f}% wire={:.2f}% other={:.2f}% sum_error={:.4f}%",
                           a.total_s, codec_pct, 100.0 * a.wire_wait_s / a.total_s,
                           100.0 * a.other_s / a.total_s, 100.0 * sum_err));
}

Outcome ac10_array_parity() {
  // Each scalar runs right next to its array, alternating which goes first,
  // so slow drift in host speed lands on both sides of a comparison.
  testing::LocalServer local{bench::sync_workload_config()};
  auto session = local.connect();
  const auto syms = bench::sync_workload_config().symbols();
  std::map<std::string, std::pair<double, double>> per_symbol;  // total seconds, ops
  for (int round = 0; round < 8; ++round) {
    bench::SyncBenchSpec spec;
    spec.ops_per_variable = 500;
    spec.warmup_ops = round == 0 ? 100 : 0;
    spec.directions = {bench::Direction::kRead, bench::Direction::kWrite};
    for (std::size_t i = 0; i < 14; ++i) {
      const bool scalar_first = (round + static_cast<int>(i)) % 2 == 0;
      spec.variables.push_back(syms[scalar_first ? i : i + 14]);
      spec.variables.push_back(syms[scalar_first ? i + 14 : i]);
    }
    const auto r = bench::bench_sync(spec, *session);
    if (!r.valid) return check(false, "run failed: " + r.error);
    for (const auto& row : r.rows) {
      auto& [total, n] = per_symbol[row.symbol];
      total += row.total_s;
      n += static_cast<double>(row.count);
    }
  }
  double worst = 0;
  std::string worst_name;
  for (std::size_t i = 0; i < 14; ++i) {
    const auto [st, sn] = per_symbol.at(syms[i].name);
    const auto [at, an] = per_symbol.at(syms[i + 14].name);
    const double scalar_us = 1e6 * st / sn;
    const double array_us = 1e6 * at / an;
    const double diff = std::abs(array_us - scalar_us) / scalar_us;
    if (std::getenv("ACCEPTANCE_VERBOSE")) {
      std::cout << fmt::format("  {} {:.2f} us, {} {:.2f} us\n", syms[i].name, scalar_us,
                               syms[i + 14].name, array_us);
    }
    if (diff > worst) {
      worst = diff;
      worst_name = syms[i + 14].type.display();
    }
  }
  return check(worst <= 0.25, fmt::format("largest array/scalar mean difference {:.1f}% ({}), "
                                          "8000 ops per variable",
                                          100.0 * worst, worst_name));
}

// Client contracts ------------------------------------------------------------

Outcome ac7_handle_cache() {
  testing::LocalServer local{bench::sync_workload_config()};
  std::mutex m;
  std::size_t lookups = 0;
  std::size_t reads = 0;
  auto tap = [&](client::WireDirection d, std::span<const std::uint8_t> bytes) {
    if (d != client::WireDirection::kSent) return;
    const auto f = std::get<ams::Decoded>(ams::decode_frame(bytes)).frame;
    std::lock_guard lock{m};
    if (const auto* rw = std::get_if<ams::ReadWriteRequest>(&f.payload)) {
      if (rw->index_group == ig::kSymbolHandleByName) ++lookups;
    } else if (std::holds_alternative<ams::ReadRequest>(f.payload)) {
      ++reads;
    }
  };
  auto s = local.connect();
  s->set_wire_tap(tap);
  for (int i = 0; i < 10000; ++i) s->read_raw("MAIN.lrVar", 8);
  s->set_wire_tap({});
  std::lock_guard lock{m};
  return check(lookups == 1 && reads == 10000,
               fmt::format("lookup_frames={} read_frames={}", lookups, reads));
}

Outcome ac8_codec() {
  std::mt19937_64 rng{8};
  constexpr std::size_t kPerKind = 10000;
  std::size_t frames = 0;
  for (std::size_t kind = 0; kind < testing::kPayloadKinds; ++kind) {
    for (std::size_t i = 0; i < kPerKind; ++i) {
      const auto f = testing::frame(rng, kind);
      const auto bytes = ams::encode_frame(f);
      const auto d = std::get<ams::Decoded>(ams::decode_frame(bytes));
      if (d.consumed != bytes.size() || !(d.frame == f) || ams::encode_frame(d.frame) != bytes) {
        return check(false, fmt::format("round trip mismatch for payload kind {}", kind));
      }
      ++frames;
    }
  }
  std::size_t fixtures = 0;
  for (const auto& entry : std::filesystem::directory_iterator{ADSBENCH_FIXTURE_DIR}) {
    if (entry.path().extension() != ".hex") continue;
    const auto bytes = testing::load_hex(entry.path().filename().string());
    const auto d = std::get<ams::Decoded>(ams::decode_frame(bytes));
    if (d.consumed != bytes.size() || ams::encode_frame(d.frame) != bytes) {
      return check(false, "fixture mismatch: " + entry.path().filename().string());
    }
    ++fixtures;
  }
  return check(fixtures >= 19, fmt::format("{} random frames over {} payload kinds, {} fixtures "
                                           "bit-exact", frames, testing::kPayloadKinds, fixtures));
}

Outcome ac9_typed_round_trip() {
  testing::LocalServer local{bench::sync_workload_config()};
  auto s = local.connect();
  std::mt19937_64 rng{9};
  std::size_t cases = 0;
  const auto config = bench::sync_workload_config();
  for (const auto& sym : config.symbols()) {
    for (int i = 0; i < 1000; ++i) {
      ams::Bytes raw(sym.size);
      for (auto& b : raw) b = static_cast<std::uint8_t>(rng());
      if (sym.type.element == plc::ScalarType::kBool) {
        for (auto& b : raw) b &= 1;
      }
      const client::TypedValue v{sym.type, raw};
      s->write_value(sym.name, v);
      const auto back = s->read_value(sym.name, sym.type);
      if (back.raw() != raw) {
        return check(false, fmt::format("{} case {}: read back {} after writing {}", sym.name, i,
                                        back.to_string(), v.to_string()));
      }
      ++cases;
    }
  }
  return check(true, fmt::format("{} write/read cases over 28 types", cases));
}

}  // namespace

int main() {
  log::set_level(log::Level::kWarn);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 notification completeness (virtual clock, 250000 changes)", ac1_virtual_completeness},
      {"AC2 real clock 100us cycle, 100000 changes, missed <= 0.1%", ac2_real_clock_10khz},
      {"AC3 once-per-cycle sampling", ac3_once_per_cycle},
      {"AC4 max-delay flush bound", ac4_max_delay_bound},
      {"AC5 28 variables x 1000 ops, mean < 1 ms, table shape", ac5_sync_28_variables},
      {"AC6 codec < 5% of sync time, parts sum to total", ac6_attribution},
      {"AC7 one handle lookup per 10000 reads", ac7_handle_cache},
      {"AC8 codec round trip and fixtures", ac8_codec},
      {"AC9 typed write/read identity", ac9_typed_round_trip},
      {"AC10 array-of-3 within 25% of scalar", ac10_array_parity},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string{"exception: "} + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " : " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failed))
            << std::endl;
  return failed == 0 ? 0 : 1;
}
