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

// adsbench: ADS client, PLC simulator and benchmark runner.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 benchmark
// report marked invalid.

#include <csignal>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <condition_variable>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "adsbench/ams/error_codes.hpp"
#include "adsbench/bench/notify_bench.hpp"
#include "adsbench/bench/sync_bench.hpp"
#include "adsbench/bench/workloads.hpp"
#include "adsbench/client/session.hpp"
#include "adsbench/log.hpp"
#include "adsbench/plc/server.hpp"

namespace {

using namespace adsbench;

struct Common {
  std::string host;
  std::uint16_t port = ams::kDefaultTcpPort;
  std::string target_netid = "127.0.0.1.1.1";
  std::uint16_t target_port = ams::kDefaultPlcPort;
  std::string source_netid = "127.0.0.1.1.20";
  std::uint16_t source_port = 30000;
  std::string format = "table";
  std::string output = "-";
  int timeout_ms = 5000;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

client::ClientConfig client_config(const Common& c) {
  client::ClientConfig cfg;
  cfg.host = c.host.empty() ? "127.0.0.1" : c.host;
  cfg.tcp_port = c.port;
  cfg.target = {ams::NetId::parse(c.target_netid), c.target_port};
  cfg.source = {ams::NetId::parse(c.source_netid), c.source_port};
  cfg.request_timeout = std::chrono::milliseconds{c.timeout_ms};
  return cfg;
}

plc::PlcType parse_type(const std::string& text) {
  auto t = plc::parse_plc_type(text);
  if (!t) throw UsageError("unknown type '" + text + "'");
  return *t;
}

bench::ReportFormat parse_format(const std::string& text) {
  auto f = bench::parse_report_format(text);
  if (!f) throw UsageError("unknown format '" + text + "'");
  return *f;
}

plc::ClockMode parse_clock(const std::string& text) {
  auto c = plc::parse_clock_mode(text);
  if (!c) throw UsageError("unknown clock '" + text + "'");
  return *c;
}

/// Bare names not found locally are looked up in the installed config directory.
std::string resolve_config_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  const auto fallback = fs::path{ADSBENCH_CONFIG_DIR} / path;
  if (fs::path{path}.parent_path().empty() && fs::exists(fallback)) return fallback.string();
  return path;
}

plc::PlcConfig load_config(const std::string& path, const std::string& workload, int cycle_us) {
  plc::PlcConfig config;
  if (!path.empty()) {
    config = plc::load_symbol_config_file(resolve_config_path(path));
  } else if (workload == "counter") {
    config = bench::counter_config(std::chrono::microseconds{cycle_us > 0 ? cycle_us : 100});
  } else if (workload == "sync") {
    config = bench::sync_workload_config();
  } else {
    throw UsageError("unknown workload '" + workload + "'");
  }
  if (cycle_us > 0) config.set_cycle_time(std::chrono::microseconds{cycle_us});
  return config;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

/// Blocks until SIGINT/SIGTERM or the given number of seconds (0 = forever).
void wait_for_signal(double seconds) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  if (seconds <= 0) {
    int sig = 0;
    sigwait(&set, &sig);
    return;
  }
  timespec ts{};
  ts.tv_sec = static_cast<time_t>(seconds);
  ts.tv_nsec = static_cast<long>((seconds - static_cast<double>(ts.tv_sec)) * 1e9);
  sigtimedwait(&set, nullptr, &ts);
}

}  // namespace

int main(int argc, char** argv) {
  // Signals are consumed with sigwait by `serve`; block them before any thread starts.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  CLI::App app{"ADS/AMS client, PLC simulator and benchmark harness"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  std::string log_level;
  app.add_option("--host", common.host, "Server host; bench commands start an embedded server when omitted");
  app.add_option("--port", common.port, "AMS/TCP port")->capture_default_str();
  app.add_option("--target-netid", common.target_netid, "Target AMS NetId")->capture_default_str();
  app.add_option("--target-port", common.target_port, "Target ADS port")->capture_default_str();
  app.add_option("--source-netid", common.source_netid, "Source AMS NetId")->capture_default_str();
  app.add_option("--source-port", common.source_port, "Source ADS port")->capture_default_str();
  app.add_option("--format", common.format, "table, csv or json")->capture_default_str();
  app.add_option("--output", common.output, "Report destination, - for stdout")->capture_default_str();
  app.add_option("--timeout-ms", common.timeout_ms, "Request timeout")->capture_default_str();
  app.add_option("--log-level", log_level, "debug, info, warn, error or off");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the PLC simulator");
  std::string config_path;
  std::string workload = "sync";
  std::string clock = "real";
  int cycle_us = 0;
  std::string bind = "127.0.0.1";
  std::string server_netid = "127.0.0.1.1.1";
  double duration_s = 0;
  serve->add_option("--config", config_path, "Symbol/task configuration file");
  serve->add_option("--workload", workload, "Built-in configuration when --config is absent: sync or counter")
      ->capture_default_str();
  serve->add_option("--clock", clock, "real or virtual")->capture_default_str();
  serve->add_option("--cycle-us", cycle_us, "Override the task cycle time");
  serve->add_option("--bind", bind, "Listen address")->capture_default_str();
  serve->add_option("--netid", server_netid, "Server AMS NetId")->capture_default_str();
  serve->add_option("--duration-s", duration_s, "Stop after this many seconds (0 = until signalled)");

  // read / write
  std::string symbol;
  std::string type_text;
  std::string value_text;
  auto* read = app.add_subcommand("read", "Read a symbol by name");
  read->add_option("--symbol", symbol)->required();
  read->add_option("--type", type_text, "e.g. LREAL, DINT[3]")->required();
  auto* write = app.add_subcommand("write", "Write a symbol by name");
  write->add_option("--symbol", symbol)->required();
  write->add_option("--type", type_text)->required();
  write->add_option("--value", value_text, "Scalar or comma separated elements")->required();

  // subscribe
  auto* subscribe = app.add_subcommand("subscribe", "Print device notifications for a symbol");
  std::uint64_t count = 10;
  std::string mode = "onchange";
  int sub_cycle_us = 10000;
  int max_delay_us = 0;
  subscribe->add_option("--symbol", symbol)->required();
  subscribe->add_option("--type", type_text)->required();
  subscribe->add_option("--count", count, "Stop after this many samples")->capture_default_str();
  subscribe->add_option("--mode", mode, "onchange or cyclic")->capture_default_str();
  subscribe->add_option("--cycle-us", sub_cycle_us, "Sampling cycle")->capture_default_str();
  subscribe->add_option("--max-delay-us", max_delay_us, "Server batching bound")->capture_default_str();

  // bench-sync
  auto* bench_sync = app.add_subcommand("bench-sync", "Serial read/write latency benchmark");
  std::uint32_t ops = 10000;
  std::uint32_t warmup = 100;
  std::string direction = "both";
  std::vector<std::string> only;
  bench_sync->add_option("--config", config_path, "Variables to benchmark (default: built-in 28)");
  bench_sync->add_option("--ops", ops, "Measured ops per variable and direction")->capture_default_str();
  bench_sync->add_option("--warmup", warmup, "Unmeasured ops before each row")->capture_default_str();
  bench_sync->add_option("--direction", direction, "read, write or both")->capture_default_str();
  bench_sync->add_option("--symbol", only, "Restrict to these symbols");

  // bench-notify
  auto* bench_notify = app.add_subcommand("bench-notify", "On-change notification completeness run");
  std::uint64_t changes = 250000;
  int notify_cycle_us = 100;
  int notify_max_delay_us = 1000;
  double notify_timeout_s = 0;
  std::string notify_clock = "virtual";
  bench_notify->add_option("--changes", changes)->capture_default_str();
  bench_notify->add_option("--cycle-us", notify_cycle_us)->capture_default_str();
  bench_notify->add_option("--clock", notify_clock, "real or virtual (embedded server only)")
      ->capture_default_str();
  bench_notify->add_option("--max-delay-us", notify_max_delay_us)->capture_default_str();
  bench_notify->add_option("--timeout-s", notify_timeout_s, "0 picks a bound from the run length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error kind=usage message=" << quote(e.what()) << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 2;
  }

  try {
    if (!log_level.empty()) {
      auto level = log::parse_level(log_level);
      if (!level) throw UsageError("unknown log level '" + log_level + "'");
      log::set_level(*level);
    }
    const auto format = parse_format(common.format);

    if (*serve) {
      plc::ServerConfig cfg;
      cfg.bind_address = bind;
      cfg.tcp_port = common.port;
      cfg.net_id = ams::NetId::parse(server_netid);
      cfg.ads_port = common.target_port;
      cfg.clock = parse_clock(clock);
      plc::Server server{load_config(config_path, workload, cycle_us), cfg};
      server.start();
      std::cout << fmt::format("listening address={} port={} netid={} ads_port={} clock={}\n", bind,
                               server.port(), cfg.net_id.to_string(), cfg.ads_port,
                               plc::to_string(cfg.clock))
                << std::flush;
      wait_for_signal(duration_s);
      const auto stats = server.stats();
      server.stop();
      log::info("server_stopped", {{"cycles", std::to_string(stats.cycles)},
                                   {"dropped_streams", std::to_string(stats.dropped_streams)}});
      return 0;
    }

    if (*read) {
      const auto type = parse_type(type_text);
      auto session = client::Session::connect(client_config(common));
      std::cout << session->read_value(symbol, type).to_string() << "\n";
      return 0;
    }

    if (*write) {
      const auto type = parse_type(type_text);
      const auto value = client::TypedValue::parse(type, value_text);
      auto session = client::Session::connect(client_config(common));
      session->write_value(symbol, value);
      return 0;
    }

    if (*subscribe) {
      const auto type = parse_type(type_text);
      ams::NotificationAttrib attrib;
      attrib.length = type.size();
      if (mode == "onchange") {
        attrib.trans_mode = ams::TransMode::kOnChange;
      } else if (mode == "cyclic") {
        attrib.trans_mode = ams::TransMode::kCyclic;
      } else {
        throw UsageError("unknown mode '" + mode + "'");
      }
      attrib.cycle_time = static_cast<std::uint32_t>(sub_cycle_us) * 10;
      attrib.max_delay = static_cast<std::uint32_t>(max_delay_us) * 10;
      auto session = client::Session::connect(client_config(common));
      std::mutex m;
      std::condition_variable cv;
      std::uint64_t seen = 0;
      auto sub = session->subscribe(symbol, attrib, [&](std::uint64_t ts, std::span<const std::uint8_t> d) {
        client::TypedValue v{type, ams::Bytes(d.begin(), d.end())};
        std::lock_guard lock{m};
        if (seen >= count) return;
        std::cout << ts << " " << v.to_string() << "\n" << std::flush;
        if (++seen >= count) cv.notify_all();
      });
      std::unique_lock lock{m};
      cv.wait(lock, [&] { return seen >= count || !session->connected(); });
      lock.unlock();
      sub.unsubscribe();
      return 0;
    }

    if (*bench_sync) {
      bench::SyncBenchSpec spec;
      spec.ops_per_variable = ops;
      spec.warmup_ops = warmup;
      if (direction == "both") {
        spec.directions = {bench::Direction::kRead, bench::Direction::kWrite};
      } else if (auto d = bench::parse_direction(direction)) {
        spec.directions = {*d};
      } else {
        throw UsageError("unknown direction '" + direction + "'");
      }
      auto plc_config = load_config(config_path, "sync", 0);
      for (const auto& s : plc_config.symbols()) {
        if (only.empty() || std::find(only.begin(), only.end(), s.name) != only.end()) {
          spec.variables.push_back(s);
        }
      }
      bench::validate(spec);

      std::unique_ptr<plc::Server> server;
      auto target = client_config(common);
      if (common.host.empty()) {
        plc::ServerConfig cfg;
        cfg.bind_address = "127.0.0.1";
        cfg.tcp_port = 0;
        server = std::make_unique<plc::Server>(plc_config, cfg);
        server->start();
        target.tcp_port = server->port();
        target.target = server->ams_address();
      }
      const auto report = bench::bench_sync(spec, target);
      if (server) server->stop();
      bench::emit_report(report, format, common.output);
      return report.valid ? 0 : 3;
    }

    if (*bench_notify) {
      bench::NotifyBenchSpec spec;
      spec.changes = changes;
      spec.cycle_time = std::chrono::microseconds{notify_cycle_us};
      spec.clock = parse_clock(notify_clock);
      spec.max_delay = std::chrono::microseconds{notify_max_delay_us};
      spec.timeout = std::chrono::milliseconds{static_cast<std::int64_t>(notify_timeout_s * 1000)};
      bench::validate(spec);
      const auto report = common.host.empty() ? bench::bench_notify(spec)
                                              : bench::bench_notify(spec, client_config(common));
      bench::emit_report(report, format, common.output);
      return report.valid ? 0 : 3;
    }
  } catch (const UsageError& e) {
    std::cerr << "error kind=usage message=" << quote(e.what()) << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error kind=usage message=" << quote(e.what()) << "\n";
    return 2;
  } catch (const client::AdsError& e) {
    std::cerr << fmt::format("error kind=ads code=0x{:x} message={}\n", e.code(), quote(e.what()));
    return 1;
  } catch (const client::ConnectError& e) {
    std::cerr << "error kind=connect message=" << quote(e.what()) << "\n";
    return 1;
  } catch (const plc::ConfigError& e) {
    std::cerr << fmt::format("error kind=config line={} message={}\n", e.line(), quote(e.what()));
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error kind=runtime message=" << quote(e.what()) << "\n";
    return 1;
  }
  return 0;
}
