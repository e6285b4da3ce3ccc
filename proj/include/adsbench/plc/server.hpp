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

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "adsbench/ams/types.hpp"
#include "adsbench/net.hpp"
#include "adsbench/plc/runtime.hpp"
#include "adsbench/plc/symbol_config.hpp"

namespace adsbench::plc {

enum class ClockMode {
  /// Cycles are paced by OS timers; a full notification queue drops its oldest stream.
  kReal,
  /// Logical time advances one cycle per iteration without sleeping. Time only
  /// advances while at least one notification is registered, and full
  /// notification queues stall the task instead of dropping.
  kVirtual,
};

std::optional<ClockMode> parse_clock_mode(std::string_view text);
std::string_view to_string(ClockMode mode);

/// 2024-01-01T00:00:00Z as 100 ns ticks since 1601-01-01.
inline constexpr std::uint64_t kVirtualEpoch = 133'485'408'000'000'000ULL;
/// 1970-01-01 as 100 ns ticks since 1601-01-01.
inline constexpr std::uint64_t kUnixEpochFiletime = 116'444'736'000'000'000ULL;

inline constexpr std::uint16_t kSystemServicePort = 10000;

struct ServerConfig {
  std::string bind_address = "0.0.0.0";
  /// 0 picks an ephemeral port.
  std::uint16_t tcp_port = ams::kDefaultTcpPort;
  ams::NetId net_id = ams::NetId{{127, 0, 0, 1, 1, 1}};
  std::uint16_t ads_port = ams::kDefaultPlcPort;
  ClockMode clock = ClockMode::kReal;
  /// Per-connection bound on queued notification streams.
  std::size_t notification_queue_capacity = 65536;
};

struct ServerStats {
  std::uint64_t cycles = 0;
  std::uint64_t dropped_streams = 0;
  std::uint64_t dropped_samples = 0;
  std::uint64_t notification_frames = 0;
  std::uint64_t connections_accepted = 0;
  std::size_t active_connections = 0;
  /// Live notification registrations across all connections.
  std::size_t registrations = 0;
  /// Real clock only: wake-up lateness against the cycle schedule.
  double mean_lateness_us = 0.0;
  double max_lateness_us = 0.0;
  /// Real clock only: cycles that started more than one period late.
  std::uint64_t overrun_cycles = 0;
  bool faulted = false;
};

/// Serves a Runtime over AMS/TCP and drives its cyclic task.
class Server {
 public:
  Server(PlcConfig plc, ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and spawns the acceptor and task threads. Throws net::NetError.
  void start();
  void stop();

  std::uint16_t port() const { return port_; }
  ams::Address ams_address() const { return {config_.net_id, config_.ads_port}; }
  const ServerConfig& config() const { return config_; }
  ServerStats stats() const;

  /// Online-change style invalidation of every issued symbol handle.
  void invalidate_handles();
  /// Snapshot of a symbol's bytes taken between cycles.
  ams::Bytes symbol_value(std::string_view name);

 private:
  struct Connection;
  struct RequestVisitor;

  void accept_loop();
  void task_loop_real();
  void task_loop_virtual();
  void reader_loop(const std::shared_ptr<Connection>& conn);
  void writer_loop(const std::shared_ptr<Connection>& conn);
  ams::Frame handle_request(Connection& conn, const ams::Frame& request);
  void deliver(std::vector<Delivery>&& deliveries);
  void reap(bool all);
  void close_connection(Connection& conn);
  std::unique_lock<std::mutex> lock_runtime();
  void note_registrations();

  ServerConfig config_;
  Runtime runtime_;
  std::mutex runtime_mutex_;
  std::atomic<int> runtime_waiters_{0};
  std::uint64_t now_ = kVirtualEpoch;  // guarded by runtime_mutex_

  std::unique_ptr<net::Listener> listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  bool started_ = false;
  std::thread accept_thread_;
  std::thread task_thread_;

  std::mutex task_mutex_;
  std::condition_variable task_cv_;
  std::atomic<std::size_t> registrations_{0};

  mutable std::mutex connections_mutex_;
  std::map<SessionId, std::shared_ptr<Connection>> connections_;

  std::atomic<std::uint64_t> cycles_{0};
  std::atomic<std::uint64_t> dropped_streams_{0};
  std::atomic<std::uint64_t> dropped_samples_{0};
  std::atomic<std::uint64_t> notification_frames_{0};
  std::atomic<std::uint64_t> accepted_{0};
  std::atomic<std::int64_t> lateness_sum_ns_{0};
  std::atomic<std::int64_t> lateness_max_ns_{0};
  std::atomic<std::uint64_t> lateness_samples_{0};
  std::atomic<std::uint64_t> overruns_{0};
  std::atomic<bool> faulted_{false};
};

}  // namespace adsbench::plc
