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
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adsbench/ams/types.hpp"
#include "adsbench/plc/symbol_config.hpp"

namespace adsbench::plc {

using SessionId = std::uint64_t;

/// Either a value or a nonzero ADS return code.
template <typename T>
struct AdsResult {
  std::uint32_t code = 0;
  T value{};

  bool ok() const { return code == 0; }
  static AdsResult failure(std::uint32_t c) { return {c, T{}}; }
};

/// Notification stream owed to one session.
struct Delivery {
  SessionId session = 0;
  ams::NotificationStream stream;
};

/// Raised by the program executor on an op it cannot apply.
class SimulatorFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The simulated PLC state machine: process image, symbol handles, the cyclic
/// program and the notification engine. Not thread-safe; the server serializes
/// access so that requests land between cycles.
class Runtime {
 public:
  explicit Runtime(PlcConfig config);

  const PlcConfig& config() const { return config_; }
  std::uint64_t cycle_count() const { return cycle_count_; }

  SessionId open_session();
  /// Drops the session's handles and notification registrations.
  void close_session(SessionId session);

  AdsResult<std::uint32_t> lookup_handle(SessionId session, std::string_view name);
  std::uint32_t release_handle(SessionId session, std::uint32_t handle);
  /// Forgets every symbol handle of every session. Handle counters keep
  /// counting, so stale handles never alias new ones.
  void invalidate_handles();

  AdsResult<ams::Bytes> read(SessionId session, std::uint32_t index_group,
                             std::uint32_t index_offset, std::uint32_t length) const;
  std::uint32_t write(SessionId session, std::uint32_t index_group, std::uint32_t index_offset,
                      std::span<const std::uint8_t> data);
  AdsResult<ams::Bytes> read_write(SessionId session, std::uint32_t index_group,
                                   std::uint32_t index_offset, std::uint32_t read_length,
                                   std::span<const std::uint8_t> write_data);

  /// Registers a notification and queues one sample with the current value,
  /// stamped `now`.
  AdsResult<std::uint32_t> add_notification(SessionId session,
                                            const ams::AddNotificationRequest& request,
                                            std::uint64_t now);
  std::uint32_t delete_notification(SessionId session, std::uint32_t handle);
  std::size_t registration_count() const { return registration_count_; }

  /// One PLC cycle at time `now`: executes the program, samples every
  /// registration at most once, then returns what flush_due(now) returns.
  std::vector<Delivery> run_cycle(std::uint64_t now);

  /// Emits pending samples of registrations whose max delay has elapsed
  /// (immediately when max delay is 0).
  std::vector<Delivery> flush_due(std::uint64_t now);

  /// Current bytes of a symbol.
  std::span<const std::uint8_t> value(std::string_view name) const;
  void execute(const ProgramOp& op);

 private:
  struct Registration {
    std::size_t symbol = 0;
    ams::NotificationAttrib attrib;
    std::optional<ams::Bytes> last_sent;
    std::optional<std::uint64_t> last_check;
    std::deque<std::pair<std::uint64_t, ams::Bytes>> pending;
  };

  struct Session {
    std::uint32_t next_symbol_handle = 1;
    std::uint32_t next_notification_handle = 1;
    std::unordered_map<std::uint32_t, std::size_t> handles;
    std::unordered_map<std::string, std::uint32_t> handle_by_name;
    std::map<std::uint32_t, Registration> registrations;
  };

  std::span<std::uint8_t> bytes_of(std::size_t symbol);
  std::span<const std::uint8_t> bytes_of(std::size_t symbol) const;
  std::optional<std::size_t> symbol_for_handle(const Session& s, std::uint32_t handle) const;
  std::optional<std::size_t> symbol_at_offset(std::uint32_t offset) const;
  void sample(Registration& reg, std::uint64_t now);
  void apply(const ProgramOp& op, std::size_t symbol);

  PlcConfig config_;
  ams::Bytes memory_;
  std::vector<std::size_t> program_symbols_;
  std::map<SessionId, Session> sessions_;
  SessionId next_session_ = 1;
  std::size_t registration_count_ = 0;
  std::uint64_t cycle_count_ = 0;
};

}  // namespace adsbench::plc
