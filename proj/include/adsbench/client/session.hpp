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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "adsbench/ams/types.hpp"
#include "adsbench/client/typed_value.hpp"

namespace adsbench::client {

struct ClientConfig {
  std::string host = "127.0.0.1";
  std::uint16_t tcp_port = ams::kDefaultTcpPort;
  ams::Address target{ams::NetId{{127, 0, 0, 1, 1, 1}}, ams::kDefaultPlcPort};
  ams::Address source{ams::NetId{{127, 0, 0, 1, 1, 20}}, 30000};
  std::chrono::milliseconds request_timeout{5000};
  /// Bound on samples waiting for listener dispatch.
  std::size_t dispatch_queue_capacity = 65536;
};

/// A nonzero ADS return code from the AMS header or the response payload.
class AdsError : public std::runtime_error {
 public:
  AdsError(std::uint32_t code, const std::string& context);
  std::uint32_t code() const { return code_; }

 private:
  std::uint32_t code_;
};

class TimeoutError : public AdsError {
 public:
  explicit TimeoutError(std::uint32_t invoke_id);
  std::uint32_t invoke_id() const { return invoke_id_; }

 private:
  std::uint32_t invoke_id_;
};

class ConnectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DisconnectedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True for return codes that mean a cached symbol handle is no longer valid.
bool is_handle_error(std::uint32_t code);

/// Receives (timestamp in 100 ns since 1601, value bytes).
using Listener = std::function<void(std::uint64_t, std::span<const std::uint8_t>)>;

enum class WireDirection { kSent, kReceived };
/// Observes every complete frame crossing the socket.
using WireTap = std::function<void(WireDirection, std::span<const std::uint8_t>)>;

struct RequestTiming {
  std::uint64_t requests = 0;
  std::chrono::nanoseconds encode{0};
  std::chrono::nanoseconds decode{0};
  /// From the end of encoding to the response being handed to the caller, minus decode.
  std::chrono::nanoseconds wire_wait{0};
};

struct HandleCacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
};

struct SessionStats {
  RequestTiming timing;
  HandleCacheStats cache;
  std::uint64_t max_in_flight = 0;
  std::uint64_t dispatch_overflows = 0;
  std::uint64_t orphan_samples = 0;
  std::uint64_t listener_errors = 0;
};

namespace detail {
struct SessionCore;
struct SubscriptionState;
}  // namespace detail

class Session;

/// Handle to an active notification subscription.
class Subscription {
 public:
  Subscription() = default;

  std::uint32_t handle() const;
  const std::string& symbol() const;
  const ams::NotificationAttrib& attrib() const;
  bool active() const;
  std::uint64_t delivered() const;
  /// Deliveries whose timestamp was older than the previous one.
  std::uint64_t out_of_order() const;
  std::uint64_t listener_errors() const;

  /// Idempotent; equivalent to Session::unsubscribe.
  void unsubscribe();

  explicit operator bool() const { return state_ != nullptr; }

 private:
  friend class Session;
  friend struct detail::SessionCore;
  std::shared_ptr<detail::SubscriptionState> state_;
  std::weak_ptr<detail::SessionCore> core_;
};

/// One AMS/TCP connection to an ADS server. Safe to share between threads:
/// concurrent requests are multiplexed by invoke id.
class Session {
 public:
  /// Throws ConnectError.
  static std::unique_ptr<Session> connect(const ClientConfig& config);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const ClientConfig& config() const;
  bool connected() const;

  /// Installs a frame observer. Call before issuing requests.
  void set_wire_tap(WireTap tap);

  /// Sends one request and waits for its response. Throws AdsError on a
  /// nonzero header error code or payload result, TimeoutError, DisconnectedError.
  ams::Payload request(ams::Payload request);

  /// Cached symbol handle; the first call per name goes to the wire.
  std::uint32_t resolve_handle(std::string_view name);
  /// Releases the server handle and drops the cache entry.
  void release_handle(std::string_view name);

  ams::Bytes read_raw(std::string_view name, std::uint32_t length);
  void write_raw(std::string_view name, std::span<const std::uint8_t> data);
  TypedValue read_value(std::string_view name, plc::PlcType type);
  void write_value(std::string_view name, const TypedValue& value);

  /// The listener runs on the session's dispatch thread, in stamp order.
  Subscription subscribe(std::string_view name, const ams::NotificationAttrib& attrib,
                         Listener listener);
  void unsubscribe(Subscription& subscription);

  SessionStats stats() const;
  /// Number of requests awaiting a response right now.
  std::uint64_t in_flight() const;
  void reset_stats();

 private:
  explicit Session(std::shared_ptr<detail::SessionCore> core);
  std::shared_ptr<detail::SessionCore> core_;
};

}  // namespace adsbench::client
