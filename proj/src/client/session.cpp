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

#include "adsbench/client/session.hpp"

#include <array>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "adsbench/ams/codec.hpp"
#include "adsbench/ams/error_codes.hpp"
#include "adsbench/log.hpp"
#include "adsbench/net.hpp"

namespace adsbench::client {

using Clock = std::chrono::steady_clock;
using namespace ams::ads_error;
namespace ig = ams::index_group;

AdsError::AdsError(std::uint32_t code, const std::string& context)
    : std::runtime_error(fmt::format("{}: ADS error 0x{:x} ({})", context, code,
                                     ams::ads_error_text(code))),
      code_{code} {}

TimeoutError::TimeoutError(std::uint32_t invoke_id)
    : AdsError(kClientSyncTimeout, fmt::format("request with invoke id {}", invoke_id)),
      invoke_id_{invoke_id} {}

bool is_handle_error(std::uint32_t code) {
  return code == kSymbolNotFound || code == kNotifyHandleInvalid;
}

namespace detail {

struct SubscriptionState {
  std::uint32_t handle = 0;
  std::string symbol;
  ams::NotificationAttrib attrib;
  Listener listener;

  std::mutex callback_mutex;
  std::atomic<bool> active{true};
  std::atomic<std::uint64_t> delivered{0};
  std::atomic<std::uint64_t> out_of_order{0};
  std::atomic<std::uint64_t> errors{0};
  // Dispatcher thread only.
  std::optional<std::uint64_t> last_timestamp;
};

namespace {

struct Pending {
  bool done = false;
  std::optional<ams::Frame> frame;
  std::exception_ptr error;
  Clock::time_point completed;
  std::chrono::nanoseconds decode{0};
  std::function<void(const ams::Frame&)> on_response;
  std::condition_variable cv;
};

struct DispatchItem {
  std::shared_ptr<SubscriptionState> subscription;
  std::uint64_t timestamp = 0;
  ams::Bytes data;
};

struct CacheEntry {
  std::uint32_t handle = 0;
  std::optional<std::uint32_t> size;
};

std::uint32_t response_result(const ams::Payload& payload) {
  return std::visit(
      [](const auto& p) -> std::uint32_t {
        if constexpr (requires { p.result; }) {
          return p.result;
        } else {
          return 0;
        }
      },
      payload);
}

void atomic_max(std::atomic<std::uint64_t>& target, std::uint64_t value) {
  auto cur = target.load(std::memory_order_relaxed);
  while (value > cur && !target.compare_exchange_weak(cur, value)) {
  }
}

}  // namespace

struct SessionCore : std::enable_shared_from_this<SessionCore> {
  ClientConfig config;
  net::Socket socket;
  std::mutex write_mutex;
  WireTap tap;

  std::mutex mutex;
  std::unordered_map<std::uint32_t, std::shared_ptr<Pending>> pending;
  bool connected = true;
  std::string disconnect_reason;
  std::atomic<std::uint32_t> next_invoke{1};
  std::atomic<std::uint64_t> in_flight{0};
  std::atomic<std::uint64_t> max_in_flight{0};

  std::atomic<std::uint64_t> requests{0};
  std::atomic<std::int64_t> encode_ns{0};
  std::atomic<std::int64_t> decode_ns{0};
  std::atomic<std::int64_t> wire_ns{0};

  std::mutex cache_mutex;
  std::unordered_map<std::string, CacheEntry> cache;
  HandleCacheStats cache_stats;  // guarded by cache_mutex

  std::mutex subs_mutex;
  std::unordered_map<std::uint32_t, std::shared_ptr<SubscriptionState>> subs;

  std::mutex dispatch_mutex;
  std::condition_variable dispatch_cv;
  std::deque<DispatchItem> dispatch_queue;
  bool stop_dispatch = false;
  std::atomic<std::uint64_t> dispatch_overflows{0};
  std::atomic<std::uint64_t> orphan_samples{0};
  std::atomic<std::uint64_t> listener_errors{0};

  std::thread receiver;
  std::thread dispatcher;

  ~SessionCore() { shutdown(); }

  void start() {
    receiver = std::thread([this] { receive_loop(); });
    dispatcher = std::thread([this] { dispatch_loop(); });
  }

  void shutdown() {
    socket.shutdown();
    if (receiver.joinable()) receiver.join();
    {
      std::lock_guard lock{dispatch_mutex};
      stop_dispatch = true;
    }
    dispatch_cv.notify_all();
    if (dispatcher.joinable()) dispatcher.join();
    socket.close();
  }

  ams::Payload request(ams::Payload payload,
                       std::function<void(const ams::Frame&)> on_response = {}) {
    const auto kind = ams::payload_kind(payload);
    if (!kind || kind->response) throw std::invalid_argument("request() needs a request payload");

    ams::Header header;
    header.target = config.target;
    header.source = config.source;
    header.command = kind->command;
    header.state_flags = ams::state_flags::kRequest;
    header.invoke_id = next_invoke.fetch_add(1);

    const auto t0 = Clock::now();
    const auto bytes = ams::encode_frame(header, payload);
    const auto t1 = Clock::now();

    auto p = std::make_shared<Pending>();
    p->on_response = std::move(on_response);
    {
      std::lock_guard lock{mutex};
      if (!connected) throw DisconnectedError("session is disconnected: " + disconnect_reason);
      pending.emplace(header.invoke_id, p);
    }
    atomic_max(max_in_flight, ++in_flight);

    if (tap) tap(WireDirection::kSent, bytes);
    try {
      std::lock_guard lock{write_mutex};
      socket.send_all(bytes);
    } catch (const net::NetError& e) {
      std::lock_guard lock{mutex};
      pending.erase(header.invoke_id);
      --in_flight;
      throw DisconnectedError(e.what());
    }

    {
      std::unique_lock lock{mutex};
      if (!p->cv.wait_for(lock, config.request_timeout, [&] { return p->done; })) {
        pending.erase(header.invoke_id);
        --in_flight;
        throw TimeoutError(header.invoke_id);
      }
    }
    --in_flight;
    if (p->error) std::rethrow_exception(p->error);

    ++requests;
    encode_ns += std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    decode_ns += p->decode.count();
    wire_ns += (std::chrono::duration_cast<std::chrono::nanoseconds>(p->completed - t1) -
                p->decode)
                   .count();

    auto& frame = *p->frame;
    const auto context = std::string{ams::command_name(header.command)};
    if (frame.header.error_code != 0) throw AdsError(frame.header.error_code, context);
    if (const auto result = response_result(frame.payload); result != 0) {
      throw AdsError(result, context);
    }
    return std::move(frame.payload);
  }

  void fail_all(const std::string& reason) {
    std::lock_guard lock{mutex};
    connected = false;
    disconnect_reason = reason;
    for (auto& [id, p] : pending) {
      p->error = std::make_exception_ptr(DisconnectedError("connection lost: " + reason));
      p->done = true;
      p->cv.notify_all();
    }
    pending.clear();
  }

  void handle_notification(const ams::DeviceNotification& n) {
    std::vector<DispatchItem> items;
    items.reserve(n.stream.sample_count());
    {
      std::lock_guard lock{subs_mutex};
      for (const auto& stamp : n.stream.stamps) {
        for (const auto& sample : stamp.samples) {
          auto it = subs.find(sample.handle);
          if (it == subs.end()) {
            ++orphan_samples;
            continue;
          }
          items.push_back({it->second, stamp.timestamp, sample.data});
        }
      }
    }
    if (items.empty()) return;
    std::size_t overflow = 0;
    {
      std::lock_guard lock{dispatch_mutex};
      for (auto& item : items) {
        if (dispatch_queue.size() >= config.dispatch_queue_capacity) {
          ++overflow;
          continue;
        }
        dispatch_queue.push_back(std::move(item));
      }
    }
    dispatch_cv.notify_one();
    if (overflow > 0) {
      const auto total = dispatch_overflows += overflow;
      log::warn("dispatch_overflow", {{"dropped", std::to_string(overflow)},
                                      {"total", std::to_string(total)}});
    }
  }

  void handle_response(ams::Frame&& frame, std::chrono::nanoseconds decode) {
    std::shared_ptr<Pending> p;
    {
      std::lock_guard lock{mutex};
      auto it = pending.find(frame.header.invoke_id);
      if (it == pending.end()) {
        log::event(log::Level::kDebug, "late_response",
                   {{"invoke_id", std::to_string(frame.header.invoke_id)}});
        return;
      }
      p = it->second;
      pending.erase(it);
    }
    if (p->on_response) p->on_response(frame);
    std::lock_guard lock{mutex};
    p->frame = std::move(frame);
    p->decode = decode;
    p->completed = Clock::now();
    p->done = true;
    p->cv.notify_all();
  }

  void receive_loop() {
    ams::Bytes buffer;
    std::size_t read_pos = 0;
    std::array<std::uint8_t, 64 * 1024> chunk{};
    std::string reason = "peer closed the connection";
    try {
      while (true) {
        const auto n = socket.recv_some(chunk);
        if (n == 0) break;
        if (read_pos == buffer.size()) {
          buffer.clear();
          read_pos = 0;
        }
        buffer.insert(buffer.end(), chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(n));
        while (true) {
          const auto view = std::span<const std::uint8_t>{buffer}.subspan(read_pos);
          const auto t0 = Clock::now();
          auto result = ams::decode_frame(view);
          const auto decode = Clock::now() - t0;
          auto* decoded = std::get_if<ams::Decoded>(&result);
          if (decoded == nullptr) break;
          if (tap) tap(WireDirection::kReceived, view.first(decoded->consumed));
          read_pos += decoded->consumed;
          auto& frame = decoded->frame;
          if (auto* n = std::get_if<ams::DeviceNotification>(&frame.payload)) {
            handle_notification(*n);
          } else if (frame.header.is_response()) {
            handle_response(std::move(frame), decode);
          }
        }
        if (read_pos > 0 && read_pos < buffer.size() && read_pos > 256 * 1024) {
          buffer.erase(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(read_pos));
          read_pos = 0;
        }
      }
    } catch (const ams::ProtocolError& e) {
      reason = e.what();
      log::error("protocol_error", {{"reason", reason}});
    } catch (const net::NetError& e) {
      reason = e.what();
    }
    fail_all(reason);
  }

  void dispatch_loop() {
    std::deque<DispatchItem> batch;
    while (true) {
      {
        std::unique_lock lock{dispatch_mutex};
        dispatch_cv.wait(lock, [&] { return stop_dispatch || !dispatch_queue.empty(); });
        if (stop_dispatch) return;
        batch.swap(dispatch_queue);
      }
      for (auto& item : batch) {
        auto& sub = *item.subscription;
        std::lock_guard lock{sub.callback_mutex};
        if (!sub.active) continue;
        if (sub.last_timestamp && item.timestamp < *sub.last_timestamp) ++sub.out_of_order;
        sub.last_timestamp = item.timestamp;
        ++sub.delivered;
        try {
          sub.listener(item.timestamp, item.data);
        } catch (const std::exception& e) {
          ++sub.errors;
          ++listener_errors;
          log::warn("listener_error", {{"handle", std::to_string(sub.handle)}, {"what", e.what()}});
        } catch (...) {
          ++sub.errors;
          ++listener_errors;
          log::warn("listener_error", {{"handle", std::to_string(sub.handle)}});
        }
      }
      batch.clear();
    }
  }

  std::uint32_t resolve_handle(std::string_view name) {
    std::string key{name};
    {
      std::lock_guard lock{cache_mutex};
      if (auto it = cache.find(key); it != cache.end()) {
        ++cache_stats.hits;
        return it->second.handle;
      }
      ++cache_stats.misses;
    }
    ams::ReadWriteRequest rq;
    rq.index_group = ig::kSymbolHandleByName;
    rq.index_offset = 0;
    rq.read_length = 4;
    rq.write_data.assign(name.begin(), name.end());
    auto response = std::get<ams::ReadWriteResponse>(request(std::move(rq)));
    if (response.data.size() != 4) {
      throw AdsError(kInvalidSize, fmt::format("handle lookup for '{}' returned {} bytes", name,
                                               response.data.size()));
    }
    ams::ByteReader r{response.data};
    const auto handle = r.get<std::uint32_t>();
    std::lock_guard lock{cache_mutex};
    auto [it, inserted] = cache.emplace(std::move(key), CacheEntry{handle, std::nullopt});
    return it->second.handle;
  }

  void evict(std::string_view name, std::uint32_t handle) {
    std::lock_guard lock{cache_mutex};
    auto it = cache.find(std::string{name});
    if (it != cache.end() && it->second.handle == handle) {
      cache.erase(it);
      ++cache_stats.evictions;
    }
  }

  std::optional<std::uint32_t> known_size(std::string_view name) {
    std::lock_guard lock{cache_mutex};
    auto it = cache.find(std::string{name});
    if (it == cache.end()) return std::nullopt;
    return it->second.size;
  }

  void learn_size(std::string_view name, std::uint32_t handle, std::uint32_t size) {
    std::lock_guard lock{cache_mutex};
    auto it = cache.find(std::string{name});
    if (it != cache.end() && it->second.handle == handle) it->second.size = size;
  }

  /// Runs `op` with the cached handle; on a handle error evicts and retries once.
  template <typename Op>
  auto with_handle(std::string_view name, Op&& op) {
    const auto handle = resolve_handle(name);
    try {
      return op(handle);
    } catch (const AdsError& e) {
      if (dynamic_cast<const TimeoutError*>(&e) != nullptr || !is_handle_error(e.code())) throw;
      evict(name, handle);
    }
    return op(resolve_handle(name));
  }

  void unsubscribe(const std::shared_ptr<SubscriptionState>& state) {
    if (!state->active.exchange(false)) return;
    {
      std::lock_guard lock{subs_mutex};
      subs.erase(state->handle);
    }
    if (std::this_thread::get_id() != dispatcher.get_id()) {
      // Wait out a listener call that is in progress.
      std::lock_guard lock{state->callback_mutex};
    }
    try {
      request(ams::DeleteNotificationRequest{state->handle});
    } catch (const std::exception& e) {
      log::warn("unsubscribe_failed",
                {{"handle", std::to_string(state->handle)}, {"what", e.what()}});
    }
  }
};

}  // namespace detail

// Subscription ------------------------------------------------------------

std::uint32_t Subscription::handle() const { return state_->handle; }
const std::string& Subscription::symbol() const { return state_->symbol; }
const ams::NotificationAttrib& Subscription::attrib() const { return state_->attrib; }
bool Subscription::active() const { return state_ && state_->active; }
std::uint64_t Subscription::delivered() const { return state_->delivered; }
std::uint64_t Subscription::out_of_order() const { return state_->out_of_order; }
std::uint64_t Subscription::listener_errors() const { return state_->errors; }

void Subscription::unsubscribe() {
  if (!state_) return;
  if (auto core = core_.lock()) {
    core->unsubscribe(state_);
  } else {
    state_->active = false;
  }
}

// Session -----------------------------------------------------------------

Session::Session(std::shared_ptr<detail::SessionCore> core) : core_{std::move(core)} {}

Session::~Session() {
  if (core_) core_->shutdown();
}

std::unique_ptr<Session> Session::connect(const ClientConfig& config) {
  if (config.request_timeout.count() <= 0) throw std::invalid_argument("timeout must be > 0");
  auto core = std::make_shared<detail::SessionCore>();
  core->config = config;
  try {
    core->socket = net::connect_tcp(config.host, config.tcp_port, config.request_timeout);
  } catch (const net::NetError& e) {
    throw ConnectError(e.what());
  }
  core->start();
  return std::unique_ptr<Session>(new Session(std::move(core)));
}

const ClientConfig& Session::config() const { return core_->config; }

bool Session::connected() const {
  std::lock_guard lock{core_->mutex};
  return core_->connected;
}

void Session::set_wire_tap(WireTap tap) { core_->tap = std::move(tap); }

ams::Payload Session::request(ams::Payload payload) { return core_->request(std::move(payload)); }

std::uint32_t Session::resolve_handle(std::string_view name) { return core_->resolve_handle(name); }

void Session::release_handle(std::string_view name) {
  std::optional<std::uint32_t> handle;
  {
    std::lock_guard lock{core_->cache_mutex};
    auto it = core_->cache.find(std::string{name});
    if (it == core_->cache.end()) return;
    handle = it->second.handle;
    core_->cache.erase(it);
  }
  ams::Bytes data;
  ams::ByteWriter w{data};
  w.put(*handle);
  core_->request(ams::WriteRequest{ig::kSymbolReleaseHandle, 0, std::move(data)});
}

ams::Bytes Session::read_raw(std::string_view name, std::uint32_t length) {
  return core_->with_handle(name, [&](std::uint32_t handle) {
    auto response = std::get<ams::ReadResponse>(
        core_->request(ams::ReadRequest{ig::kSymbolValueByHandle, handle, length}));
    if (response.data.size() != length) {
      throw AdsError(kInvalidSize, fmt::format("read of '{}' returned {} of {} bytes", name,
                                               response.data.size(), length));
    }
    return std::move(response.data);
  });
}

void Session::write_raw(std::string_view name, std::span<const std::uint8_t> data) {
  core_->with_handle(name, [&](std::uint32_t handle) {
    core_->request(ams::WriteRequest{ig::kSymbolValueByHandle, handle,
                                     ams::Bytes(data.begin(), data.end())});
    core_->learn_size(name, handle, static_cast<std::uint32_t>(data.size()));
  });
}

TypedValue Session::read_value(std::string_view name, plc::PlcType type) {
  if (auto size = core_->known_size(name); size && *size != type.size()) {
    throw AdsError(kInvalidSize, fmt::format("'{}' is {} bytes, {} needs {}", name, *size,
                                             type.to_string(), type.size()));
  }
  return TypedValue{type, read_raw(name, type.size())};
}

void Session::write_value(std::string_view name, const TypedValue& value) {
  if (auto size = core_->known_size(name); size && *size != value.raw().size()) {
    throw AdsError(kInvalidSize, fmt::format("'{}' is {} bytes, {} needs {}", name, *size,
                                             value.type().to_string(), value.raw().size()));
  }
  write_raw(name, value.raw());
}

Subscription Session::subscribe(std::string_view name, const ams::NotificationAttrib& attrib,
                                Listener listener) {
  if (auto size = core_->known_size(name); size && *size != attrib.length) {
    throw AdsError(kInvalidSize, fmt::format("'{}' is {} bytes, subscription asks for {}", name,
                                             *size, attrib.length));
  }
  auto state = std::make_shared<detail::SubscriptionState>();
  state->symbol = std::string{name};
  state->attrib = attrib;
  state->listener = std::move(listener);

  core_->with_handle(name, [&](std::uint32_t handle) {
    ams::AddNotificationRequest rq{ig::kSymbolValueByHandle, handle, attrib};
    // Registered from the receive thread so that no sample can overtake it.
    core_->request(rq, [this, state](const ams::Frame& frame) {
      const auto* r = std::get_if<ams::AddNotificationResponse>(&frame.payload);
      if (r == nullptr || r->result != 0 || frame.header.error_code != 0) return;
      state->handle = r->handle;
      std::lock_guard lock{core_->subs_mutex};
      core_->subs[r->handle] = state;
    });
    core_->learn_size(name, handle, attrib.length);
  });

  Subscription sub;
  sub.state_ = std::move(state);
  sub.core_ = core_;
  return sub;
}

void Session::unsubscribe(Subscription& subscription) {
  if (subscription.state_) core_->unsubscribe(subscription.state_);
}

SessionStats Session::stats() const {
  SessionStats s;
  s.timing.requests = core_->requests;
  s.timing.encode = std::chrono::nanoseconds{core_->encode_ns.load()};
  s.timing.decode = std::chrono::nanoseconds{core_->decode_ns.load()};
  s.timing.wire_wait = std::chrono::nanoseconds{core_->wire_ns.load()};
  {
    std::lock_guard lock{core_->cache_mutex};
    s.cache = core_->cache_stats;
  }
  s.max_in_flight = core_->max_in_flight;
  s.dispatch_overflows = core_->dispatch_overflows;
  s.orphan_samples = core_->orphan_samples;
  s.listener_errors = core_->listener_errors;
  return s;
}

std::uint64_t Session::in_flight() const { return core_->in_flight; }

void Session::reset_stats() {
  core_->requests = 0;
  core_->encode_ns = 0;
  core_->decode_ns = 0;
  core_->wire_ns = 0;
  core_->max_in_flight = core_->in_flight.load();
  std::lock_guard lock{core_->cache_mutex};
  core_->cache_stats = {};
}

}  // namespace adsbench::client
