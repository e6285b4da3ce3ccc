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

#include "adsbench/plc/server.hpp"

#include <sys/prctl.h>

#include <array>
#include <chrono>
#include <deque>

#include <fmt/format.h>

#include "adsbench/ams/codec.hpp"
#include "adsbench/ams/error_codes.hpp"
#include "adsbench/log.hpp"

namespace adsbench::plc {

using namespace ams::ads_error;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::string_view kDeviceName = "adsbench plc-sim";
constexpr std::uint16_t kAdsStateRun = 5;

std::uint64_t filetime_now() {
  const auto since_unix = std::chrono::duration_cast<Ticks>(
      std::chrono::system_clock::now().time_since_epoch());
  return kUnixEpochFiletime + static_cast<std::uint64_t>(since_unix.count());
}

}  // namespace

std::optional<ClockMode> parse_clock_mode(std::string_view text) {
  if (text == "real") return ClockMode::kReal;
  if (text == "virtual") return ClockMode::kVirtual;
  return std::nullopt;
}

std::string_view to_string(ClockMode mode) {
  return mode == ClockMode::kReal ? "real" : "virtual";
}

struct Server::Connection {
  net::Socket socket;
  SessionId session = 0;
  std::string peer;

  std::mutex write_mutex;

  std::mutex queue_mutex;
  std::condition_variable queue_cv;
  std::condition_variable space_cv;
  std::deque<ams::NotificationStream> queue;
  ams::Address client_address;
  bool closed = false;  // guarded by queue_mutex

  std::atomic<bool> finished{false};
  std::thread reader;
  std::thread writer;
};

Server::Server(PlcConfig plc, ServerConfig config)
    : config_{std::move(config)}, runtime_{std::move(plc)} {}

Server::~Server() { stop(); }

void Server::start() {
  if (started_) return;
  listener_ = std::make_unique<net::Listener>(config_.bind_address, config_.tcp_port);
  port_ = listener_->port();
  {
    std::lock_guard lock{runtime_mutex_};
    now_ = config_.clock == ClockMode::kVirtual ? kVirtualEpoch : filetime_now();
  }
  stopping_ = false;
  started_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
  task_thread_ = std::thread(
      [this] { config_.clock == ClockMode::kReal ? task_loop_real() : task_loop_virtual(); });
  log::info("server_start", {{"bind", config_.bind_address},
                             {"port", std::to_string(port_)},
                             {"net_id", config_.net_id.to_string()},
                             {"ads_port", std::to_string(config_.ads_port)},
                             {"clock", std::string{to_string(config_.clock)}},
                             {"cycle_us", fmt::format("{:.1f}",
                                                      runtime_.config().task().cycle_time.count() /
                                                          10.0)},
                             {"symbols", std::to_string(runtime_.config().symbols().size())}});
}

void Server::stop() {
  if (!started_) return;
  stopping_ = true;
  {
    std::lock_guard lock{task_mutex_};
  }
  task_cv_.notify_all();
  {
    std::lock_guard lock{connections_mutex_};
    for (auto& [id, conn] : connections_) {
      {
        std::lock_guard q{conn->queue_mutex};
        conn->closed = true;
      }
      conn->queue_cv.notify_all();
      conn->space_cv.notify_all();
      conn->socket.shutdown();
    }
  }
  if (task_thread_.joinable()) task_thread_.join();
  if (accept_thread_.joinable()) accept_thread_.join();
  reap(true);
  listener_.reset();
  started_ = false;
  log::info("server_stop", {{"cycles", std::to_string(cycles_.load())},
                            {"dropped_streams", std::to_string(dropped_streams_.load())}});
}

ServerStats Server::stats() const {
  ServerStats s;
  s.cycles = cycles_.load();
  s.dropped_streams = dropped_streams_.load();
  s.dropped_samples = dropped_samples_.load();
  s.notification_frames = notification_frames_.load();
  s.connections_accepted = accepted_.load();
  s.registrations = registrations_.load();
  {
    std::lock_guard lock{connections_mutex_};
    s.active_connections = connections_.size();
  }
  const auto n = lateness_samples_.load();
  if (n > 0) s.mean_lateness_us = static_cast<double>(lateness_sum_ns_.load()) / n / 1000.0;
  s.max_lateness_us = static_cast<double>(lateness_max_ns_.load()) / 1000.0;
  s.overrun_cycles = overruns_.load();
  s.faulted = faulted_.load();
  return s;
}

std::unique_lock<std::mutex> Server::lock_runtime() {
  runtime_waiters_.fetch_add(1, std::memory_order_relaxed);
  std::unique_lock lock{runtime_mutex_};
  runtime_waiters_.fetch_sub(1, std::memory_order_relaxed);
  return lock;
}

void Server::note_registrations() {
  // Caller holds runtime_mutex_.
  {
    std::lock_guard lock{task_mutex_};
    registrations_ = runtime_.registration_count();
  }
  task_cv_.notify_all();
}

void Server::invalidate_handles() {
  auto lock = lock_runtime();
  runtime_.invalidate_handles();
  log::info("handles_invalidated");
}

ams::Bytes Server::symbol_value(std::string_view name) {
  auto lock = lock_runtime();
  auto v = runtime_.value(name);
  return ams::Bytes(v.begin(), v.end());
}

void Server::accept_loop() {
  while (!stopping_) {
    auto sock = listener_->accept(std::chrono::milliseconds{50});
    reap(false);
    if (!sock) continue;

    auto conn = std::make_shared<Connection>();
    conn->socket = std::move(*sock);
    conn->peer = fmt::format("fd{}", conn->socket.fd());
    {
      auto lock = lock_runtime();
      conn->session = runtime_.open_session();
    }
    {
      std::lock_guard lock{connections_mutex_};
      connections_.emplace(conn->session, conn);
    }
    ++accepted_;
    log::info("connect", {{"session", std::to_string(conn->session)}, {"peer", conn->peer}});
    conn->writer = std::thread([this, conn] { writer_loop(conn); });
    conn->reader = std::thread([this, conn] { reader_loop(conn); });
  }
}

void Server::reap(bool all) {
  std::vector<std::shared_ptr<Connection>> done;
  {
    std::lock_guard lock{connections_mutex_};
    for (auto it = connections_.begin(); it != connections_.end();) {
      if (all || it->second->finished) {
        done.push_back(it->second);
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& conn : done) {
    if (conn->reader.joinable()) conn->reader.join();
    if (conn->writer.joinable()) conn->writer.join();
  }
}

void Server::close_connection(Connection& conn) {
  {
    std::lock_guard lock{conn.queue_mutex};
    conn.closed = true;
  }
  conn.queue_cv.notify_all();
  conn.space_cv.notify_all();
  conn.socket.shutdown();
}

void Server::reader_loop(const std::shared_ptr<Connection>& conn) {
  ams::FrameSplitter splitter;
  std::array<std::uint8_t, 64 * 1024> buffer{};
  ams::Bytes out;
  std::string reason = "peer closed";
  try {
    while (!stopping_) {
      const auto n = conn->socket.recv_some(buffer);
      if (n == 0) break;
      splitter.append(std::span{buffer}.first(n));
      out.clear();
      while (auto frame = splitter.next()) {
        if (frame->header.is_response() ||
            frame->header.command == ams::CommandId::kDeviceNotification) {
          log::warn("unexpected_frame", {{"session", std::to_string(conn->session)},
                                         {"command", std::string{command_name(frame->header.command)}}});
          continue;
        }
        auto response = handle_request(*conn, *frame);
        ams::encode_frame_into(response.header, response.payload, out);
      }
      if (!out.empty()) {
        std::lock_guard lock{conn->write_mutex};
        conn->socket.send_all(out);
      }
    }
  } catch (const ams::ProtocolError& e) {
    reason = e.what();
    log::warn("protocol_error", {{"session", std::to_string(conn->session)}, {"reason", reason}});
  } catch (const net::NetError& e) {
    reason = e.what();
  }

  close_connection(*conn);
  {
    auto lock = lock_runtime();
    runtime_.close_session(conn->session);
    note_registrations();
  }
  log::info("disconnect", {{"session", std::to_string(conn->session)}, {"reason", reason}});
  conn->finished = true;
}

void Server::writer_loop(const std::shared_ptr<Connection>& conn) {
  std::deque<ams::NotificationStream> batch;
  ams::Bytes out;
  while (true) {
    ams::Address target;
    {
      std::unique_lock lock{conn->queue_mutex};
      conn->queue_cv.wait(lock, [&] { return conn->closed || !conn->queue.empty(); });
      if (conn->closed) return;
      batch.swap(conn->queue);
      target = conn->client_address;
    }
    conn->space_cv.notify_all();

    out.clear();
    ams::Header header;
    header.target = target;
    header.source = ams_address();
    header.command = ams::CommandId::kDeviceNotification;
    header.state_flags = ams::state_flags::kRequest;
    for (auto& stream : batch) {
      ams::encode_frame_into(header, ams::DeviceNotification{std::move(stream)}, out);
    }
    const auto frames = batch.size();
    batch.clear();
    try {
      std::lock_guard lock{conn->write_mutex};
      conn->socket.send_all(out);
      notification_frames_ += frames;
    } catch (const net::NetError&) {
      close_connection(*conn);
      return;
    }
  }
}

void Server::deliver(std::vector<Delivery>&& deliveries) {
  for (auto& d : deliveries) {
    std::shared_ptr<Connection> conn;
    {
      std::lock_guard lock{connections_mutex_};
      auto it = connections_.find(d.session);
      if (it == connections_.end()) continue;
      conn = it->second;
    }
    {
      std::unique_lock lock{conn->queue_mutex};
      if (config_.clock == ClockMode::kVirtual) {
        conn->space_cv.wait(lock, [&] {
          return conn->closed || stopping_ ||
                 conn->queue.size() < config_.notification_queue_capacity;
        });
        if (conn->closed || stopping_) continue;
      } else if (conn->queue.size() >= config_.notification_queue_capacity) {
        const auto lost = conn->queue.front().sample_count();
        conn->queue.pop_front();
        const auto total = ++dropped_streams_;
        dropped_samples_ += lost;
        if (total == 1 || total % 1000 == 0) {
          log::warn("notification_drop", {{"session", std::to_string(d.session)},
                                          {"dropped_streams", std::to_string(total)},
                                          {"capacity",
                                           std::to_string(config_.notification_queue_capacity)}});
        }
      }
      if (conn->closed) continue;
      conn->queue.push_back(std::move(d.stream));
    }
    conn->queue_cv.notify_one();
  }
}

void Server::task_loop_real() {
  ::prctl(PR_SET_TIMERSLACK, 1UL, 0, 0, 0);
  const auto cycle = runtime_.config().task().cycle_time;
  const auto period = std::chrono::duration_cast<Clock::duration>(cycle);
  std::uint64_t start_time = 0;
  {
    std::lock_guard lock{runtime_mutex_};
    start_time = now_;
  }
  auto next = Clock::now() + period;
  std::uint64_t tick = 0;
  while (!stopping_) {
    {
      std::unique_lock lock{task_mutex_};
      if (task_cv_.wait_until(lock, next, [&] { return stopping_.load(); })) break;
    }
    const auto lateness = Clock::now() - next;
    const auto late_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(lateness).count();
    lateness_sum_ns_ += late_ns;
    ++lateness_samples_;
    if (late_ns > lateness_max_ns_) lateness_max_ns_ = late_ns;
    if (lateness > period) ++overruns_;

    ++tick;
    std::vector<Delivery> deliveries;
    try {
      auto lock = lock_runtime();
      now_ = start_time + tick * static_cast<std::uint64_t>(cycle.count());
      deliveries = runtime_.run_cycle(now_);
    } catch (const SimulatorFault& e) {
      faulted_ = true;
      log::error("fault", {{"reason", e.what()}, {"cycle", std::to_string(tick)}});
      return;
    }
    ++cycles_;
    deliver(std::move(deliveries));
    next += period;
  }
}

void Server::task_loop_virtual() {
  const auto cycle = static_cast<std::uint64_t>(runtime_.config().task().cycle_time.count());
  while (!stopping_) {
    if (registrations_.load() == 0) {
      std::unique_lock lock{task_mutex_};
      task_cv_.wait(lock, [&] { return stopping_ || registrations_.load() > 0; });
      if (stopping_) break;
    }
    std::vector<Delivery> deliveries;
    try {
      std::lock_guard lock{runtime_mutex_};
      now_ += cycle;
      deliveries = runtime_.run_cycle(now_);
    } catch (const SimulatorFault& e) {
      faulted_ = true;
      log::error("fault", {{"reason", e.what()}});
      return;
    }
    ++cycles_;
    deliver(std::move(deliveries));
    if (runtime_waiters_.load(std::memory_order_relaxed) > 0) std::this_thread::yield();
  }
}

struct Server::RequestVisitor {
  Server& self;
  Connection& conn;
  const ams::Header& header;

  ams::Payload operator()(const ams::ReadDeviceInfoRequest&) const {
    return ams::ReadDeviceInfoResponse{kNoError, 0, 1, 0, std::string{kDeviceName}};
  }
  ams::Payload operator()(const ams::ReadStateRequest&) const {
    return ams::ReadStateResponse{kNoError, kAdsStateRun, 0};
  }
  ams::Payload operator()(const ams::WriteControlRequest&) const {
    return ams::WriteControlResponse{kServiceNotSupported};
  }
  ams::Payload operator()(const ams::ReadRequest& r) const {
    if (r.index_group == ams::index_group::kSimDiagnostics) {
      if (r.index_offset != 0) return ams::ReadResponse{kInvalidIndexOffset, {}};
      if (r.read_length < 8) return ams::ReadResponse{kInvalidSize, {}};
      ams::Bytes data;
      ams::ByteWriter w{data};
      w.put(self.dropped_streams_.load());
      return ams::ReadResponse{kNoError, std::move(data)};
    }
    auto lock = self.lock_runtime();
    auto result = self.runtime_.read(conn.session, r.index_group, r.index_offset, r.read_length);
    return ams::ReadResponse{result.code, std::move(result.value)};
  }
  ams::Payload operator()(const ams::WriteRequest& r) const {
    auto lock = self.lock_runtime();
    return ams::WriteResponse{
        self.runtime_.write(conn.session, r.index_group, r.index_offset, r.data)};
  }
  ams::Payload operator()(const ams::ReadWriteRequest& r) const {
    auto lock = self.lock_runtime();
    auto result = self.runtime_.read_write(conn.session, r.index_group, r.index_offset,
                                           r.read_length, r.write_data);
    return ams::ReadWriteResponse{result.code, std::move(result.value)};
  }
  ams::Payload operator()(const ams::AddNotificationRequest& r) const {
    {
      std::lock_guard q{conn.queue_mutex};
      conn.client_address = header.source;
    }
    auto lock = self.lock_runtime();
    auto result = self.runtime_.add_notification(conn.session, r, self.now_);
    if (result.ok()) self.note_registrations();
    return ams::AddNotificationResponse{result.code, result.value};
  }
  ams::Payload operator()(const ams::DeleteNotificationRequest& r) const {
    auto lock = self.lock_runtime();
    const auto code = self.runtime_.delete_notification(conn.session, r.handle);
    self.note_registrations();
    return ams::DeleteNotificationResponse{code};
  }
  // Responses and server-initiated frames are filtered out before dispatch.
  template <typename T>
  ams::Payload operator()(const T&) const {
    return ams::AmsErrorResponse{};
  }
};

ams::Frame Server::handle_request(Connection& conn, const ams::Frame& request) {
  const auto& rq = request.header;
  ams::Frame response;
  response.header.target = rq.source;
  response.header.source = rq.target;
  response.header.command = rq.command;
  response.header.state_flags = ams::state_flags::kReply;
  response.header.invoke_id = rq.invoke_id;

  const bool system_port = rq.target.port == kSystemServicePort &&
                           (rq.command == ams::CommandId::kReadDeviceInfo ||
                            rq.command == ams::CommandId::kReadState);
  if (rq.target.port != config_.ads_port && !system_port) {
    response.header.error_code = kTargetPortNotFound;
    response.payload = ams::AmsErrorResponse{};
    return response;
  }


  response.payload = std::visit(RequestVisitor{*this, conn, rq}, request.payload);
  if (std::holds_alternative<ams::AmsErrorResponse>(response.payload)) {
    response.header.error_code = kServiceNotSupported;
  }
  return response;
}

}  // namespace adsbench::plc
