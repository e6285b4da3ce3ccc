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

#include "adsbench/plc/runtime.hpp"

#include <algorithm>
#include <cstring>

#include <fmt/format.h>

#include "adsbench/ams/error_codes.hpp"

namespace adsbench::plc {

using namespace ams::ads_error;
namespace ig = ams::index_group;

namespace {

std::string_view strip_nuls(std::span<const std::uint8_t> bytes) {
  std::string_view s{reinterpret_cast<const char*>(bytes.data()), bytes.size()};
  while (!s.empty() && s.back() == '\0') s.remove_suffix(1);
  return s;
}

}  // namespace

Runtime::Runtime(PlcConfig config) : config_{std::move(config)}, memory_(config_.data_size(), 0) {
  for (const auto& op : config_.task().program) {
    const auto& name = std::visit([](const auto& o) -> const std::string& { return o.symbol; }, op);
    program_symbols_.push_back(*config_.index_of(name));
  }
}

SessionId Runtime::open_session() {
  const auto id = next_session_++;
  sessions_.emplace(id, Session{});
  return id;
}

void Runtime::close_session(SessionId session) {
  auto it = sessions_.find(session);
  if (it == sessions_.end()) return;
  registration_count_ -= it->second.registrations.size();
  sessions_.erase(it);
}

std::span<std::uint8_t> Runtime::bytes_of(std::size_t symbol) {
  const auto& info = config_.symbols()[symbol];
  return std::span<std::uint8_t>{memory_}.subspan(info.index_offset, info.size);
}

std::span<const std::uint8_t> Runtime::bytes_of(std::size_t symbol) const {
  const auto& info = config_.symbols()[symbol];
  return std::span<const std::uint8_t>{memory_}.subspan(info.index_offset, info.size);
}

std::span<const std::uint8_t> Runtime::value(std::string_view name) const {
  auto idx = config_.index_of(name);
  if (!idx) throw std::out_of_range(fmt::format("unknown symbol '{}'", name));
  return bytes_of(*idx);
}

std::optional<std::size_t> Runtime::symbol_for_handle(const Session& s,
                                                      std::uint32_t handle) const {
  auto it = s.handles.find(handle);
  if (it == s.handles.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Runtime::symbol_at_offset(std::uint32_t offset) const {
  const auto& syms = config_.symbols();
  auto it = std::lower_bound(syms.begin(), syms.end(), offset,
                             [](const SymbolInfo& s, std::uint32_t o) { return s.index_offset < o; });
  // Zero-sized symbols do not exist, so offsets are strictly increasing.
  if (it == syms.end() || it->index_offset != offset) return std::nullopt;
  return static_cast<std::size_t>(it - syms.begin());
}

AdsResult<std::uint32_t> Runtime::lookup_handle(SessionId session, std::string_view name) {
  auto& s = sessions_.at(session);
  auto idx = config_.index_of(name);
  if (!idx) return AdsResult<std::uint32_t>::failure(kSymbolNotFound);
  std::string key{name};
  if (auto it = s.handle_by_name.find(key); it != s.handle_by_name.end()) {
    return {kNoError, it->second};
  }
  const auto handle = s.next_symbol_handle++;
  s.handles.emplace(handle, *idx);
  s.handle_by_name.emplace(std::move(key), handle);
  return {kNoError, handle};
}

std::uint32_t Runtime::release_handle(SessionId session, std::uint32_t handle) {
  auto& s = sessions_.at(session);
  auto it = s.handles.find(handle);
  if (it == s.handles.end()) return kSymbolNotFound;
  std::erase_if(s.handle_by_name, [&](const auto& kv) { return kv.second == handle; });
  s.handles.erase(it);
  return kNoError;
}

void Runtime::invalidate_handles() {
  for (auto& [id, s] : sessions_) {
    s.handles.clear();
    s.handle_by_name.clear();
  }
}

AdsResult<ams::Bytes> Runtime::read(SessionId session, std::uint32_t index_group,
                                    std::uint32_t index_offset, std::uint32_t length) const {
  using R = AdsResult<ams::Bytes>;
  const auto& s = sessions_.at(session);
  switch (index_group) {
    case ig::kSymbolValueByHandle: {
      auto sym = symbol_for_handle(s, index_offset);
      if (!sym) return R::failure(kSymbolNotFound);
      auto bytes = bytes_of(*sym);
      if (length > bytes.size()) return R::failure(kInvalidSize);
      return {kNoError, ams::Bytes(bytes.begin(), bytes.begin() + length)};
    }
    case ig::kPlcDataArea: {
      if (index_offset > memory_.size()) return R::failure(kInvalidIndexOffset);
      if (length > memory_.size() - index_offset) return R::failure(kInvalidSize);
      auto first = memory_.begin() + index_offset;
      return {kNoError, ams::Bytes(first, first + length)};
    }
    default:
      return R::failure(kInvalidIndexGroup);
  }
}

std::uint32_t Runtime::write(SessionId session, std::uint32_t index_group,
                             std::uint32_t index_offset, std::span<const std::uint8_t> data) {
  auto& s = sessions_.at(session);
  switch (index_group) {
    case ig::kSymbolValueByHandle: {
      auto sym = symbol_for_handle(s, index_offset);
      if (!sym) return kSymbolNotFound;
      auto bytes = bytes_of(*sym);
      if (data.size() != bytes.size()) return kInvalidSize;
      std::copy(data.begin(), data.end(), bytes.begin());
      return kNoError;
    }
    case ig::kSymbolReleaseHandle: {
      if (data.size() != 4) return kInvalidSize;
      const std::uint32_t handle = static_cast<std::uint32_t>(data[0]) |
                                   (static_cast<std::uint32_t>(data[1]) << 8) |
                                   (static_cast<std::uint32_t>(data[2]) << 16) |
                                   (static_cast<std::uint32_t>(data[3]) << 24);
      return release_handle(session, handle);
    }
    case ig::kPlcDataArea: {
      if (index_offset > memory_.size()) return kInvalidIndexOffset;
      if (data.size() > memory_.size() - index_offset) return kInvalidSize;
      std::copy(data.begin(), data.end(), memory_.begin() + index_offset);
      return kNoError;
    }
    default:
      return kInvalidIndexGroup;
  }
}

AdsResult<ams::Bytes> Runtime::read_write(SessionId session, std::uint32_t index_group,
                                          std::uint32_t /*index_offset*/,
                                          std::uint32_t read_length,
                                          std::span<const std::uint8_t> write_data) {
  using R = AdsResult<ams::Bytes>;
  if (index_group != ig::kSymbolHandleByName) return R::failure(kInvalidIndexGroup);
  if (read_length < 4) return R::failure(kInvalidSize);
  auto handle = lookup_handle(session, strip_nuls(write_data));
  if (!handle.ok()) return R::failure(handle.code);
  ams::Bytes out;
  ams::ByteWriter w{out};
  w.put(handle.value);
  if (read_length == 4) return {kNoError, std::move(out)};

  // Larger read lengths get the extended reply some clients rely on:
  // handle, size, type flags, type name length, NUL-terminated type name.
  const auto& info = config_.symbols()[*symbol_for_handle(sessions_.at(session), handle.value)];
  const auto type_name = info.type.to_string();
  w.put(info.size);
  w.put(std::uint32_t{0});
  w.put(static_cast<std::uint16_t>(type_name.size()));
  w.put_bytes({reinterpret_cast<const std::uint8_t*>(type_name.data()), type_name.size()});
  w.put(std::uint8_t{0});
  if (out.size() > read_length) out.resize(read_length);
  return {kNoError, std::move(out)};
}

AdsResult<std::uint32_t> Runtime::add_notification(SessionId session,
                                                   const ams::AddNotificationRequest& request,
                                                   std::uint64_t now) {
  using R = AdsResult<std::uint32_t>;
  auto& s = sessions_.at(session);
  std::optional<std::size_t> sym;
  if (request.index_group == ig::kSymbolValueByHandle) {
    sym = symbol_for_handle(s, request.index_offset);
  } else if (request.index_group == ig::kPlcDataArea) {
    sym = symbol_at_offset(request.index_offset);
  }
  if (!sym) return R::failure(kSymbolNotFound);
  const auto mode = request.attrib.trans_mode;
  if (mode != ams::TransMode::kOnChange && mode != ams::TransMode::kCyclic) {
    return R::failure(kTransModeNotSupported);
  }
  if (request.attrib.length != config_.symbols()[*sym].size) return R::failure(kInvalidSize);

  Registration reg;
  reg.symbol = *sym;
  reg.attrib = request.attrib;
  auto current = bytes_of(*sym);
  reg.last_sent = ams::Bytes(current.begin(), current.end());
  reg.last_check = now;
  reg.pending.emplace_back(now, *reg.last_sent);

  const auto handle = s.next_notification_handle++;
  s.registrations.emplace(handle, std::move(reg));
  ++registration_count_;
  return {kNoError, handle};
}

std::uint32_t Runtime::delete_notification(SessionId session, std::uint32_t handle) {
  auto& s = sessions_.at(session);
  if (s.registrations.erase(handle) == 0) return kNotifyHandleInvalid;
  --registration_count_;
  return kNoError;
}

void Runtime::execute(const ProgramOp& op) {
  const auto& name = std::visit([](const auto& o) -> const std::string& { return o.symbol; }, op);
  auto idx = config_.index_of(name);
  if (!idx) throw SimulatorFault(fmt::format("program references unknown symbol '{}'", name));
  apply(op, *idx);
}

void Runtime::apply(const ProgramOp& op, std::size_t symbol) {
  const auto& info = config_.symbols()[symbol];
  const auto& name = info.name;
  auto bytes = bytes_of(symbol);
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Increment>) {
          // Little-endian +1 with carry wraps at the type width.
          for (auto& b : bytes) {
            if (++b != 0) break;
          }
        } else if constexpr (std::is_same_v<T, op::Toggle>) {
          if (info.type.element == ScalarType::kBool) {
            bytes[0] = bytes[0] == 0 ? 1 : 0;
          } else {
            for (auto& b : bytes) b = static_cast<std::uint8_t>(~b);
          }
        } else {
          if (o.value.size() != bytes.size()) {
            throw SimulatorFault(fmt::format("set of '{}' with {} bytes", name, o.value.size()));
          }
          std::copy(o.value.begin(), o.value.end(), bytes.begin());
        }
      },
      op);
}

void Runtime::sample(Registration& reg, std::uint64_t now) {
  const auto interval = static_cast<std::uint64_t>(reg.attrib.cycle_time);
  if (reg.last_check && interval > 0 && now - *reg.last_check < interval) return;
  reg.last_check = now;
  auto current = bytes_of(reg.symbol);
  if (reg.attrib.trans_mode == ams::TransMode::kOnChange && reg.last_sent &&
      std::equal(current.begin(), current.end(), reg.last_sent->begin(), reg.last_sent->end())) {
    return;
  }
  reg.last_sent = ams::Bytes(current.begin(), current.end());
  reg.pending.emplace_back(now, *reg.last_sent);
}

std::vector<Delivery> Runtime::run_cycle(std::uint64_t now) {
  const auto& program = config_.task().program;
  for (std::size_t i = 0; i < program.size(); ++i) apply(program[i], program_symbols_[i]);
  ++cycle_count_;
  for (auto& [id, s] : sessions_) {
    for (auto& [handle, reg] : s.registrations) sample(reg, now);
  }
  return flush_due(now);
}

std::vector<Delivery> Runtime::flush_due(std::uint64_t now) {
  std::vector<Delivery> out;
  struct Item {
    std::uint64_t timestamp;
    std::uint32_t handle;
    ams::Bytes data;
  };
  std::vector<Item> items;
  for (auto& [id, s] : sessions_) {
    items.clear();
    for (auto& [handle, reg] : s.registrations) {
      if (reg.pending.empty()) continue;
      const auto oldest = reg.pending.front().first;
      const auto max_delay = static_cast<std::uint64_t>(reg.attrib.max_delay);
      if (max_delay != 0 && now - oldest < max_delay) continue;
      for (auto& [ts, data] : reg.pending) items.push_back({ts, handle, std::move(data)});
      reg.pending.clear();
    }
    if (items.empty()) continue;
    // Registrations were visited in handle order and each one's samples are
    // already in time order, so a stable sort keeps per-handle order.
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) { return a.timestamp < b.timestamp; });
    Delivery d{id, {}};
    for (auto& item : items) {
      if (d.stream.stamps.empty() || d.stream.stamps.back().timestamp != item.timestamp) {
        d.stream.stamps.push_back({item.timestamp, {}});
      }
      d.stream.stamps.back().samples.push_back({item.handle, std::move(item.data)});
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace adsbench::plc
