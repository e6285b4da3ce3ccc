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

#include "adsbench/ams/types.hpp"

#include <charconv>
#include <stdexcept>

#include "adsbench/ams/error_codes.hpp"

namespace adsbench::ams {

NetId NetId::parse(std::string_view text) {
  NetId id;
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto dot = text.find('.', start);
    const auto token = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
    if (count == 6) {
      throw std::invalid_argument("AMS NetId '" + std::string{text} +
                                  "' has more than 6 tokens");
    }
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw std::invalid_argument("AMS NetId token '" + std::string{token} + "' is not numeric");
    }
    if (value > 255) {
      throw std::invalid_argument("AMS NetId token '" + std::string{token} + "' exceeds 255");
    }
    id.octets[count++] = static_cast<std::uint8_t>(value);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (count != 6) {
    throw std::invalid_argument("AMS NetId '" + std::string{text} + "' has " +
                                std::to_string(count) + " tokens, expected 6");
  }
  return id;
}

std::string NetId::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < octets.size(); ++i) {
    if (i != 0) s.push_back('.');
    s += std::to_string(octets[i]);
  }
  return s;
}

bool is_known_command(std::uint16_t raw) { return raw >= 1 && raw <= 9; }

std::string_view command_name(CommandId id) {
  switch (id) {
    case CommandId::kReadDeviceInfo: return "ReadDeviceInfo";
    case CommandId::kRead: return "Read";
    case CommandId::kWrite: return "Write";
    case CommandId::kReadState: return "ReadState";
    case CommandId::kWriteControl: return "WriteControl";
    case CommandId::kAddDeviceNotification: return "AddDeviceNotification";
    case CommandId::kDeleteDeviceNotification: return "DeleteDeviceNotification";
    case CommandId::kDeviceNotification: return "DeviceNotification";
    case CommandId::kReadWrite: return "ReadWrite";
  }
  return "Unknown";
}

std::size_t NotificationStream::sample_count() const {
  std::size_t n = 0;
  for (const auto& stamp : stamps) n += stamp.samples.size();
  return n;
}

std::string_view ads_error_text(std::uint32_t code) {
  switch (code) {
    case ads_error::kNoError: return "no error";
    case ads_error::kTargetPortNotFound: return "target port not found";
    case ads_error::kTargetMachineNotFound: return "target machine not found";
    case ads_error::kDeviceError: return "general device error";
    case ads_error::kServiceNotSupported: return "service not supported by server";
    case ads_error::kInvalidIndexGroup: return "invalid index group";
    case ads_error::kInvalidIndexOffset: return "invalid index offset";
    case ads_error::kInvalidAccess: return "reading or writing not permitted";
    case ads_error::kInvalidSize: return "parameter size not correct";
    case ads_error::kInvalidData: return "invalid data values";
    case ads_error::kInvalidParameter: return "invalid parameter values";
    case ads_error::kSymbolNotFound: return "symbol not found";
    case ads_error::kTransModeNotSupported: return "notification transmission mode not supported";
    case ads_error::kNotifyHandleInvalid: return "notification handle is invalid";
    case ads_error::kClientSyncTimeout: return "timeout elapsed";
    default: return "unknown ADS error";
  }
}

}  // namespace adsbench::ams
