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
#include <string_view>

namespace adsbench::ams {

/// Subset of the ADS return-code table used by the simulator and the client.
namespace ads_error {
inline constexpr std::uint32_t kNoError = 0x000;
inline constexpr std::uint32_t kTargetPortNotFound = 0x006;
inline constexpr std::uint32_t kTargetMachineNotFound = 0x007;
inline constexpr std::uint32_t kDeviceError = 0x700;
inline constexpr std::uint32_t kServiceNotSupported = 0x701;
inline constexpr std::uint32_t kInvalidIndexGroup = 0x702;
inline constexpr std::uint32_t kInvalidIndexOffset = 0x703;
inline constexpr std::uint32_t kInvalidAccess = 0x704;
inline constexpr std::uint32_t kInvalidSize = 0x705;
inline constexpr std::uint32_t kInvalidData = 0x706;
inline constexpr std::uint32_t kInvalidParameter = 0x70B;
inline constexpr std::uint32_t kSymbolNotFound = 0x710;
inline constexpr std::uint32_t kTransModeNotSupported = 0x713;
inline constexpr std::uint32_t kNotifyHandleInvalid = 0x714;
inline constexpr std::uint32_t kClientSyncTimeout = 0x745;
}  // namespace ads_error

std::string_view ads_error_text(std::uint32_t code);

}  // namespace adsbench::ams
