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

#include "adsbench/bench/workloads.hpp"

#include <array>
#include <string>

namespace adsbench::bench {

namespace {

struct Named {
  plc::ScalarType type;
  const char* prefix;
};

constexpr std::array<Named, 14> kPrefixes{{
    {plc::ScalarType::kBool, "b"},
    {plc::ScalarType::kByte, "by"},
    {plc::ScalarType::kWord, "w"},
    {plc::ScalarType::kDWord, "dw"},
    {plc::ScalarType::kSInt, "si"},
    {plc::ScalarType::kUSInt, "usi"},
    {plc::ScalarType::kInt, "i"},
    {plc::ScalarType::kUInt, "ui"},
    {plc::ScalarType::kDInt, "di"},
    {plc::ScalarType::kUDInt, "udi"},
    {plc::ScalarType::kLInt, "li"},
    {plc::ScalarType::kULInt, "uli"},
    {plc::ScalarType::kReal, "r"},
    {plc::ScalarType::kLReal, "lr"},
}};

}  // namespace

plc::PlcConfig sync_workload_config() {
  plc::PlcConfig config;
  for (const auto& n : kPrefixes) {
    config.add_symbol(std::string{"MAIN."} + n.prefix + "Var", plc::PlcType::scalar(n.type));
  }
  for (const auto& n : kPrefixes) {
    config.add_symbol(std::string{"MAIN."} + n.prefix + "Arr", plc::PlcType::array(n.type, 3));
  }
  return config;
}

plc::PlcConfig counter_config(plc::Ticks cycle_time) {
  plc::PlcConfig config;
  config.add_symbol(kCounterSymbol, plc::PlcType::scalar(plc::ScalarType::kDInt));
  config.set_cycle_time(cycle_time);
  config.add_op(plc::op::Increment{kCounterSymbol});
  return config;
}

}  // namespace adsbench::bench
