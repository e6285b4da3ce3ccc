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

#include "adsbench/plc/symbol_config.hpp"

namespace adsbench::bench {

/// 14 scalar variables (one per elementary type) followed by their
/// array-of-3 counterparts, all under MAIN. Scalars are named MAIN.<prefix>Var
/// and arrays MAIN.<prefix>Arr.
plc::PlcConfig sync_workload_config();

/// Name of the counter incremented by counter_config().
inline constexpr const char* kCounterSymbol = "MAIN.counter";

/// A single DINT counter incremented once per cycle.
plc::PlcConfig counter_config(plc::Ticks cycle_time);

}  // namespace adsbench::bench
