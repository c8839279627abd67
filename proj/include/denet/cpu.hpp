// Copyright 2026 The denet-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace denet::cpu {

// One reading of a process's (or a tree's) consumed CPU time.
struct CpuTimes {
  std::uint64_t total_ticks = 0;  // utime + stime
  double at_monotonic_ms = 0.0;
};

// Usage over the window [prev, curr] on the top/htop scale: 100 is one
// fully busy core, 400 is four. Never negative, not capped at 100.
// Throws InvalidWindow unless curr is strictly later than prev and
// ticks_per_second is positive.
double cpu_percent(const CpuTimes& prev, const CpuTimes& curr, long ticks_per_second);

// Clock ticks per second for this boot, read once.
long ticks_per_second();

}  // namespace denet::cpu
