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

#include "denet/cpu.hpp"

#include <string>

#include "denet/error.hpp"
#include "denet/procfs.hpp"

namespace denet::cpu {

double cpu_percent(const CpuTimes& prev, const CpuTimes& curr, long ticks_per_second) {
  const double window_ms = curr.at_monotonic_ms - prev.at_monotonic_ms;
  if (!(window_ms > 0.0)) {
    throw InvalidWindow("cpu window must be positive, got " + std::to_string(window_ms) + " ms");
  }
  if (ticks_per_second <= 0) throw InvalidWindow("ticks_per_second must be positive");
  if (curr.total_ticks <= prev.total_ticks) return 0.0;

  const double cpu_seconds =
      static_cast<double>(curr.total_ticks - prev.total_ticks) / static_cast<double>(ticks_per_second);
  return 100.0 * cpu_seconds / (window_ms / 1000.0);
}

long ticks_per_second() { return procfs::clock_ticks_per_second(); }

}  // namespace denet::cpu
