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
#include <optional>
#include <string>
#include <vector>

#include <sys/types.h>

// The records a monitoring run produces, in stream order: one RunMetadata,
// any number of Samples, one Summary.
namespace denet {

// One tick's metrics, aggregated over the monitored process tree.
struct Sample {
  std::int64_t ts_ms = 0;       // wall clock, ms since the epoch
  std::int64_t elapsed_ms = 0;  // since monitoring started
  double cpu_percent = 0.0;
  std::uint64_t mem_rss_bytes = 0;
  std::uint64_t mem_vms_bytes = 0;
  std::uint64_t disk_read_bytes_delta = 0;
  std::uint64_t disk_write_bytes_delta = 0;
  std::uint64_t thread_count = 0;
  std::uint64_t child_process_count = 0;
  // Reserved; no collector fills these in.
  std::optional<std::vector<double>> per_core_util;
  std::optional<std::uint64_t> gpu_mem_bytes;
  std::optional<double> gpu_util_percent;

  bool operator==(const Sample&) const = default;
};

struct RunMetadata {
  pid_t pid = 0;
  std::vector<std::string> cmdline;
  std::optional<std::string> exe_path;
  std::int64_t start_ts_ms = 0;
  std::string strategy;  // SamplingPolicy::describe()
  // The profiler's own command line, when started from the CLI.
  std::optional<std::vector<std::string>> invocation;

  bool operator==(const RunMetadata&) const = default;
};

// How the root process ended. Both empty for attached targets and for runs
// that stopped before the target did.
struct ExitStatus {
  std::optional<int> code;
  std::optional<int> signal;

  bool operator==(const ExitStatus&) const = default;
};

struct Summary {
  std::uint64_t sample_count = 0;
  std::int64_t duration_ms = 0;
  double cpu_avg_percent = 0.0;
  double cpu_min_percent = 0.0;
  double cpu_max_percent = 0.0;
  std::uint64_t peak_rss_bytes = 0;
  std::uint64_t peak_vms_bytes = 0;
  std::uint64_t total_read_bytes = 0;
  std::uint64_t total_write_bytes = 0;
  std::uint64_t max_thread_count = 0;
  std::uint64_t max_child_count = 0;
  std::optional<int> exit_code;
  std::optional<int> exit_signal;

  bool operator==(const Summary&) const = default;
};

}  // namespace denet
