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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

// Reading per-process counters from /proc.
namespace denet::procfs {

struct RawProcessStat {
  pid_t pid = 0;
  std::string comm;
  char state = '?';
  pid_t ppid = 0;
  std::uint64_t utime_ticks = 0;
  std::uint64_t stime_ticks = 0;
  std::uint64_t num_threads = 0;
  std::uint64_t starttime_ticks = 0;
  std::uint64_t vsize_bytes = 0;
  std::uint64_t rss_bytes = 0;

  bool is_zombie() const noexcept { return state == 'Z' || state == 'X' || state == 'x'; }
  std::uint64_t total_ticks() const noexcept { return utime_ticks + stime_ticks; }
};

// Cumulative storage-layer byte counters.
struct IoCounters {
  std::uint64_t read_bytes_cum = 0;
  std::uint64_t write_bytes_cum = 0;

  bool operator==(const IoCounters&) const = default;
};

struct ProcessIdentity {
  pid_t pid = 0;
  std::vector<std::string> cmdline;
  std::optional<std::filesystem::path> exe_path;
};

long page_size();
long clock_ticks_per_second();

// Parses the contents of /proc/<pid>/stat. The comm field sits between the
// first '(' and the last ')' and may itself contain spaces and parentheses.
// Throws ParseError on anything that does not match the layout.
RawProcessStat parse_stat(std::string_view text, long page_size_bytes);

// Parses the contents of /proc/<pid>/io. Only read_bytes and write_bytes are
// used; both must be present.
IoCounters parse_io(std::string_view text);

// The readers throw ProcessGone when the pid's entry is absent and
// PermissionDenied when the kernel refuses access.
RawProcessStat read_raw_stat(pid_t pid);
IoCounters read_io(pid_t pid);
ProcessIdentity read_identity(pid_t pid);

// Every process whose parent chain reaches root, root excluded. With
// recursive=false only the direct children. Sorted ascending. Entries that
// vanish or cannot be read during the scan are skipped.
std::vector<pid_t> child_pids(pid_t root, bool recursive);

}  // namespace denet::procfs
