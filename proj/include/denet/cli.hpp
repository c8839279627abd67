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
#include <variant>
#include <vector>

#include <sys/types.h>

#include "denet/monitor.hpp"

namespace denet::cli {

struct RunCommand {
  std::vector<std::string> argv;
  bool operator==(const RunCommand&) const = default;
};

struct AttachCommand {
  pid_t pid = 0;
  bool operator==(const AttachCommand&) const = default;
};

struct CliInvocation {
  std::variant<RunCommand, AttachCommand> subcommand;
  std::optional<std::int64_t> interval_ms;
  std::optional<std::int64_t> max_interval_ms;
  std::optional<double> duration_s;
  bool json = false;
  std::optional<std::string> out_path;
  bool quiet = false;
  bool no_include_children = false;

  bool operator==(const CliInvocation&) const = default;
};

// Thrown by parse_args for --help; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Global flags come before the subcommand; everything after `run` is the
// target command, untouched. Throws UsageError or HelpRequested.
CliInvocation parse_args(const std::vector<std::string>& args);

// Canonical argument list that parses back to the same invocation.
std::vector<std::string> render_args(const CliInvocation& invocation);

// Throws ConfigError on contradictory intervals.
MonitorConfig resolve_config(const CliInvocation& invocation);

// Output format for --out: CSV when the path ends in ".csv", JSONL otherwise.
output::Format format_for_path(const std::string& path);

std::string usage();

// Runs the whole command line and returns the process exit status: the
// child's status for `run` (128 + signal for signal deaths), 0 for `attach`,
// 2 for usage and configuration errors, 126/127 when the command cannot be
// executed, 1 for other failures.
int main(const std::vector<std::string>& args);

inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNotExecutable = 126;
inline constexpr int kExitNotFound = 127;

}  // namespace denet::cli
