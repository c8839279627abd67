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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <sys/types.h>

#include "denet/output.hpp"
#include "denet/records.hpp"
#include "denet/sampling_policy.hpp"

namespace denet {

struct CommandTarget {
  std::vector<std::string> argv;
};

struct PidTarget {
  pid_t pid = 0;
};

struct MonitorConfig {
  std::variant<CommandTarget, PidTarget> target;
  SamplingPolicy policy = SamplingPolicy::adaptive();
  bool include_children = true;
  std::optional<std::chrono::milliseconds> duration_cap;
  bool store_in_memory = true;
  std::optional<output::SinkDescriptor> output;
  // Recorded in the metadata when set.
  std::optional<std::vector<std::string>> invocation;
  // When set and raised, an attach run stops at the next wakeup. Spawned
  // targets are always followed to their exit (or the duration cap).
  const std::atomic<bool>* interrupt = nullptr;

  // Throws ConfigError.
  void validate() const;
};

// Aggregates over samples; an empty sequence gives zeroed statistics.
Summary summarize(std::span<const Sample> samples, const ExitStatus& exit, std::chrono::milliseconds duration);

/// One monitoring run over a process tree.
///
/// start() spawns or attaches and emits the metadata record; run_to_completion()
/// then samples on the policy's schedule until the root exits, the duration
/// cap passes or (attach only) the interrupt flag is raised, and emits the
/// summary. Records go to the configured output sink and to every observer,
/// in the order metadata, samples, summary.
///
/// A Monitor is owned by one thread. It never signals the target.
class Monitor {
 public:
  // Throws ConfigError, SpawnFailed, NoSuchProcess, PermissionDenied or
  // OutputError. Observers must outlive the Monitor.
  static Monitor start(MonitorConfig config, std::vector<output::RecordSink*> observers = {});

  Monitor(Monitor&&) noexcept;
  Monitor& operator=(Monitor&&) noexcept;
  ~Monitor();

  // Reads the tree once and returns the aggregated sample without emitting
  // or storing it. Throws TargetExited when the root is gone, was recycled,
  // or (attach mode) is a zombie.
  Sample sample_once();

  // Blocks until the run ends. Throws OutputError after the run if a sink
  // failed; the summary is then written to stderr instead.
  Summary run_to_completion();

  pid_t pid() const noexcept;
  bool spawned() const noexcept;
  const RunMetadata& metadata() const noexcept;
  // Empty unless store_in_memory.
  const std::vector<Sample>& samples() const noexcept;
  // Set once run_to_completion has returned.
  const std::optional<Summary>& summary() const noexcept;

 private:
  struct State;
  explicit Monitor(std::unique_ptr<State> state);

  std::unique_ptr<State> state_;
};

}  // namespace denet
