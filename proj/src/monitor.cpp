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

#include "denet/monitor.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <limits>
#include <thread>

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <time.h>
#include <unistd.h>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "denet/cpu.hpp"
#include "denet/error.hpp"
#include "denet/procfs.hpp"

extern char** environ;

namespace denet {
namespace {

using SteadyClock = std::chrono::steady_clock;
using std::chrono::milliseconds;

std::shared_ptr<spdlog::logger> logger() {
  static const auto instance = [] {
    auto existing = spdlog::get("denet");
    return existing ? existing : spdlog::stderr_color_mt("denet");
  }();
  return instance;
}

std::int64_t wall_clock_ms() {
  return std::chrono::duration_cast<milliseconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

double boot_clock_ms() {
  timespec ts{};
  ::clock_gettime(CLOCK_BOOTTIME, &ts);
  return static_cast<double>(ts.tv_sec) * 1000.0 + static_cast<double>(ts.tv_nsec) / 1e6;
}

double steady_ms(SteadyClock::time_point t) {
  return std::chrono::duration<double, std::milli>(t.time_since_epoch()).count();
}

std::uint64_t saturating_sub(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : 0; }

class SummaryAccumulator {
 public:
  void add(const Sample& s) {
    if (count_ == 0) {
      cpu_min_ = cpu_max_ = s.cpu_percent;
    } else {
      cpu_min_ = std::min(cpu_min_, s.cpu_percent);
      cpu_max_ = std::max(cpu_max_, s.cpu_percent);
    }
    ++count_;
    cpu_sum_ += s.cpu_percent;
    peak_rss_ = std::max(peak_rss_, s.mem_rss_bytes);
    peak_vms_ = std::max(peak_vms_, s.mem_vms_bytes);
    total_read_ += s.disk_read_bytes_delta;
    total_write_ += s.disk_write_bytes_delta;
    max_threads_ = std::max(max_threads_, s.thread_count);
    max_children_ = std::max(max_children_, s.child_process_count);
  }

  Summary finish(const ExitStatus& exit, milliseconds duration) const {
    Summary out;
    out.sample_count = count_;
    out.duration_ms = duration.count();
    if (count_ > 0) {
      // keep min <= avg <= max despite rounding in the division
      out.cpu_avg_percent = std::clamp(cpu_sum_ / static_cast<double>(count_), cpu_min_, cpu_max_);
      out.cpu_min_percent = cpu_min_;
      out.cpu_max_percent = cpu_max_;
    }
    out.peak_rss_bytes = peak_rss_;
    out.peak_vms_bytes = peak_vms_;
    out.total_read_bytes = total_read_;
    out.total_write_bytes = total_write_;
    out.max_thread_count = max_threads_;
    out.max_child_count = max_children_;
    out.exit_code = exit.code;
    out.exit_signal = exit.signal;
    return out;
  }

 private:
  std::uint64_t count_ = 0;
  double cpu_sum_ = 0.0;
  double cpu_min_ = 0.0;
  double cpu_max_ = 0.0;
  std::uint64_t peak_rss_ = 0;
  std::uint64_t peak_vms_ = 0;
  std::uint64_t total_read_ = 0;
  std::uint64_t total_write_ = 0;
  std::uint64_t max_threads_ = 0;
  std::uint64_t max_children_ = 0;
};

std::optional<std::string> resolve_executable(const std::string& name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  auto canonical_if_executable = [&](const fs::path& p) -> std::optional<std::string> {
    if (::access(p.c_str(), X_OK) != 0 || fs::is_directory(p, ec)) return std::nullopt;
    auto resolved = fs::canonical(p, ec);
    return ec ? p.string() : resolved.string();
  };
  if (name.find('/') != std::string::npos) return canonical_if_executable(name);
  const char* path_env = std::getenv("PATH");
  std::string_view dirs = path_env ? path_env : "/usr/local/bin:/usr/bin:/bin";
  while (true) {
    const auto colon = dirs.find(':');
    const auto dir = dirs.substr(0, colon);
    if (auto hit = canonical_if_executable(fs::path(dir.empty() ? "." : std::string(dir)) / name)) return hit;
    if (colon == std::string_view::npos) return std::nullopt;
    dirs.remove_prefix(colon + 1);
  }
}

ExitStatus decode_wait_status(int status) {
  ExitStatus out;
  if (WIFEXITED(status)) {
    out.code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    out.signal = WTERMSIG(status);
  }
  return out;
}

int open_pidfd(pid_t pid) {
#ifdef SYS_pidfd_open
  return static_cast<int>(::syscall(SYS_pidfd_open, pid, 0));
#else
  (void)pid;
  return -1;
#endif
}

pid_t spawn(const std::vector<std::string>& argv) {
  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  // The child gets default dispositions and an empty mask no matter how the
  // profiler itself handles signals.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t defaults;
  sigemptyset(&defaults);
  for (int sig : {SIGINT, SIGQUIT, SIGTERM, SIGPIPE, SIGHUP, SIGCHLD}) sigaddset(&defaults, sig);
  sigset_t empty;
  sigemptyset(&empty);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  posix_spawnattr_setsigmask(&attr, &empty);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETSIGDEF | POSIX_SPAWN_SETSIGMASK);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, args[0], nullptr, &attr, args.data(), environ);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) throw SpawnFailed("cannot execute '" + argv[0] + "': " + std::strerror(rc), rc);
  return pid;
}

}  // namespace

void MonitorConfig::validate() const {
  if (const auto* cmd = std::get_if<CommandTarget>(&target)) {
    if (cmd->argv.empty()) throw ConfigError("command target needs at least one argument");
  } else if (std::get<PidTarget>(target).pid <= 0) {
    throw ConfigError("attach target pid must be positive");
  }
  if (duration_cap && duration_cap->count() < 1) throw ConfigError("duration cap must be at least 1 ms");
}

Summary summarize(std::span<const Sample> samples, const ExitStatus& exit, milliseconds duration) {
  SummaryAccumulator acc;
  for (const auto& s : samples) acc.add(s);
  return acc.finish(exit, duration);
}

struct Monitor::State {
  struct Tracked {
    std::uint64_t starttime_ticks = 0;
    std::uint64_t cpu_ticks = 0;
    procfs::IoCounters io;
  };

  MonitorConfig config;
  std::unique_ptr<output::RecordSink> sink;
  std::vector<output::RecordSink*> observers;
  std::optional<std::string> sink_error;

  pid_t pid = 0;
  bool spawned = false;
  bool reaped = false;
  ExitStatus exit;
  int pidfd = -1;
  std::uint64_t root_starttime = 0;

  SteadyClock::time_point start;
  SteadyClock::time_point last_reading;
  double last_reading_boot_ms = 0.0;
  std::int64_t last_elapsed_ms = -1;
  std::unordered_map<pid_t, Tracked> tracked;
  bool io_warning_logged = false;

  RunMetadata metadata;
  std::vector<Sample> samples;
  SummaryAccumulator accumulator;
  std::optional<Summary> summary;

  ~State() {
    if (pidfd >= 0) ::close(pidfd);
  }

  template <typename Fn>
  void emit(Fn&& write) {
    if (sink && !sink_error) {
      try {
        write(*sink);
      } catch (const OutputError& e) {
        sink_error = e.what();
        logger()->error("{}; continuing without the output sink", e.what());
      }
    }
    for (auto* observer : observers) write(*observer);
  }

  // Reads the tree, updates per-pid baselines and returns the aggregate.
  Sample read_tree();
  procfs::IoCounters read_io_or_zero(pid_t p);
  std::vector<pid_t> tree_pids(pid_t root_pid) const;
  void prime();

  // Sleeps until deadline. Returns true early if the root exited.
  bool wait_until(SteadyClock::time_point deadline) const;
  bool interrupted() const { return config.interrupt && config.interrupt->load(); }
  bool child_has_exited() const;
  void reap();
  void record(const Sample& sample);
};

procfs::IoCounters Monitor::State::read_io_or_zero(pid_t p) {
  try {
    return procfs::read_io(p);
  } catch (const PermissionDenied& e) {
    if (!io_warning_logged) {
      logger()->warn("{}; disk I/O of such processes is reported as 0", e.what());
      io_warning_logged = true;
    }
  } catch (const ParseError& e) {
    if (!io_warning_logged) {
      logger()->warn("unexpected io counters for pid {}: {}", p, e.what());
      io_warning_logged = true;
    }
  }
  return {};
}

std::vector<pid_t> Monitor::State::tree_pids(pid_t root_pid) const {
  std::vector<pid_t> pids{root_pid};
  if (config.include_children) {
    const auto descendants = procfs::child_pids(root_pid, true);
    pids.insert(pids.end(), descendants.begin(), descendants.end());
  }
  return pids;
}

void Monitor::State::prime() {
  last_reading = spawned ? start : SteadyClock::now();
  last_reading_boot_ms = boot_clock_ms();
  for (pid_t p : tree_pids(pid)) {
    try {
      const auto stat = procfs::read_raw_stat(p);
      if (p == pid) root_starttime = stat.starttime_ticks;
      if (p == pid && spawned) {
        // A new task's counters start at zero, so nothing it did is lost
        // to the delay between spawn and this first read.
        tracked[p] = Tracked{stat.starttime_ticks, 0, {}};
      } else {
        tracked[p] = Tracked{stat.starttime_ticks, stat.total_ticks(), read_io_or_zero(p)};
      }
    } catch (const ProcessGone&) {
      if (p == pid) throw NoSuchProcess("process " + std::to_string(pid) + " exited before monitoring began");
    }
  }
}

Sample Monitor::State::read_tree() {
  auto now = SteadyClock::now();
  auto elapsed = std::chrono::duration_cast<milliseconds>(now - start).count();
  if (elapsed <= last_elapsed_ms) {
    std::this_thread::sleep_until(start + milliseconds(last_elapsed_ms + 1));
    now = SteadyClock::now();
    elapsed = std::chrono::duration_cast<milliseconds>(now - start).count();
  }
  const double boot_ms = boot_clock_ms();

  procfs::RawProcessStat root;
  try {
    root = procfs::read_raw_stat(pid);
  } catch (const ProcessGone&) {
    throw TargetExited("process " + std::to_string(pid) + " exited");
  }
  if (root.starttime_ticks != root_starttime) {
    throw TargetExited("pid " + std::to_string(pid) + " was reused by another process");
  }
  if (!spawned && root.is_zombie()) throw TargetExited("process " + std::to_string(pid) + " exited");

  const long hz = cpu::ticks_per_second();
  const double tick_ms = 1000.0 / static_cast<double>(hz);

  Sample sample;
  std::uint64_t window_ticks = 0;
  std::unordered_map<pid_t, Tracked> seen;
  for (pid_t p : tree_pids(pid)) {
    procfs::RawProcessStat stat;
    if (p == pid) {
      stat = root;
    } else {
      try {
        stat = procfs::read_raw_stat(p);
      } catch (const Error&) {
        continue;
      }
    }

    const auto prev = tracked.find(p);
    const bool known = prev != tracked.end() && prev->second.starttime_ticks == stat.starttime_ticks;
    auto io = read_io_or_zero(p);

    if (known) {
      window_ticks += saturating_sub(stat.total_ticks(), prev->second.cpu_ticks);
      sample.disk_read_bytes_delta += saturating_sub(io.read_bytes_cum, prev->second.io.read_bytes_cum);
      sample.disk_write_bytes_delta += saturating_sub(io.write_bytes_cum, prev->second.io.write_bytes_cum);
    } else {
      // Started inside this window: all of its CPU time belongs here.
      // Otherwise it only sets a baseline. I/O always baselines.
      const double started_ms = static_cast<double>(stat.starttime_ticks) * tick_ms;
      if (started_ms + tick_ms > last_reading_boot_ms) window_ticks += stat.total_ticks();
    }

    sample.mem_rss_bytes += stat.rss_bytes;
    sample.mem_vms_bytes += stat.vsize_bytes;
    sample.thread_count += stat.num_threads;
    if (p != pid) ++sample.child_process_count;
    seen[p] = Tracked{stat.starttime_ticks, stat.total_ticks(), io};
  }
  tracked = std::move(seen);

  const cpu::CpuTimes before{0, steady_ms(last_reading)};
  const cpu::CpuTimes after{window_ticks, steady_ms(now)};
  sample.cpu_percent = after.at_monotonic_ms > before.at_monotonic_ms ? cpu::cpu_percent(before, after, hz) : 0.0;
  sample.elapsed_ms = elapsed;
  sample.ts_ms = wall_clock_ms();

  last_reading = now;
  last_reading_boot_ms = boot_ms;
  last_elapsed_ms = elapsed;
  return sample;
}

bool Monitor::State::wait_until(SteadyClock::time_point deadline) const {
  for (;;) {
    const auto now = SteadyClock::now();
    if (now >= deadline) return false;
    const auto left = std::chrono::duration_cast<std::chrono::nanoseconds>(deadline - now);
    timespec timeout{static_cast<time_t>(left.count() / 1'000'000'000), static_cast<long>(left.count() % 1'000'000'000)};
    pollfd fds{pidfd, POLLIN, 0};
    const int rc = ::ppoll(pidfd >= 0 ? &fds : nullptr, pidfd >= 0 ? 1 : 0, &timeout, nullptr);
    if (rc > 0) return true;
    if (rc < 0 && errno == EINTR && !spawned && interrupted()) return false;
  }
}

bool Monitor::State::child_has_exited() const {
  siginfo_t info{};
  if (::waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT) != 0) return false;
  return info.si_pid == pid;
}

void Monitor::State::reap() {
  int status = 0;
  pid_t rc;
  do {
    rc = ::waitpid(pid, &status, 0);
  } while (rc < 0 && errno == EINTR);
  if (rc == pid) exit = decode_wait_status(status);
  reaped = true;
}

void Monitor::State::record(const Sample& sample) {
  if (config.store_in_memory) samples.push_back(sample);
  accumulator.add(sample);
  emit([&](output::RecordSink& s) { s.write_sample(sample); });
}

Monitor::Monitor(std::unique_ptr<State> state) : state_(std::move(state)) {}
Monitor::Monitor(Monitor&&) noexcept = default;
Monitor& Monitor::operator=(Monitor&&) noexcept = default;
Monitor::~Monitor() = default;

Monitor Monitor::start(MonitorConfig config, std::vector<output::RecordSink*> observers) {
  config.validate();
  auto state = std::make_unique<State>();
  state->observers = std::move(observers);
  // Open the sink before anything runs so a bad path fails without side effects.
  if (config.output) state->sink = output::open_sink(*config.output);

  RunMetadata& meta = state->metadata;
  if (const auto* cmd = std::get_if<CommandTarget>(&config.target)) {
    state->pid = spawn(cmd->argv);
    state->spawned = true;
    state->start = SteadyClock::now();
    meta.cmdline = cmd->argv;
    std::error_code ec;
    auto exe = std::filesystem::read_symlink("/proc/" + std::to_string(state->pid) + "/exe", ec);
    meta.exe_path = ec ? resolve_executable(cmd->argv.front()) : std::optional<std::string>(exe.string());
  } else {
    const pid_t pid = std::get<PidTarget>(config.target).pid;
    try {
      if (procfs::read_raw_stat(pid).is_zombie()) throw ProcessGone(pid);
      auto identity = procfs::read_identity(pid);
      meta.cmdline = std::move(identity.cmdline);
      if (identity.exe_path) meta.exe_path = identity.exe_path->string();
    } catch (const ProcessGone&) {
      throw NoSuchProcess("no such process: " + std::to_string(pid));
    }
    state->pid = pid;
    state->start = SteadyClock::now();
  }
  state->pidfd = open_pidfd(state->pid);

  meta.pid = state->pid;
  meta.start_ts_ms = wall_clock_ms();
  meta.strategy = config.policy.describe();
  meta.invocation = config.invocation;
  state->config = std::move(config);

  try {
    state->prime();
  } catch (const NoSuchProcess&) {
    // A spawned target may finish before the first read; the run
    // still gets its metadata and summary.
    if (!state->spawned) throw;
  }
  state->emit([&](output::RecordSink& s) { s.write_metadata(meta); });
  return Monitor(std::move(state));
}

Sample Monitor::sample_once() { return state_->read_tree(); }

Summary Monitor::run_to_completion() {
  State& st = *state_;
  if (st.summary) return *st.summary;

  const auto& policy = st.config.policy;
  const auto cap_deadline =
      st.config.duration_cap ? st.start + *st.config.duration_cap : SteadyClock::time_point::max();
  auto scheduled = st.start + policy.next_interval(milliseconds(0));

  for (;;) {
    const bool root_exited = st.wait_until(std::min(scheduled, cap_deadline));

    if (st.spawned && st.child_has_exited()) {
      // Final reading of the zombie picks up I/O done since the last tick.
      try {
        st.record(st.read_tree());
      } catch (const TargetExited&) {
      }
      st.reap();
      break;
    }
    if (SteadyClock::now() >= cap_deadline) break;
    if (!st.spawned && st.interrupted()) break;

    try {
      st.record(st.read_tree());
    } catch (const TargetExited& e) {
      logger()->debug("{}", e.what());
      break;
    }
    if (root_exited && !st.spawned) continue;

    const auto offset = std::chrono::duration_cast<milliseconds>(scheduled - st.start);
    scheduled += policy.next_interval(offset);
    // An overrun tick fires once, immediately; missed slots are not replayed.
    scheduled = std::max(scheduled, SteadyClock::now());
  }

  const auto duration = std::chrono::duration_cast<milliseconds>(SteadyClock::now() - st.start);
  st.summary = st.accumulator.finish(st.exit, duration);
  st.emit([&](output::RecordSink& s) { s.write_summary(*st.summary); });

  if (st.sink_error) {
    std::cerr << output::encode_summary(*st.summary, output::Format::Jsonl) << std::flush;
    throw OutputError(*st.sink_error);
  }
  return *st.summary;
}

pid_t Monitor::pid() const noexcept { return state_->pid; }
bool Monitor::spawned() const noexcept { return state_->spawned; }
const RunMetadata& Monitor::metadata() const noexcept { return state_->metadata; }
const std::vector<Sample>& Monitor::samples() const noexcept { return state_->samples; }
const std::optional<Summary>& Monitor::summary() const noexcept { return state_->summary; }

}  // namespace denet
