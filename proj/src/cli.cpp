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

#include "denet/cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <limits>

#include <signal.h>
#include <unistd.h>

#include <CLI11.hpp>

#include "denet/error.hpp"

namespace denet::cli {
namespace {

constexpr std::array kValueFlags{"--interval", "--max-interval", "--duration", "--out"};

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

void install_interrupt_handler(std::initializer_list<int> signals) {
  struct sigaction action {};
  action.sa_handler = on_interrupt;
  sigemptyset(&action.sa_mask);
  action.sa_flags = 0;  // no SA_RESTART: the sampler's sleep must wake up
  for (int sig : signals) ::sigaction(sig, &action, nullptr);
}

struct Parser {
  CLI::App app{"Process resource profiler: streams CPU, memory, disk I/O, thread and child-process metrics.",
               "denet"};
  CliInvocation inv;
  std::string pid_text;
  CLI::App* run = nullptr;
  CLI::App* attach = nullptr;

  Parser() {
    constexpr auto kMaxMs = std::numeric_limits<std::int64_t>::max() / 2;
    app.add_option("--interval", inv.interval_ms, "Sampling interval in ms (base interval when adaptive)")
        ->check(CLI::Range(std::int64_t{1}, kMaxMs));
    app.add_option("--max-interval", inv.max_interval_ms, "Maximum sampling interval in ms (adaptive sampling)")
        ->check(CLI::Range(std::int64_t{1}, kMaxMs));
    app.add_option("--duration", inv.duration_s, "Stop monitoring after this many seconds")
        ->check(CLI::PositiveNumber);
    app.add_flag("--json", inv.json, "Write JSON lines records");
    app.add_option("--out", inv.out_path, "Write records to this file (.csv for CSV, JSON lines otherwise)");
    app.add_flag("--quiet", inv.quiet, "No terminal rendering");
    app.add_flag("--no-include-children", inv.no_include_children, "Only track the root process");
    app.require_subcommand(1);

    run = app.add_subcommand("run", "Run a command and monitor it");
    run->prefix_command();
    run->set_help_flag();
    attach = app.add_subcommand("attach", "Monitor a running process");
    attach->add_option("pid", pid_text, "Process id")->required();
  }
};

// `run -- cmd` is accepted as `run cmd`.
std::vector<std::string> drop_separator_after_run(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& token = args[i];
    if (std::find(kValueFlags.begin(), kValueFlags.end(), token) != kValueFlags.end()) {
      ++i;
      continue;
    }
    if (!token.empty() && token.front() == '-') continue;
    if (token == "run" && i + 1 < args.size() && args[i + 1] == "--") args.erase(args.begin() + static_cast<long>(i) + 1);
    break;
  }
  return args;
}

pid_t parse_pid(const std::string& text) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value <= 0 ||
      value > std::numeric_limits<pid_t>::max()) {
    throw UsageError("attach: '" + text + "' is not a valid pid", usage());
  }
  return static_cast<pid_t>(value);
}

std::string shortest(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

bool color_allowed() {
  if (std::getenv("NO_COLOR") != nullptr) return false;
  const char* term = std::getenv("TERM");
  if (term != nullptr && std::strcmp(term, "dumb") == 0) return false;
  return ::isatty(STDERR_FILENO) == 1;
}

}  // namespace

std::string usage() {
  return "usage: denet [--interval MS] [--max-interval MS] [--duration S] [--json] [--out PATH]\n"
         "             [--quiet] [--no-include-children] (run CMD [ARGS...] | attach PID)\n";
}

CliInvocation parse_args(const std::vector<std::string>& args) {
  Parser parser;
  auto reversed = drop_separator_after_run(args);
  std::reverse(reversed.begin(), reversed.end());
  try {
    parser.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(parser.app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what(), usage());
  }

  CliInvocation inv = parser.inv;
  if (*parser.run) {
    RunCommand cmd{parser.run->remaining()};
    if (cmd.argv.empty()) throw UsageError("run: missing command", usage());
    inv.subcommand = std::move(cmd);
  } else {
    inv.subcommand = AttachCommand{parse_pid(parser.pid_text)};
  }
  if (inv.duration_s && std::llround(*inv.duration_s * 1000.0) < 1) {
    throw UsageError("--duration must be at least 0.001 seconds", usage());
  }
  return inv;
}

std::vector<std::string> render_args(const CliInvocation& inv) {
  std::vector<std::string> out;
  if (inv.interval_ms) out.insert(out.end(), {"--interval", std::to_string(*inv.interval_ms)});
  if (inv.max_interval_ms) out.insert(out.end(), {"--max-interval", std::to_string(*inv.max_interval_ms)});
  if (inv.duration_s) out.insert(out.end(), {"--duration", shortest(*inv.duration_s)});
  if (inv.json) out.emplace_back("--json");
  if (inv.out_path) out.insert(out.end(), {"--out", *inv.out_path});
  if (inv.quiet) out.emplace_back("--quiet");
  if (inv.no_include_children) out.emplace_back("--no-include-children");
  if (const auto* run = std::get_if<RunCommand>(&inv.subcommand)) {
    out.emplace_back("run");
    out.insert(out.end(), run->argv.begin(), run->argv.end());
  } else {
    out.emplace_back("attach");
    out.push_back(std::to_string(std::get<AttachCommand>(inv.subcommand).pid));
  }
  return out;
}

output::Format format_for_path(const std::string& path) {
  constexpr std::string_view kCsv = ".csv";
  if (path.size() >= kCsv.size()) {
    std::string tail = path.substr(path.size() - kCsv.size());
    std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return std::tolower(c); });
    if (tail == kCsv) return output::Format::Csv;
  }
  return output::Format::Jsonl;
}

MonitorConfig resolve_config(const CliInvocation& inv) {
  using std::chrono::milliseconds;
  MonitorConfig config;
  if (const auto* run = std::get_if<RunCommand>(&inv.subcommand)) {
    config.target = CommandTarget{run->argv};
  } else {
    config.target = PidTarget{std::get<AttachCommand>(inv.subcommand).pid};
  }

  if (inv.interval_ms && !inv.max_interval_ms) {
    config.policy = SamplingPolicy::fixed(milliseconds(*inv.interval_ms));
  } else {
    config.policy = SamplingPolicy::adaptive(milliseconds(inv.interval_ms.value_or(SamplingPolicy::kDefaultBase.count())),
                                             milliseconds(inv.max_interval_ms.value_or(SamplingPolicy::kDefaultMax.count())));
  }

  config.include_children = !inv.no_include_children;
  if (inv.duration_s) config.duration_cap = milliseconds(std::llround(*inv.duration_s * 1000.0));
  config.store_in_memory = false;
  if (inv.out_path) {
    config.output = output::SinkDescriptor{std::filesystem::path(*inv.out_path), format_for_path(*inv.out_path)};
  } else if (inv.json) {
    config.output = output::SinkDescriptor{output::StandardOut{}, output::Format::Jsonl};
  }
  std::vector<std::string> invocation{"denet"};
  const auto rendered = render_args(inv);
  invocation.insert(invocation.end(), rendered.begin(), rendered.end());
  config.invocation = std::move(invocation);
  config.validate();
  return config;
}

int main(const std::vector<std::string>& args) {
  CliInvocation inv;
  MonitorConfig config;
  try {
    inv = parse_args(args);
    config = resolve_config(inv);
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "denet: " << e.what() << "\n" << e.usage();
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "denet: " << e.what() << "\n";
    return kExitUsage;
  }

  // Write failures surface as OutputError instead of killing the profiler.
  ::signal(SIGPIPE, SIG_IGN);
  g_interrupted.store(false);
  if (std::holds_alternative<AttachCommand>(inv.subcommand)) {
    install_interrupt_handler({SIGINT, SIGTERM, SIGHUP});
  } else {
    // The child receives terminal signals too; keep sampling until it exits.
    install_interrupt_handler({SIGINT, SIGQUIT});
  }
  config.interrupt = &g_interrupted;

  // Human rendering goes to stderr so the target's stdout (and a --json
  // record stream on stdout) stays untouched.
  const bool show_human = !inv.quiet && !(inv.json && !inv.out_path);
  output::HumanSink human(std::cerr, show_human && color_allowed());
  std::vector<output::RecordSink*> observers;
  if (show_human) observers.push_back(&human);

  try {
    auto monitor = Monitor::start(std::move(config), observers);
    const Summary summary = monitor.run_to_completion();
    if (!monitor.spawned()) return 0;
    if (summary.exit_code) return *summary.exit_code;
    if (summary.exit_signal) return 128 + *summary.exit_signal;
    return 0;
  } catch (const SpawnFailed& e) {
    std::cerr << "denet: " << e.what() << "\n";
    return e.error_number() == ENOENT ? kExitNotFound : kExitNotExecutable;
  } catch (const OutputError& e) {
    std::cerr << "denet: " << e.what() << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    std::cerr << "denet: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace denet::cli
