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

#include "denet/procfs.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <deque>
#include <system_error>
#include <unordered_map>

#include <fcntl.h>
#include <unistd.h>

#include "denet/error.hpp"

namespace denet::procfs {
namespace {

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const noexcept { return fd_; }

 private:
  int fd_;
};

[[noreturn]] void throw_for_errno(int err, pid_t pid, const std::string& path) {
  switch (err) {
    case ENOENT:
    case ESRCH:
      throw ProcessGone(pid);
    case EACCES:
    case EPERM:
      throw PermissionDenied("cannot read " + path + ": " + std::strerror(err));
    default:
      throw Error("cannot read " + path + ": " + std::strerror(err));
  }
}

std::string proc_path(pid_t pid, const char* leaf) {
  return "/proc/" + std::to_string(pid) + "/" + leaf;
}

// /proc files report a size of 0, so read until EOF.
std::string read_proc_file(pid_t pid, const char* leaf) {
  const std::string path = proc_path(pid, leaf);
  FileDescriptor fd(::open(path.c_str(), O_RDONLY | O_CLOEXEC));
  if (fd.get() < 0) throw_for_errno(errno, pid, path);

  std::string out;
  char buf[4096];
  for (;;) {
    const ssize_t n = ::read(fd.get(), buf, sizeof buf);
    if (n == 0) break;
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_for_errno(errno, pid, path);
    }
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, const char* field) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(std::string("bad ") + field + " field: '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) break;
    std::size_t j = s.find(' ', i);
    if (j == std::string_view::npos) j = s.size();
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\n' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

long page_size() {
  static const long value = ::sysconf(_SC_PAGESIZE);
  return value;
}

long clock_ticks_per_second() {
  static const long value = ::sysconf(_SC_CLK_TCK);
  return value;
}

RawProcessStat parse_stat(std::string_view text, long page_size_bytes) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ParseError("stat line has no (comm) field");
  }

  RawProcessStat stat;
  stat.pid = parse_number<pid_t>(trim(text.substr(0, open)), "pid");
  if (stat.pid <= 0) throw ParseError("stat line has non-positive pid");
  stat.comm = std::string(text.substr(open + 1, close - open - 1));

  // fields[0] is field 3 (state) of the documented layout
  const auto fields = split_spaces(trim(text.substr(close + 1)));
  constexpr std::size_t kFirstField = 3;
  auto field = [&](std::size_t number) { return fields[number - kFirstField]; };
  if (fields.size() < 24 - kFirstField + 1) {
    throw ParseError("stat line has " + std::to_string(fields.size()) + " fields after comm");
  }
  if (field(3).size() != 1) throw ParseError("bad state field");

  stat.state = field(3).front();
  stat.ppid = parse_number<pid_t>(field(4), "ppid");
  stat.utime_ticks = parse_number<std::uint64_t>(field(14), "utime");
  stat.stime_ticks = parse_number<std::uint64_t>(field(15), "stime");
  stat.num_threads = parse_number<std::uint64_t>(field(20), "num_threads");
  stat.starttime_ticks = parse_number<std::uint64_t>(field(22), "starttime");
  stat.vsize_bytes = parse_number<std::uint64_t>(field(23), "vsize");
  const auto rss_pages = parse_number<std::uint64_t>(field(24), "rss");
  stat.rss_bytes = rss_pages * static_cast<std::uint64_t>(page_size_bytes);
  return stat;
}

IoCounters parse_io(std::string_view text) {
  std::optional<std::uint64_t> read_bytes;
  std::optional<std::uint64_t> write_bytes;
  while (!text.empty()) {
    auto eol = text.find('\n');
    const auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));
    if (key == "read_bytes") {
      read_bytes = parse_number<std::uint64_t>(value, "read_bytes");
    } else if (key == "write_bytes") {
      write_bytes = parse_number<std::uint64_t>(value, "write_bytes");
    }
  }
  if (!read_bytes || !write_bytes) throw ParseError("io counters missing read_bytes/write_bytes");
  return IoCounters{*read_bytes, *write_bytes};
}

RawProcessStat read_raw_stat(pid_t pid) {
  if (pid <= 0) throw ProcessGone(pid);
  return parse_stat(read_proc_file(pid, "stat"), page_size());
}

IoCounters read_io(pid_t pid) {
  if (pid <= 0) throw ProcessGone(pid);
  return parse_io(read_proc_file(pid, "io"));
}

ProcessIdentity read_identity(pid_t pid) {
  if (pid <= 0) throw ProcessGone(pid);
  ProcessIdentity identity;
  identity.pid = pid;

  const std::string raw = read_proc_file(pid, "cmdline");
  std::string_view rest = raw;
  while (!rest.empty()) {
    const auto nul = rest.find('\0');
    identity.cmdline.emplace_back(rest.substr(0, nul));
    if (nul == std::string_view::npos) break;
    rest.remove_prefix(nul + 1);
  }

  std::error_code ec;
  auto exe = std::filesystem::read_symlink(proc_path(pid, "exe"), ec);
  if (!ec) identity.exe_path = std::move(exe);
  return identity;
}

std::vector<pid_t> child_pids(pid_t root, bool recursive) {
  std::unordered_multimap<pid_t, pid_t> children_of;
  std::error_code ec;
  for (std::filesystem::directory_iterator it("/proc", ec), end; !ec && it != end; it.increment(ec)) {
    const std::string name = it->path().filename().string();
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    try {
      const auto stat = read_raw_stat(std::stoi(name));
      children_of.emplace(stat.ppid, stat.pid);
    } catch (const Error&) {
      // exited or unreadable mid-scan
    } catch (const std::out_of_range&) {
    }
  }

  std::vector<pid_t> found;
  std::deque<pid_t> frontier{root};
  while (!frontier.empty()) {
    const pid_t parent = frontier.front();
    frontier.pop_front();
    auto [lo, hi] = children_of.equal_range(parent);
    for (auto child = lo; child != hi; ++child) {
      if (child->second == root) continue;
      found.push_back(child->second);
      if (recursive) frontier.push_back(child->second);
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

}  // namespace denet::procfs
