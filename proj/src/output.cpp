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

#include "denet/output.hpp"

#include <array>
#include <charconv>
#include <iostream>

#include <fmt/format.h>

#include "denet/error.hpp"

namespace denet::output {
namespace {

constexpr std::string_view kReset = "\x1b[0m";
constexpr std::string_view kWarm = "\x1b[33m";
constexpr std::string_view kAlert = "\x1b[1;31m";
constexpr std::string_view kDim = "\x1b[2m";

std::string tagged_line(std::string_view type, const nlohmann::ordered_json& fields) {
  nlohmann::ordered_json record;
  record["type"] = type;
  for (const auto& [key, value] : fields.items()) record[key] = value;
  return record.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

std::string comment_line(std::string_view type, const nlohmann::ordered_json& fields) {
  return "# " + tagged_line(type, fields);
}

std::string shortest(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ec == std::errc{} ? ptr : buf.data());
}

std::string joined(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::string_view format_name(Format format) {
  switch (format) {
    case Format::Json:
      return "json";
    case Format::Jsonl:
      return "jsonl";
    case Format::Csv:
      return "csv";
  }
  return "?";
}

nlohmann::ordered_json to_json(const RunMetadata& meta) {
  nlohmann::ordered_json j;
  j["pid"] = meta.pid;
  j["cmdline"] = meta.cmdline;
  if (meta.exe_path) j["exe_path"] = *meta.exe_path;
  j["start_ts_ms"] = meta.start_ts_ms;
  j["strategy"] = meta.strategy;
  if (meta.invocation) j["invocation"] = *meta.invocation;
  return j;
}

nlohmann::ordered_json to_json(const Sample& sample) {
  nlohmann::ordered_json j;
  j["ts_ms"] = sample.ts_ms;
  j["elapsed_ms"] = sample.elapsed_ms;
  j["cpu_percent"] = sample.cpu_percent;
  j["mem_rss_bytes"] = sample.mem_rss_bytes;
  j["mem_vms_bytes"] = sample.mem_vms_bytes;
  j["disk_read_bytes_delta"] = sample.disk_read_bytes_delta;
  j["disk_write_bytes_delta"] = sample.disk_write_bytes_delta;
  j["thread_count"] = sample.thread_count;
  j["child_process_count"] = sample.child_process_count;
  if (sample.per_core_util) j["per_core_util"] = *sample.per_core_util;
  if (sample.gpu_mem_bytes) j["gpu_mem_bytes"] = *sample.gpu_mem_bytes;
  if (sample.gpu_util_percent) j["gpu_util_percent"] = *sample.gpu_util_percent;
  return j;
}

nlohmann::ordered_json to_json(const Summary& summary) {
  nlohmann::ordered_json j;
  j["sample_count"] = summary.sample_count;
  j["duration_ms"] = summary.duration_ms;
  j["cpu_avg_percent"] = summary.cpu_avg_percent;
  j["cpu_min_percent"] = summary.cpu_min_percent;
  j["cpu_max_percent"] = summary.cpu_max_percent;
  j["peak_rss_bytes"] = summary.peak_rss_bytes;
  j["peak_vms_bytes"] = summary.peak_vms_bytes;
  j["total_read_bytes"] = summary.total_read_bytes;
  j["total_write_bytes"] = summary.total_write_bytes;
  j["max_thread_count"] = summary.max_thread_count;
  j["max_child_count"] = summary.max_child_count;
  if (summary.exit_code) j["exit_code"] = *summary.exit_code;
  if (summary.exit_signal) j["exit_signal"] = *summary.exit_signal;
  return j;
}

std::string encode_metadata(const RunMetadata& meta, Format format) {
  return format == Format::Csv ? comment_line("metadata", to_json(meta)) : tagged_line("metadata", to_json(meta));
}

std::string encode_sample(const Sample& sample, Format format) {
  if (format != Format::Csv) return tagged_line("sample", to_json(sample));
  return fmt::format("{},{},{},{},{},{},{},{},{}\n", sample.ts_ms, sample.elapsed_ms, shortest(sample.cpu_percent),
                     sample.mem_rss_bytes, sample.mem_vms_bytes, sample.disk_read_bytes_delta,
                     sample.disk_write_bytes_delta, sample.thread_count, sample.child_process_count);
}

std::string encode_summary(const Summary& summary, Format format) {
  return format == Format::Csv ? comment_line("summary", to_json(summary)) : tagged_line("summary", to_json(summary));
}

std::string csv_header() { return std::string(kCsvColumns) + "\n"; }

std::string format_bytes(std::uint64_t bytes) {
  static constexpr std::array<const char*, 5> kUnits{"B", "KiB", "MiB", "GiB", "TiB"};
  if (bytes < 1024) return fmt::format("{} B", bytes);
  double value = static_cast<double>(bytes);
  std::size_t unit = 0;
  while (value >= 1024.0 && unit + 1 < kUnits.size()) {
    value /= 1024.0;
    ++unit;
  }
  return fmt::format("{:.1f} {}", value, kUnits[unit]);
}

std::string render_human(const Sample& sample, bool color_enabled) {
  std::string_view tint;
  if (color_enabled) {
    if (sample.cpu_percent >= 90.0) {
      tint = kAlert;
    } else if (sample.cpu_percent >= 50.0) {
      tint = kWarm;
    }
  }
  const std::string cpu = fmt::format("{:>6.1f}%", sample.cpu_percent);
  return fmt::format("[{:>8.1f}s] CPU {}{}{} | RSS {:>10} | read {:>10} write {:>10} | threads {:>3} | children {:>3}\n",
                     static_cast<double>(sample.elapsed_ms) / 1000.0, tint, cpu, tint.empty() ? "" : kReset,
                     format_bytes(sample.mem_rss_bytes), format_bytes(sample.disk_read_bytes_delta),
                     format_bytes(sample.disk_write_bytes_delta), sample.thread_count, sample.child_process_count);
}

std::string render_human(const RunMetadata& meta, bool color_enabled) {
  const std::string line = fmt::format("denet: pid {} | {} | exe {} | {}", meta.pid, joined(meta.cmdline),
                                       meta.exe_path.value_or("?"), meta.strategy);
  if (!color_enabled) return line + "\n";
  return fmt::format("{}{}{}\n", kDim, line, kReset);
}

std::string render_human(const Summary& summary, bool color_enabled) {
  std::string exit;
  if (summary.exit_code) {
    exit = fmt::format(" | exit code {}", *summary.exit_code);
  } else if (summary.exit_signal) {
    exit = fmt::format(" | killed by signal {}", *summary.exit_signal);
  }
  const std::string line = fmt::format(
      "denet: {} samples in {:.2f}s | CPU avg {:.1f}% min {:.1f}% max {:.1f}% | peak RSS {} VMS {} | "
      "read {} write {} | max threads {} | max children {}{}",
      summary.sample_count, static_cast<double>(summary.duration_ms) / 1000.0, summary.cpu_avg_percent,
      summary.cpu_min_percent, summary.cpu_max_percent, format_bytes(summary.peak_rss_bytes),
      format_bytes(summary.peak_vms_bytes), format_bytes(summary.total_read_bytes),
      format_bytes(summary.total_write_bytes), summary.max_thread_count, summary.max_child_count, exit);
  if (!color_enabled) return line + "\n";
  return fmt::format("{}{}{}\n", kDim, line, kReset);
}

StreamSink::StreamSink(std::ostream& out, Format format) : out_(&out), format_(format), label_("output stream") {}

StreamSink::StreamSink(const std::filesystem::path& path, Format format, bool append)
    : file_(std::make_unique<std::ofstream>(path, append ? std::ios::app : std::ios::trunc)),
      out_(file_.get()),
      format_(format),
      label_(path.string()) {
  if (!*file_) throw OutputError("cannot open " + label_ + " for writing");
}

void StreamSink::write(std::string_view record) {
  out_->write(record.data(), static_cast<std::streamsize>(record.size()));
  out_->flush();
  if (!*out_) throw OutputError("write to " + label_ + " failed");
}

void StreamSink::write_metadata(const RunMetadata& meta) {
  write(encode_metadata(meta, format_));
  if (format_ == Format::Csv) write(csv_header());
}

void StreamSink::write_sample(const Sample& sample) { write(encode_sample(sample, format_)); }

void StreamSink::write_summary(const Summary& summary) { write(encode_summary(summary, format_)); }

void HumanSink::write_metadata(const RunMetadata& meta) { out_ << render_human(meta, color_) << std::flush; }

void HumanSink::write_sample(const Sample& sample) { out_ << render_human(sample, color_) << std::flush; }

void HumanSink::write_summary(const Summary& summary) { out_ << render_human(summary, color_) << std::flush; }

std::unique_ptr<RecordSink> open_sink(const SinkDescriptor& descriptor) {
  if (const auto* path = std::get_if<std::filesystem::path>(&descriptor.destination)) {
    return std::make_unique<StreamSink>(*path, descriptor.format, descriptor.append);
  }
  return std::make_unique<StreamSink>(std::cout, descriptor.format);
}

}  // namespace denet::output
