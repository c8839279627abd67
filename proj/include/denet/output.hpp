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

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "denet/records.hpp"

namespace denet::output {

// Json and Jsonl both produce newline-delimited records.
enum class Format { Json, Jsonl, Csv };

std::string_view format_name(Format format);

struct StandardOut {
  bool operator==(const StandardOut&) const = default;
};

struct SinkDescriptor {
  std::variant<StandardOut, std::filesystem::path> destination = StandardOut{};
  Format format = Format::Jsonl;
  bool append = false;
};

// Field objects, without the record-type tag. Absent optionals are omitted.
nlohmann::ordered_json to_json(const RunMetadata& meta);
nlohmann::ordered_json to_json(const Sample& sample);
nlohmann::ordered_json to_json(const Summary& summary);

inline constexpr std::string_view kCsvColumns =
    "ts_ms,elapsed_ms,cpu_percent,mem_rss_bytes,mem_vms_bytes,"
    "disk_read_bytes_delta,disk_write_bytes_delta,thread_count,child_process_count";

// Each encoder returns exactly one '\n'-terminated line. JSON lines carry a
// leading "type" field (metadata, sample or summary). In CSV, metadata and
// summary become '#'-prefixed comment lines holding the same JSON object.
std::string encode_metadata(const RunMetadata& meta, Format format);
std::string encode_sample(const Sample& sample, Format format);
std::string encode_summary(const Summary& summary, Format format);
std::string csv_header();

// One status line for the terminal: elapsed, CPU%, RSS, I/O deltas,
// threads, children. With color, CPU% is tinted yellow at >= 50 and red
// at >= 90; stripping the escapes gives the uncolored line.
std::string render_human(const Sample& sample, bool color_enabled);
std::string render_human(const RunMetadata& meta, bool color_enabled);
std::string render_human(const Summary& summary, bool color_enabled);

std::string format_bytes(std::uint64_t bytes);

// Receives the records of one run, in stream order.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void write_metadata(const RunMetadata& meta) = 0;
  virtual void write_sample(const Sample& sample) = 0;
  virtual void write_summary(const Summary& summary) = 0;
};

// Structured records to a stream or file, flushed after every record.
// Throws OutputError when a write fails.
class StreamSink final : public RecordSink {
 public:
  StreamSink(std::ostream& out, Format format);
  StreamSink(const std::filesystem::path& path, Format format, bool append);

  void write_metadata(const RunMetadata& meta) override;
  void write_sample(const Sample& sample) override;
  void write_summary(const Summary& summary) override;

 private:
  void write(std::string_view record);

  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
  Format format_;
  std::string label_;
};

class HumanSink final : public RecordSink {
 public:
  HumanSink(std::ostream& out, bool color_enabled) : out_(out), color_(color_enabled) {}

  void write_metadata(const RunMetadata& meta) override;
  void write_sample(const Sample& sample) override;
  void write_summary(const Summary& summary) override;

 private:
  std::ostream& out_;
  bool color_;
};

std::unique_ptr<RecordSink> open_sink(const SinkDescriptor& descriptor);

}  // namespace denet::output
