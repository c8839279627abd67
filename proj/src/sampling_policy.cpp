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

#include "denet/sampling_policy.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "denet/error.hpp"

namespace denet {
namespace {

void require_base(SamplingPolicy::Millis base) {
  if (base.count() < 1) {
    throw ConfigError("sampling interval must be at least 1 ms, got " + std::to_string(base.count()));
  }
}

std::int64_t parse_ms(std::string_view text) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("bad millisecond value '" + std::string(text) + "' in sampling strategy");
  }
  return value;
}

}  // namespace

SamplingPolicy SamplingPolicy::fixed(Millis base) {
  require_base(base);
  return SamplingPolicy(SamplingMode::Fixed, base, base, kDefaultRampStart, kDefaultRampEnd);
}

SamplingPolicy SamplingPolicy::adaptive(Millis base, Millis max, Millis ramp_start, Millis ramp_end) {
  require_base(base);
  if (max < base) {
    throw ConfigError("max interval (" + std::to_string(max.count()) + " ms) is below the base interval (" +
                      std::to_string(base.count()) + " ms)");
  }
  if (ramp_start.count() < 0 || ramp_start >= ramp_end) {
    throw ConfigError("adaptive ramp must satisfy 0 <= start < end");
  }
  return SamplingPolicy(SamplingMode::Adaptive, base, max, ramp_start, ramp_end);
}

SamplingPolicy::Millis SamplingPolicy::next_interval(Millis elapsed) const {
  if (mode_ == SamplingMode::Fixed || elapsed < ramp_start_) return base_;
  if (elapsed >= ramp_end_) return max_;

  const double progress = static_cast<double>((elapsed - ramp_start_).count()) /
                          static_cast<double>((ramp_end_ - ramp_start_).count());
  const double span = static_cast<double>((max_ - base_).count());
  return base_ + Millis(std::llround(progress * span));
}

std::string SamplingPolicy::describe() const {
  std::ostringstream out;
  if (mode_ == SamplingMode::Fixed) {
    out << "fixed base_interval_ms=" << base_.count();
  } else {
    out << "adaptive base_interval_ms=" << base_.count() << " max_interval_ms=" << max_.count()
        << " ramp_ms=" << ramp_start_.count() << ".." << ramp_end_.count();
  }
  return out.str();
}

SamplingPolicy SamplingPolicy::parse(std::string_view description) {
  const std::string original(description);
  std::vector<std::string_view> words;
  while (!description.empty()) {
    const auto space = description.find(' ');
    if (space != 0) words.push_back(description.substr(0, space));
    if (space == std::string_view::npos) break;
    description.remove_prefix(space + 1);
  }
  auto value_of = [&](std::string_view word, std::string_view key) {
    if (word.substr(0, key.size()) != key || word.size() <= key.size() || word[key.size()] != '=') {
      throw ConfigError("expected " + std::string(key) + "=<ms> in sampling strategy");
    }
    return word.substr(key.size() + 1);
  };

  if (words.size() == 2 && words[0] == "fixed") {
    return fixed(Millis(parse_ms(value_of(words[1], "base_interval_ms"))));
  }
  if (words.size() == 4 && words[0] == "adaptive") {
    const auto ramp = value_of(words[3], "ramp_ms");
    const auto dots = ramp.find("..");
    if (dots == std::string_view::npos) throw ConfigError("expected ramp_ms=<start>..<end>");
    return adaptive(Millis(parse_ms(value_of(words[1], "base_interval_ms"))),
                    Millis(parse_ms(value_of(words[2], "max_interval_ms"))),
                    Millis(parse_ms(ramp.substr(0, dots))), Millis(parse_ms(ramp.substr(dots + 2))));
  }
  throw ConfigError("unrecognized sampling strategy '" + original + "'");
}

}  // namespace denet
