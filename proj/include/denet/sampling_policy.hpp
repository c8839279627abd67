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

#include <chrono>
#include <string>
#include <string_view>

namespace denet {

enum class SamplingMode { Fixed, Adaptive };

/// How often to sample as a function of elapsed monitoring time.
///
/// Fixed samples every base interval. Adaptive samples every base interval
/// until ramp_start, then widens the interval linearly until it reaches the
/// max interval at ramp_end, and holds it there.
///
/// Instances are validated on construction and immutable afterwards.
class SamplingPolicy {
 public:
  using Millis = std::chrono::milliseconds;

  static constexpr Millis kDefaultBase{100};
  static constexpr Millis kDefaultMax{1000};
  static constexpr Millis kDefaultRampStart{1000};
  static constexpr Millis kDefaultRampEnd{10000};

  // Throws ConfigError if base < 1 ms.
  static SamplingPolicy fixed(Millis base);

  // Throws ConfigError if base < 1 ms, max < base or ramp_start >= ramp_end.
  static SamplingPolicy adaptive(Millis base = kDefaultBase, Millis max = kDefaultMax,
                                 Millis ramp_start = kDefaultRampStart, Millis ramp_end = kDefaultRampEnd);

  Millis next_interval(Millis elapsed) const;

  SamplingMode mode() const noexcept { return mode_; }
  Millis base_interval() const noexcept { return base_; }
  // Equal to base_interval() for Fixed policies.
  Millis max_interval() const noexcept { return max_; }
  Millis ramp_start() const noexcept { return ramp_start_; }
  Millis ramp_end() const noexcept { return ramp_end_; }

  // e.g. "adaptive base_interval_ms=100 max_interval_ms=1000 ramp_ms=1000..10000"
  std::string describe() const;
  // Inverse of describe(). Throws ConfigError on malformed input.
  static SamplingPolicy parse(std::string_view description);

  bool operator==(const SamplingPolicy&) const = default;

 private:
  SamplingPolicy(SamplingMode mode, Millis base, Millis max, Millis ramp_start, Millis ramp_end)
      : mode_(mode), base_(base), max_(max), ramp_start_(ramp_start), ramp_end_(ramp_end) {}

  SamplingMode mode_;
  Millis base_;
  Millis max_;
  Millis ramp_start_;
  Millis ramp_end_;
};

}  // namespace denet
