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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "denet/error.hpp"

namespace denet {
namespace {

using std::chrono::milliseconds;

// Straight from the ramp definition, in floating point.
double oracle_interval(double base, double max, double elapsed) {
  if (elapsed < 1000.0) return base;
  if (elapsed >= 10000.0) return max;
  return base + (elapsed - 1000.0) / 9000.0 * (max - base);
}

TEST(NextInterval, AdaptiveExamples) {
  const auto policy = SamplingPolicy::adaptive(milliseconds(100), milliseconds(1000));
  EXPECT_EQ(policy.next_interval(milliseconds(0)), milliseconds(100));
  EXPECT_EQ(policy.next_interval(milliseconds(12000)), milliseconds(1000));
  // 100 + 4500/9000 * 900
  EXPECT_EQ(policy.next_interval(milliseconds(5500)), milliseconds(550));
  EXPECT_EQ(policy.next_interval(milliseconds(999)), milliseconds(100));
  EXPECT_EQ(policy.next_interval(milliseconds(1000)), milliseconds(100));
  EXPECT_EQ(policy.next_interval(milliseconds(10000)), milliseconds(1000));
}

TEST(NextInterval, DegenerateAndFixed) {
  const auto flat = SamplingPolicy::adaptive(milliseconds(200), milliseconds(200));
  for (int e : {0, 999, 1000, 4321, 10000, 86'400'000}) EXPECT_EQ(flat.next_interval(milliseconds(e)), milliseconds(200));
  const auto fixed = SamplingPolicy::fixed(milliseconds(500));
  EXPECT_EQ(fixed.next_interval(milliseconds(60000)), milliseconds(500));
  EXPECT_EQ(fixed.max_interval(), milliseconds(500));
}

TEST(NextInterval, MatchesOracleRounded) {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> ms(1, 60000);
  std::uniform_int_distribution<int> elapsed(0, 12000);
  for (int i = 0; i < 5000; ++i) {
    int a = ms(rng), b = ms(rng);
    if (a > b) std::swap(a, b);
    const auto policy = SamplingPolicy::adaptive(milliseconds(a), milliseconds(b));
    const int e = elapsed(rng);
    const double expected = oracle_interval(a, b, e);
    EXPECT_LE(std::abs(static_cast<double>(policy.next_interval(milliseconds(e)).count()) - expected), 0.5 + 1e-9);
  }
}

TEST(NextInterval, MonotoneAndInRange) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> ms(1, 60000);
  for (int i = 0; i < 300; ++i) {
    int a = ms(rng), b = ms(rng);
    if (a > b) std::swap(a, b);
    const auto policy = SamplingPolicy::adaptive(milliseconds(a), milliseconds(b));
    auto prev = policy.next_interval(milliseconds(0));
    for (int e = 0; e <= 11000; e += 37) {
      const auto cur = policy.next_interval(milliseconds(e));
      EXPECT_GE(cur, prev);
      EXPECT_GE(cur, milliseconds(a));
      EXPECT_LE(cur, milliseconds(b));
      prev = cur;
    }
  }
}

TEST(SamplingPolicy, CustomRamp) {
  const auto policy = SamplingPolicy::adaptive(milliseconds(10), milliseconds(110), milliseconds(0), milliseconds(100));
  EXPECT_EQ(policy.next_interval(milliseconds(0)), milliseconds(10));
  EXPECT_EQ(policy.next_interval(milliseconds(50)), milliseconds(60));
  EXPECT_EQ(policy.next_interval(milliseconds(100)), milliseconds(110));
}

TEST(SamplingPolicy, ConstructionErrors) {
  EXPECT_THROW(SamplingPolicy::fixed(milliseconds(0)), ConfigError);
  EXPECT_THROW(SamplingPolicy::adaptive(milliseconds(0), milliseconds(10)), ConfigError);
  EXPECT_THROW(SamplingPolicy::adaptive(milliseconds(100), milliseconds(50)), ConfigError);
  EXPECT_THROW(SamplingPolicy::adaptive(milliseconds(1), milliseconds(2), milliseconds(5), milliseconds(5)), ConfigError);
}

TEST(SamplingPolicy, DescribeRoundTrips) {
  const std::vector<SamplingPolicy> policies{
      SamplingPolicy::adaptive(),
      SamplingPolicy::adaptive(milliseconds(100), milliseconds(2000)),
      SamplingPolicy::fixed(milliseconds(500)),
      SamplingPolicy::adaptive(milliseconds(7), milliseconds(9), milliseconds(0), milliseconds(3)),
  };
  for (const auto& p : policies) EXPECT_EQ(SamplingPolicy::parse(p.describe()), p) << p.describe();
  EXPECT_EQ(SamplingPolicy::adaptive().describe(), "adaptive base_interval_ms=100 max_interval_ms=1000 ramp_ms=1000..10000");
  EXPECT_EQ(SamplingPolicy::fixed(milliseconds(500)).describe(), "fixed base_interval_ms=500");
  EXPECT_THROW(SamplingPolicy::parse("fixed base_interval_ms=abc"), ConfigError);
  EXPECT_THROW(SamplingPolicy::parse("sometimes"), ConfigError);
}

}  // namespace
}  // namespace denet
