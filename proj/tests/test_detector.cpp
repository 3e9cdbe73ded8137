// Copyright 2026 The hsps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hsps/detector.hpp"
#include "oracles.hpp"

namespace {

using namespace hsps;

constexpr std::int64_t one_second = 1'000'000'000'000;

auto ideal() -> DetectorParams {
    return {.efficiency = 1.0, .dark_rate_hz = 0.0, .jitter_sigma_ps = 0.0, .dead_time_ps = 0};
}

TEST(Detector, IdentityPipeline) {
    std::mt19937_64 rng(1);
    const auto in = hsps_test::random_times(rng, 10'000, one_second);
    EXPECT_EQ(detect_times(in, ideal(), one_second, 5), in);
}

TEST(Detector, DarkCountsAt25Hz) {
    auto p = ideal();
    p.dark_rate_hz = 25.0;
    for (int s = 0; s < 20; ++s) {
        const auto out = detect_times({}, p, 100 * one_second, derive_seed(3, s));
        EXPECT_LT(std::abs(static_cast<double>(out.size()) - 2500.0), 4.0 * std::sqrt(2500.0))
            << "seed " << s;
    }
}

TEST(Detector, DeadTimeExample) {
    auto p = ideal();
    p.dead_time_ps = 22'000;
    const std::vector<std::int64_t> in{0, 10'000};
    const auto out = detect_times(in, p, one_second, 1);
    ASSERT_EQ(out.size(), 1U);
    EXPECT_EQ(out[0], 0);
}

TEST(Detector, DeadTimeIsNonParalyzable) {
    std::vector<std::int64_t> v{0, 15, 25, 35, 45};
    enforce_dead_time(v, 20);
    // 15 is blocked but does not extend the window, so 25 survives
    EXPECT_EQ(v, (std::vector<std::int64_t>{0, 25, 45}));
}

TEST(Detector, OutputInvariants) {
    const DetectorParams p;  // defaults: jitter, darks, dead time
    std::mt19937_64 rng(2);
    const auto in = hsps_test::random_times(rng, 200'000, one_second / 10);
    const auto out = detect_times(in, p, one_second / 10, 9);
    ASSERT_FALSE(out.empty());
    EXPECT_GE(out.front(), 0);
    EXPECT_LT(out.back(), one_second / 10);
    for (std::size_t k = 1; k < out.size(); ++k)
        EXPECT_GE(out[k] - out[k - 1], p.dead_time_ps);
}

TEST(Detector, NoJitterNoDarkGivesSubset) {
    auto p = DetectorParams{};
    p.jitter_sigma_ps = 0.0;
    p.dark_rate_hz = 0.0;
    std::mt19937_64 rng(4);
    const auto in = hsps_test::random_times(rng, 50'000, one_second / 100);
    const auto out = detect_times(in, p, one_second / 100, 3);
    EXPECT_TRUE(std::includes(in.begin(), in.end(), out.begin(), out.end()));
}

TEST(Detector, ExpectedCountWithoutDeadTime) {
    auto p = DetectorParams{};
    p.dead_time_ps = 0;
    p.dark_rate_hz = 1000.0;
    std::mt19937_64 rng(8);
    const auto in = hsps_test::random_times(rng, 100'000, 10 * one_second);
    const double expect = p.efficiency * 1e5 + 1000.0 * 10.0;
    // binomial variance of thinning plus Poisson variance of darks
    const double sigma = std::sqrt(1e5 * p.efficiency * (1 - p.efficiency) + 1e4);
    for (int s = 0; s < 10; ++s) {
        const auto out = detect_times(in, p, 10 * one_second, derive_seed(6, s));
        EXPECT_LT(std::abs(static_cast<double>(out.size()) - expect), 4.0 * sigma);
    }
}

TEST(Detector, JitterHasRequestedWidth) {
    auto p = ideal();
    p.jitter_sigma_ps = 350.0;
    // widely spaced arrivals: each output maps back to its own input
    std::vector<std::int64_t> in;
    for (std::int64_t k = 1; k <= 20'000; ++k)
        in.push_back(k * 1'000'000);
    const auto out = detect_times(in, p, 30'000'000'000, 12);
    ASSERT_EQ(out.size(), in.size());
    double s2 = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k)
        s2 += static_cast<double>((out[k] - in[k]) * (out[k] - in[k]));
    EXPECT_NEAR(std::sqrt(s2 / static_cast<double>(in.size())), 350.0, 10.0);
}

TEST(Detector, SortNearlySortedMatchesStdSort) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> jit(0.0, 500.0);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<std::int64_t> v;
        for (int k = 0; k < 50'000; ++k)
            v.push_back(k * 300 + static_cast<std::int64_t>(jit(rng)));
        if (trial == 2)
            std::reverse(v.begin(), v.end());  // forces the fallback
        auto ref = v;
        std::sort(ref.begin(), ref.end());
        sort_nearly_sorted(v);
        EXPECT_EQ(v, ref);
    }
}

TEST(Detector, RejectsBadInput) {
    EXPECT_THROW((void)detect_times(std::vector<std::int64_t>{5, 3}, ideal(), 10, 1),
                 invalid_input);
    EXPECT_THROW((void)detect_times(std::vector<std::int64_t>{10}, ideal(), 10, 1),
                 invalid_input);
    auto p = ideal();
    p.efficiency = 1.5;
    EXPECT_THROW((void)detect_times({}, p, 10, 1), invalid_input);
}

TEST(Detector, DetectTagsChannel) {
    const auto s = detect(std::vector<std::int64_t>{1, 2}, ideal(), 10, ChannelId::signal2, 1);
    ASSERT_EQ(s.size(), 2U);
    EXPECT_EQ(s.tags()[0].channel, ChannelId::signal2);
}

}  // namespace
