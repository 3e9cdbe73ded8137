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
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hsps/coincidence.hpp"
#include "hsps/detector.hpp"
#include "hsps/spdc.hpp"
#include "oracles.hpp"

namespace {

using namespace hsps;
using V = std::vector<std::int64_t>;

TEST(TwoFold, Examples) {
    EXPECT_EQ(count_twofold(V{0}, V{400}, 410), 1U);
    EXPECT_EQ(count_twofold(V{0}, V{410}, 410), 1U);
    EXPECT_EQ(count_twofold(V{0}, V{411}, 410), 0U);
    EXPECT_EQ(count_twofold(V{0, 100}, V{50}, 410), 1U);
    EXPECT_EQ(hsps_test::max_matching(V{0, 100}, V{50}, 410), 1U);
    EXPECT_EQ(count_twofold(V{}, V{1}, 410), 0U);
}

TEST(ThreeFold, Examples) {
    EXPECT_EQ(count_threefold(V{1000}, V{900}, V{1300}, 410), 1U);
    EXPECT_EQ(count_threefold(V{}, V{900}, V{1300}, 410), 0U);
    EXPECT_EQ(count_threefold(V{1000}, V{}, V{1300}, 410), 0U);
    EXPECT_EQ(count_threefold(V{1000}, V{900}, V{}, 410), 0U);
    // s1 within window, s2 not
    EXPECT_EQ(count_threefold(V{1000}, V{900}, V{1411}, 410), 0U);
}

TEST(Counting, RejectsUnsorted) {
    EXPECT_THROW((void)count_twofold(V{5, 1}, V{1}, 10), invalid_input);
    EXPECT_THROW((void)count_threefold(V{1}, V{5, 1}, V{1}, 10), invalid_input);
}

TEST(Counting, GreedyEqualsMaximumMatching) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(0, 500);
    std::uniform_int_distribution<std::int64_t> win(0, 1000);
    for (int trial = 0; trial < 100; ++trial) {
        // dense spans so that windows overlap heavily
        const std::int64_t span = 2000 + static_cast<std::int64_t>(rng() % 200'000);
        const auto i = hsps_test::random_times(rng, size(rng), span);
        const auto s1 = hsps_test::random_times(rng, size(rng), span);
        const auto s2 = hsps_test::random_times(rng, size(rng), span);
        const auto w = win(rng);
        ASSERT_EQ(count_twofold(i, s1, w), hsps_test::max_matching(i, s1, w)) << trial;
        ASSERT_EQ(count_twofold(s2, i, w), hsps_test::max_matching(s2, i, w)) << trial;
        ASSERT_EQ(count_threefold(i, s1, s2, w), hsps_test::max_triples(i, s1, s2, w)) << trial;
    }
}

TEST(Counting, WindowMonotone) {
    std::mt19937_64 rng(5);
    const auto i = hsps_test::random_times(rng, 2000, 1'000'000);
    const auto s1 = hsps_test::random_times(rng, 2000, 1'000'000);
    const auto s2 = hsps_test::random_times(rng, 2000, 1'000'000);
    CountSummary prev;
    for (std::int64_t w = 0; w <= 2000; w += 50) {
        const auto c = count_all(1'000'000, i, s1, s2, w);
        EXPECT_TRUE(c.check().empty()) << c.check();
        EXPECT_GE(c.n_is1, prev.n_is1);
        EXPECT_GE(c.n_is2, prev.n_is2);
        EXPECT_GE(c.n_is1s2, prev.n_is1s2);
        prev = c;
    }
}

TEST(Counting, InvariantsOnLargeFuzzedStream) {
    std::mt19937_64 rng(77);
    ChannelTimes ct;
    ct.duration_ps = 1'000'000'000;
    for (auto c : all_channels)
        ct[c] = hsps_test::random_times(rng, 350'000, ct.duration_ps);
    const auto c = summarize(ct, CoincidenceSpec{});
    EXPECT_TRUE(c.check().empty()) << c.check();
    EXPECT_EQ(c.n_i, 350'000U);
    EXPECT_GT(c.n_is1s2, 0U);
}

TEST(Counting, OrderingInvariance) {
    std::mt19937_64 rng(12);
    std::vector<TimeTag> tags;
    for (auto c : all_channels)
        for (auto t : hsps_test::random_times(rng, 3000, 5'000'000))
            tags.push_back({c, t});
    const auto a = TagStream::from_unsorted(5'000'000, tags);
    std::shuffle(tags.begin(), tags.end(), rng);
    const auto b = TagStream::from_unsorted(5'000'000, tags);
    EXPECT_EQ(summarize(a, CoincidenceSpec{}), summarize(b, CoincidenceSpec{}));
}

TEST(Delays, ZeroIsIdentityAndShiftIsExact) {
    std::mt19937_64 rng(1);
    ChannelTimes ct;
    ct.duration_ps = 1'000'000;
    for (auto c : all_channels)
        ct[c] = hsps_test::random_times(rng, 500, ct.duration_ps);
    const auto s = ct.to_stream();
    EXPECT_EQ(apply_delays(s, CoincidenceSpec{}), s);

    CoincidenceSpec spec;
    spec.delay_s2_ps = 500;
    const auto d = apply_delays(ct, spec);
    EXPECT_EQ(d[ChannelId::idler], ct[ChannelId::idler]);
    EXPECT_EQ(d[ChannelId::signal1], ct[ChannelId::signal1]);
    const auto &orig = ct[ChannelId::signal2];
    const auto &shifted = d[ChannelId::signal2];
    std::size_t k = 0;
    for (const auto t : orig)
        if (t + 500 < ct.duration_ps)
            EXPECT_EQ(shifted[k++], t + 500);
    EXPECT_EQ(k, shifted.size());
}

TEST(Delays, ForwardThenBackRestoresInterior) {
    std::mt19937_64 rng(3);
    ChannelTimes ct;
    ct.duration_ps = 1'000'000;
    for (auto c : all_channels)
        ct[c] = hsps_test::random_times(rng, 1000, ct.duration_ps);
    CoincidenceSpec fwd;
    fwd.delay_s1_ps = 7000;
    fwd.delay_s2_ps = -3000;
    CoincidenceSpec back;
    back.delay_s1_ps = -7000;
    back.delay_s2_ps = 3000;
    const auto rt = apply_delays(apply_delays(ct, fwd), back);
    for (auto c : {ChannelId::signal1, ChannelId::signal2}) {
        V interior;
        for (auto t : ct[c])
            if (t >= 7000 && t < ct.duration_ps - 7000)
                interior.push_back(t);
        V got;
        for (auto t : rt[c])
            if (t >= 7000 && t < ct.duration_ps - 7000)
                got.push_back(t);
        EXPECT_EQ(got, interior);
        EXPECT_TRUE(std::includes(ct[c].begin(), ct[c].end(), rt[c].begin(), rt[c].end()));
    }
}

TEST(Summarize, EmptyStream) {
    const auto c = summarize(TagStream(100, {}), CoincidenceSpec{});
    EXPECT_EQ(c, CountSummary{.duration_ps = 100});
}

TEST(Summarize, LosslessPairTrain) {
    CouplingModel m;
    m.eta_idler_smf = 1.0;
    m.eta_signal_base = 1.0;
    const auto pairs = generate_pair_train(1'000'000, 10'000);
    const auto r = route_pairs(pairs, m, 3);
    ChannelTimes ct;
    ct.duration_ps = 10'000'000'000;
    ct[ChannelId::idler] = r.idler;
    ct[ChannelId::signal1] = r.s1;
    ct[ChannelId::signal2] = r.s2;
    const auto c = summarize(ct, CoincidenceSpec{});
    EXPECT_EQ(c.n_is1 + c.n_is2, c.n_i);
    EXPECT_EQ(c.n_is1s2, 0U);
}

}  // namespace
