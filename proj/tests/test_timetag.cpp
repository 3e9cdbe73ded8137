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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hsps/timetag.hpp"

namespace {

using namespace hsps;

auto random_stream(std::mt19937_64 &rng, std::size_t n, std::int64_t duration) -> TagStream {
    std::uniform_int_distribution<std::int64_t> t(0, duration - 1);
    std::uniform_int_distribution<int> c(0, 2);
    std::vector<TimeTag> tags(n);
    for (auto &tag : tags)
        tag = {static_cast<ChannelId>(c(rng)), t(rng)};
    return TagStream::from_unsorted(duration, std::move(tags));
}

TEST(Channel, CodesAreFixed) {
    EXPECT_EQ(channel_code(ChannelId::idler), 0);
    EXPECT_EQ(channel_code(ChannelId::signal1), 1);
    EXPECT_EQ(channel_code(ChannelId::signal2), 2);
    EXPECT_FALSE(channel_from_code(3).has_value());
    for (auto c : all_channels)
        EXPECT_EQ(channel_from_code(channel_code(c)), c);
}

TEST(TagStream, RejectsInvalidBodies) {
    EXPECT_THROW(TagStream(10, {{ChannelId::idler, 10}}), invalid_input);
    EXPECT_THROW(TagStream(10, {{ChannelId::idler, -1}}), invalid_input);
    EXPECT_THROW(TagStream(10, {{ChannelId::idler, 5}, {ChannelId::idler, 4}}), invalid_input);
    // equal times must be in channel order
    EXPECT_THROW(TagStream(10, {{ChannelId::signal1, 5}, {ChannelId::idler, 5}}), invalid_input);
    EXPECT_NO_THROW(TagStream(10, {{ChannelId::idler, 5}, {ChannelId::signal1, 5}}));
}

TEST(Merge, EmptyIsIdentity) {
    const auto m = merge_streams(TagStream(), TagStream());
    EXPECT_TRUE(m.empty());
}

TEST(Merge, OrdersAcrossInputs) {
    const TagStream a(1000, {{ChannelId::idler, 100}});
    const TagStream b(1000, {{ChannelId::signal1, 50}});
    const auto m = merge_streams(a, b);
    ASSERT_EQ(m.size(), 2U);
    EXPECT_EQ(m.tags()[0], (TimeTag{ChannelId::signal1, 50}));
    EXPECT_EQ(m.tags()[1], (TimeTag{ChannelId::idler, 100}));
}

TEST(Merge, DurationMismatchThrows) {
    EXPECT_THROW((void)merge_streams(TagStream(10, {}), TagStream(11, {})), invalid_input);
}

TEST(Merge, MatchesFullSortOracle) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        // small duration forces many equal times
        const auto a = random_stream(rng, 1000, 700);
        const auto b = random_stream(rng, 1000, 700);
        std::vector<TimeTag> all(a.tags().begin(), a.tags().end());
        all.insert(all.end(), b.tags().begin(), b.tags().end());
        std::sort(all.begin(), all.end(), tag_before);
        const auto m = merge_streams(a, b);
        EXPECT_TRUE(std::equal(m.tags().begin(), m.tags().end(), all.begin(), all.end()));
        EXPECT_EQ(m, merge_streams(b, a));
        EXPECT_TRUE(check_stream(m.duration_ps(), m.tags()).empty());
    }
}

TEST(ChannelTimes, SplitAndRejoinRoundTrip) {
    std::mt19937_64 rng(3);
    const auto s = random_stream(rng, 5000, 2000);
    const auto ct = ChannelTimes::split(s);
    EXPECT_EQ(ct.total(), s.size());
    EXPECT_EQ(ct.to_stream(), s);
}

TEST(ChannelTimes, RejectsUnsortedChannel) {
    ChannelTimes ct;
    ct.duration_ps = 100;
    ct[ChannelId::signal2] = {5, 3};
    EXPECT_THROW((void)ct.to_stream(), invalid_input);
    ct[ChannelId::signal2] = {5, 100};
    EXPECT_THROW((void)ct.to_stream(), invalid_input);
}

}  // namespace
