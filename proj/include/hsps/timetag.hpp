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

#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hsps/errors.hpp"

namespace hsps {

/// Detector arms of the heralded HBT setup. The numeric codes are part of the
/// on-disk formats and must not change.
enum class ChannelId : std::uint8_t {
    idler = 0,
    signal1 = 1,
    signal2 = 2,
};

inline constexpr std::size_t num_channels = 3;
inline constexpr std::array<ChannelId, num_channels> all_channels{
    ChannelId::idler, ChannelId::signal1, ChannelId::signal2};

[[nodiscard]] constexpr auto channel_code(ChannelId c) noexcept -> std::uint8_t {
    return static_cast<std::uint8_t>(c);
}

[[nodiscard]] constexpr auto channel_index(ChannelId c) noexcept -> std::size_t {
    return static_cast<std::size_t>(c);
}

[[nodiscard]] constexpr auto channel_from_code(std::uint8_t code) noexcept
    -> std::optional<ChannelId> {
    if (code < num_channels)
        return static_cast<ChannelId>(code);
    return std::nullopt;
}

[[nodiscard]] constexpr auto channel_name(ChannelId c) noexcept -> std::string_view {
    switch (c) {
    case ChannelId::idler:
        return "idler";
    case ChannelId::signal1:
        return "signal1";
    case ChannelId::signal2:
        return "signal2";
    }
    return "?";
}

/// One detection event. Time is integer picoseconds since acquisition start.
struct TimeTag {
    ChannelId channel{ChannelId::idler};
    std::int64_t time_ps{0};

    friend constexpr auto operator==(const TimeTag &, const TimeTag &) -> bool = default;
};

/// Stream order: time ascending, ties broken by channel code ascending.
[[nodiscard]] constexpr auto tag_before(const TimeTag &a, const TimeTag &b) noexcept -> bool {
    if (a.time_ps != b.time_ps)
        return a.time_ps < b.time_ps;
    return channel_code(a.channel) < channel_code(b.channel);
}

/// Returns an empty string if `tags` is a valid stream body for `duration_ps`,
/// otherwise a description of the first violation.
[[nodiscard]] inline auto check_stream(std::int64_t duration_ps, std::span<const TimeTag> tags)
    -> std::string {
    if (duration_ps < 0)
        return "negative duration";
    for (std::size_t k = 0; k < tags.size(); ++k) {
        const auto &t = tags[k];
        if (channel_code(t.channel) >= num_channels)
            return "unknown channel code at tag " + std::to_string(k);
        if (t.time_ps < 0 || t.time_ps >= duration_ps)
            return "tag " + std::to_string(k) + " outside [0, duration)";
        if (k > 0 && tag_before(t, tags[k - 1]))
            return "tag " + std::to_string(k) + " out of order";
    }
    return {};
}

/// Immutable, time-sorted multichannel sequence of detection events.
///
/// Every constructor path leaves the object satisfying the stream invariants:
/// tags sorted per `tag_before` and every time in [0, duration_ps).
class TagStream {
  public:
    TagStream() = default;

    /// Validates `tags`; throws invalid_input on the first violation.
    TagStream(std::int64_t duration_ps, std::vector<TimeTag> tags)
        : duration_ps_(duration_ps), tags_(std::move(tags)) {
        if (auto err = check_stream(duration_ps_, tags_); !err.empty())
            throw invalid_input("invalid tag stream: " + err);
    }

    /// Sorts `tags` into stream order, then validates ranges.
    [[nodiscard]] static auto from_unsorted(std::int64_t duration_ps, std::vector<TimeTag> tags)
        -> TagStream {
        std::sort(tags.begin(), tags.end(), tag_before);
        return TagStream(duration_ps, std::move(tags));
    }

    [[nodiscard]] auto duration_ps() const noexcept -> std::int64_t { return duration_ps_; }
    [[nodiscard]] auto tags() const noexcept -> std::span<const TimeTag> { return tags_; }
    [[nodiscard]] auto size() const noexcept -> std::size_t { return tags_.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return tags_.empty(); }

    friend auto operator==(const TagStream &, const TagStream &) -> bool = default;

  private:
    struct trusted_t {};
    TagStream(trusted_t, std::int64_t duration_ps, std::vector<TimeTag> tags)
        : duration_ps_(duration_ps), tags_(std::move(tags)) {
        assert(check_stream(duration_ps_, tags_).empty());
    }
    friend auto merge_streams(const TagStream &, const TagStream &) -> TagStream;
    friend struct ChannelTimes;

    std::int64_t duration_ps_{0};
    std::vector<TimeTag> tags_;
};

/// Merges two streams that cover the same acquisition interval.
[[nodiscard]] inline auto merge_streams(const TagStream &a, const TagStream &b) -> TagStream {
    if (a.duration_ps() != b.duration_ps())
        throw invalid_input("merge_streams: duration mismatch (" + std::to_string(a.duration_ps()) +
                            " vs " + std::to_string(b.duration_ps()) + ")");
    std::vector<TimeTag> out;
    out.reserve(a.size() + b.size());
    std::merge(a.tags_.begin(), a.tags_.end(), b.tags_.begin(), b.tags_.end(),
               std::back_inserter(out), tag_before);
    return TagStream(TagStream::trusted_t{}, a.duration_ps(), std::move(out));
}

/// Per-channel view of a stream: three sorted time vectors. This is the
/// working representation for counting; it holds the same information as a
/// TagStream with half the memory.
struct ChannelTimes {
    std::int64_t duration_ps{0};
    std::array<std::vector<std::int64_t>, num_channels> times;

    [[nodiscard]] auto operator[](ChannelId c) noexcept -> std::vector<std::int64_t> & {
        return times[channel_index(c)];
    }
    [[nodiscard]] auto operator[](ChannelId c) const noexcept
        -> const std::vector<std::int64_t> & {
        return times[channel_index(c)];
    }
    [[nodiscard]] auto total() const noexcept -> std::size_t {
        return times[0].size() + times[1].size() + times[2].size();
    }

    [[nodiscard]] static auto split(const TagStream &s) -> ChannelTimes {
        ChannelTimes out;
        out.duration_ps = s.duration_ps();
        std::array<std::size_t, num_channels> n{};
        for (const auto &t : s.tags())
            ++n[channel_index(t.channel)];
        for (std::size_t c = 0; c < num_channels; ++c)
            out.times[c].reserve(n[c]);
        for (const auto &t : s.tags())
            out.times[channel_index(t.channel)].push_back(t.time_ps);
        return out;
    }

    /// Three-way merge back into stream order. Each channel must already be
    /// sorted and in range; throws invalid_input otherwise.
    [[nodiscard]] auto to_stream() const -> TagStream {
        for (std::size_t c = 0; c < num_channels; ++c) {
            const auto &v = times[c];
            if (!std::is_sorted(v.begin(), v.end()))
                throw invalid_input("channel " + std::to_string(c) + " is not sorted");
            if (!v.empty() && (v.front() < 0 || v.back() >= duration_ps))
                throw invalid_input("channel " + std::to_string(c) + " has out-of-range times");
        }
        std::vector<TimeTag> tags;
        tags.reserve(total());
        std::array<std::size_t, num_channels> pos{};
        for (;;) {
            std::size_t best = num_channels;
            for (std::size_t c = 0; c < num_channels; ++c) {
                if (pos[c] == times[c].size())
                    continue;
                // strict < keeps the lower channel code first on ties
                if (best == num_channels || times[c][pos[c]] < times[best][pos[best]])
                    best = c;
            }
            if (best == num_channels)
                break;
            tags.push_back({static_cast<ChannelId>(best), times[best][pos[best]++]});
        }
        return TagStream(TagStream::trusted_t{}, duration_ps, std::move(tags));
    }
};

}  // namespace hsps
