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

// Coincidence counting over sorted time streams.
//
// Two tags coincide when |t_a - t_b| <= window_ps (closed window, the full
// window width on each side). Matching is one-to-one: a tag takes part in
// at most one coincidence of a given kind, the way hardware coincidence
// logic consumes events. Three-fold coincidences are anchored on the idler:
// an idler tag forms a triple when an unused s1 tag and an unused s2 tag both
// lie within the window of that idler tag.
//
// Both counters walk the streams with one cursor per stream and always pair
// the earliest usable partner. For equal-width windows this earliest-first
// rule yields a maximum matching.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsps/errors.hpp"
#include "hsps/timetag.hpp"

namespace hsps {

inline constexpr std::int64_t default_window_ps = 410;

struct CoincidenceSpec {
    std::int64_t window_ps{default_window_ps};
    /// Electronic delays added to the signal channels before matching. The
    /// idler is the time reference and is never shifted.
    std::int64_t delay_s1_ps{0};
    std::int64_t delay_s2_ps{0};

    void validate() const {
        if (window_ps <= 0)
            throw invalid_input("window_ps must be > 0");
    }
};

/// Raw counts behind both g2 estimators. Rates are counts / duration.
struct CountSummary {
    std::int64_t duration_ps{0};
    std::uint64_t n_i{0};
    std::uint64_t n_s1{0};
    std::uint64_t n_s2{0};
    std::uint64_t n_is1{0};
    std::uint64_t n_is2{0};
    std::uint64_t n_is1s2{0};

    [[nodiscard]] auto duration_s() const noexcept -> double {
        return static_cast<double>(duration_ps) * 1e-12;
    }
    [[nodiscard]] auto rate_hz(std::uint64_t n) const noexcept -> double {
        return duration_ps > 0 ? static_cast<double>(n) / duration_s() : 0.0;
    }

    /// Empty string when the nesting invariants hold.
    [[nodiscard]] auto check() const -> std::string {
        if (n_is1 > std::min(n_i, n_s1))
            return "n_is1 exceeds a singles count";
        if (n_is2 > std::min(n_i, n_s2))
            return "n_is2 exceeds a singles count";
        if (n_is1s2 > std::min(n_is1, n_is2))
            return "n_is1s2 exceeds a two-fold count";
        return {};
    }

    auto operator+=(const CountSummary &o) noexcept -> CountSummary & {
        duration_ps += o.duration_ps;
        n_i += o.n_i;
        n_s1 += o.n_s1;
        n_s2 += o.n_s2;
        n_is1 += o.n_is1;
        n_is2 += o.n_is2;
        n_is1s2 += o.n_is1s2;
        return *this;
    }

    friend constexpr auto operator==(const CountSummary &, const CountSummary &) -> bool = default;
};

namespace detail {

inline void require_sorted(std::span<const std::int64_t> v, const char *who) {
    if (!std::is_sorted(v.begin(), v.end()))
        throw invalid_input(std::string(who) + ": input stream is not sorted");
}

}  // namespace detail

/// One-to-one two-fold coincidences between sorted streams `a` and `b`.
[[nodiscard]] inline auto count_twofold(std::span<const std::int64_t> a,
                                        std::span<const std::int64_t> b, std::int64_t window_ps)
    -> std::uint64_t {
    if (window_ps < 0)
        throw invalid_input("count_twofold: window_ps must be >= 0");
    detail::require_sorted(a, "count_twofold");
    detail::require_sorted(b, "count_twofold");
    std::uint64_t n = 0;
    std::size_t ia = 0;
    std::size_t ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (b[ib] < a[ia] - window_ps) {
            ++ib;  // too early for this and every later a
        } else if (b[ib] > a[ia] + window_ps) {
            ++ia;  // no partner left for this a
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

/// Herald-anchored one-to-one three-fold coincidences.
[[nodiscard]] inline auto count_threefold(std::span<const std::int64_t> idler,
                                          std::span<const std::int64_t> s1,
                                          std::span<const std::int64_t> s2,
                                          std::int64_t window_ps) -> std::uint64_t {
    if (window_ps < 0)
        throw invalid_input("count_threefold: window_ps must be >= 0");
    detail::require_sorted(idler, "count_threefold");
    detail::require_sorted(s1, "count_threefold");
    detail::require_sorted(s2, "count_threefold");
    std::uint64_t n = 0;
    std::size_t p1 = 0;
    std::size_t p2 = 0;
    for (const auto t : idler) {
        if (p1 == s1.size() || p2 == s2.size())
            break;
        const auto lo = t - window_ps;
        const auto hi = t + window_ps;
        while (p1 < s1.size() && s1[p1] < lo)
            ++p1;
        while (p2 < s2.size() && s2[p2] < lo)
            ++p2;
        if (p1 < s1.size() && p2 < s2.size() && s1[p1] <= hi && s2[p2] <= hi) {
            ++n;
            ++p1;
            ++p2;
        }
    }
    return n;
}

/// Shifts sorted `times` by `delay_ps`, keeping only results in [0, duration).
[[nodiscard]] inline auto shift_times(std::span<const std::int64_t> times, std::int64_t delay_ps,
                                      std::int64_t duration_ps) -> std::vector<std::int64_t> {
    std::vector<std::int64_t> out;
    out.reserve(times.size());
    for (const auto t : times) {
        const auto s = t + delay_ps;
        if (s >= 0 && s < duration_ps)
            out.push_back(s);
    }
    return out;
}

[[nodiscard]] inline auto apply_delays(const ChannelTimes &ct, const CoincidenceSpec &spec)
    -> ChannelTimes {
    ChannelTimes out;
    out.duration_ps = ct.duration_ps;
    out[ChannelId::idler] = ct[ChannelId::idler];
    out[ChannelId::signal1] = shift_times(ct[ChannelId::signal1], spec.delay_s1_ps, ct.duration_ps);
    out[ChannelId::signal2] = shift_times(ct[ChannelId::signal2], spec.delay_s2_ps, ct.duration_ps);
    return out;
}

/// Shifts the signal channels by their delays and drops tags pushed outside
/// the acquisition interval.
[[nodiscard]] inline auto apply_delays(const TagStream &stream, const CoincidenceSpec &spec)
    -> TagStream {
    if (spec.delay_s1_ps == 0 && spec.delay_s2_ps == 0)
        return stream;
    return apply_delays(ChannelTimes::split(stream), spec).to_stream();
}

/// All six counts from already-delayed channel times.
[[nodiscard]] inline auto count_all(std::int64_t duration_ps, std::span<const std::int64_t> idler,
                                    std::span<const std::int64_t> s1,
                                    std::span<const std::int64_t> s2, std::int64_t window_ps)
    -> CountSummary {
    CountSummary c;
    c.duration_ps = duration_ps;
    c.n_i = idler.size();
    c.n_s1 = s1.size();
    c.n_s2 = s2.size();
    c.n_is1 = count_twofold(idler, s1, window_ps);
    c.n_is2 = count_twofold(idler, s2, window_ps);
    c.n_is1s2 = count_threefold(idler, s1, s2, window_ps);
    return c;
}

[[nodiscard]] inline auto summarize(const ChannelTimes &ct, const CoincidenceSpec &spec)
    -> CountSummary {
    spec.validate();
    const auto &idler = ct[ChannelId::idler];
    auto channel = [&](ChannelId c, std::int64_t delay, std::vector<std::int64_t> &scratch)
        -> std::span<const std::int64_t> {
        if (delay == 0)
            return ct[c];
        scratch = shift_times(ct[c], delay, ct.duration_ps);
        return scratch;
    };
    std::vector<std::int64_t> scratch1;
    std::vector<std::int64_t> scratch2;
    const auto s1 = channel(ChannelId::signal1, spec.delay_s1_ps, scratch1);
    const auto s2 = channel(ChannelId::signal2, spec.delay_s2_ps, scratch2);
    return count_all(ct.duration_ps, idler, s1, s2, spec.window_ps);
}

[[nodiscard]] inline auto summarize(const TagStream &stream, const CoincidenceSpec &spec)
    -> CountSummary {
    return summarize(ChannelTimes::split(stream), spec);
}

}  // namespace hsps
