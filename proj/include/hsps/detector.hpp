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
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hsps/errors.hpp"
#include "hsps/rng.hpp"
#include "hsps/spdc.hpp"
#include "hsps/timetag.hpp"

namespace hsps {

/// Single-photon counting module. Defaults describe a typical actively
/// quenched silicon SPAD; only the dark rate comes from a measured device.
struct DetectorParams {
    double efficiency{0.6};
    double dark_rate_hz{25.0};
    double jitter_sigma_ps{350.0};
    std::int64_t dead_time_ps{22'000};

    void validate() const {
        if (!(efficiency >= 0.0 && efficiency <= 1.0))
            throw invalid_input("detector efficiency must be in [0, 1]");
        if (!(dark_rate_hz >= 0.0) || !std::isfinite(dark_rate_hz))
            throw invalid_input("dark_rate_hz must be finite and >= 0");
        if (!(jitter_sigma_ps >= 0.0) || !std::isfinite(jitter_sigma_ps))
            throw invalid_input("jitter_sigma_ps must be finite and >= 0");
        if (dead_time_ps < 0)
            throw invalid_input("dead_time_ps must be >= 0");
    }
};

/// Sorts data in which every element sits close to its final position
/// (jittered times). Insertion sort is linear in the number of inversions;
/// it hands over to std::sort when the input turns out to be far from sorted.
inline void sort_nearly_sorted(std::vector<std::int64_t> &v) {
    const std::size_t budget = 8 * v.size() + 64;
    std::size_t moves = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        const auto x = v[k];
        std::size_t j = k;
        while (j > 0 && v[j - 1] > x) {
            v[j] = v[j - 1];
            --j;
            if (++moves > budget) {
                v[j] = x;
                std::sort(v.begin(), v.end());
                return;
            }
        }
        v[j] = x;
    }
}

/// Non-paralyzable dead time on a sorted vector: drops every tag closer than
/// `dead_time_ps` to the previously kept one.
inline void enforce_dead_time(std::vector<std::int64_t> &times, std::int64_t dead_time_ps) {
    if (dead_time_ps <= 0 || times.empty())
        return;
    std::size_t kept = 1;
    std::int64_t last = times[0];
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (times[k] - last >= dead_time_ps) {
            last = times[k];
            times[kept++] = last;
        }
    }
    times.resize(kept);
}

/// Turns ideal arrival times on one arm into detector clicks.
///
/// Fixed pipeline: (1) keep each arrival with probability `efficiency`;
/// (2) add dark counts as a Poisson process; (3) add Gaussian jitter rounded
/// half away from zero and clamped to [0, duration); (4) sort; (5) apply
/// non-paralyzable dead time.
[[nodiscard]] inline auto detect_times(std::span<const std::int64_t> arrivals,
                                       const DetectorParams &params, std::int64_t duration_ps,
                                       std::uint64_t seed) -> std::vector<std::int64_t> {
    params.validate();
    if (duration_ps < 0)
        throw invalid_input("detect: duration_ps must be >= 0");
    for (std::size_t k = 0; k < arrivals.size(); ++k) {
        if (arrivals[k] < 0 || arrivals[k] >= duration_ps)
            throw invalid_input("detect: arrival outside [0, duration)");
        if (k > 0 && arrivals[k] < arrivals[k - 1])
            throw invalid_input("detect: arrivals must be sorted");
    }

    Rng rng(seed);
    std::vector<std::int64_t> out;
    const double expected_dark =
        params.dark_rate_hz * static_cast<double>(duration_ps) / ps_per_second;
    out.reserve(static_cast<std::size_t>(static_cast<double>(arrivals.size()) *
                                             params.efficiency +
                                         expected_dark + 6.0 * std::sqrt(expected_dark) + 16.0));

    // (1)
    if (params.efficiency >= 1.0) {
        out.assign(arrivals.begin(), arrivals.end());
    } else {
        for (const auto t : arrivals)
            if (uniform01(rng) < params.efficiency)
                out.push_back(t);
    }
    const auto n_photons = static_cast<std::ptrdiff_t>(out.size());

    // (2)
    if (params.dark_rate_hz > 0.0 && duration_ps > 0) {
        const double mean_gap_ps = ps_per_second / params.dark_rate_hz;
        const auto end = static_cast<double>(duration_ps);
        double t = 0.0;
        for (;;) {
            t += mean_gap_ps * standard_exponential(rng);
            if (t >= end)
                break;
            out.push_back(static_cast<std::int64_t>(t));
        }
    }

    // (3)
    if (params.jitter_sigma_ps > 0.0) {
        NormalSampler normal;
        const std::int64_t last = duration_ps - 1;
        for (auto &t : out) {
            t += std::lround(params.jitter_sigma_ps * normal(rng));
            t = std::clamp<std::int64_t>(t, 0, last);
        }
    }

    // (4) photons and darks are each nearly sorted; sort both, then merge
    if (params.jitter_sigma_ps > 0.0 || n_photons != static_cast<std::ptrdiff_t>(out.size())) {
        std::vector<std::int64_t> darks(out.begin() + n_photons, out.end());
        out.resize(static_cast<std::size_t>(n_photons));
        sort_nearly_sorted(out);
        sort_nearly_sorted(darks);
        if (!darks.empty()) {
            const auto mid = out.size();
            out.insert(out.end(), darks.begin(), darks.end());
            std::inplace_merge(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(mid),
                               out.end());
        }
    }

    // (5)
    enforce_dead_time(out, params.dead_time_ps);
    return out;
}

/// detect_times packaged as a single-channel TagStream.
[[nodiscard]] inline auto detect(std::span<const std::int64_t> arrivals,
                                 const DetectorParams &params, std::int64_t duration_ps,
                                 ChannelId channel, std::uint64_t seed) -> TagStream {
    ChannelTimes ct;
    ct.duration_ps = duration_ps;
    ct[channel] = detect_times(arrivals, params, duration_ps, seed);
    return ct.to_stream();
}

}  // namespace hsps
