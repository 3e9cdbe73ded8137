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

// End-to-end pipeline: source -> fibers/beam splitter -> detectors ->
// coincidence counting -> g2 estimates, plus the three experiment drivers
// (delay scan, power sweep, OAM sweep).

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsps/coincidence.hpp"
#include "hsps/config.hpp"
#include "hsps/detector.hpp"
#include "hsps/g2.hpp"
#include "hsps/rng.hpp"
#include "hsps/spdc.hpp"
#include "hsps/timetag.hpp"

namespace hsps {

/// Runs the full detection chain and returns per-channel click times.
///
/// The acquisition is simulated in independent chunks of config.chunk_ps,
/// each with seeds derived from (source.seed, chunk index). Dead time is
/// re-applied over the stitched channels so it also holds across chunk
/// boundaries.
[[nodiscard]] inline auto simulate_channels(const ExperimentConfig &config) -> ChannelTimes {
    config.validate();
    const auto &src = config.source;
    const double expected_pairs =
        src.pair_rate_hz() * static_cast<double>(src.duration_ps) / ps_per_second;
    if (expected_pairs > max_expected_pairs)
        throw capacity_error("simulation would emit " + std::to_string(expected_pairs) +
                             " pairs; the limit is 1e9 per run");

    ChannelTimes out;
    out.duration_ps = src.duration_ps;
    for (std::int64_t start = 0, k = 0; start < src.duration_ps; start += config.chunk_ps, ++k) {
        const auto len = std::min(config.chunk_ps, src.duration_ps - start);
        const auto chunk_seed = derive_seed(src.seed, static_cast<std::uint64_t>(k));
        SourceParams chunk = src;
        chunk.duration_ps = len;
        const auto pairs = generate_pairs(chunk, derive_seed(chunk_seed, rng_stream::emission));
        const auto routed =
            route_pairs(pairs, config.coupling, derive_seed(chunk_seed, rng_stream::routing));
        const std::array<const std::vector<std::int64_t> *, num_channels> arrivals{
            &routed.idler, &routed.s1, &routed.s2};
        for (auto c : all_channels) {
            const auto idx = channel_index(c);
            auto clicks =
                detect_times(*arrivals[idx], config.detector(c), len,
                             derive_seed(chunk_seed, rng_stream::detector_base + channel_code(c)));
            auto &dst = out.times[idx];
            dst.reserve(dst.size() + clicks.size());
            for (const auto t : clicks)
                dst.push_back(t + start);
        }
    }
    for (auto c : all_channels)
        enforce_dead_time(out[c], config.detector(c).dead_time_ps);
    return out;
}

[[nodiscard]] inline auto simulate_stream(const ExperimentConfig &config) -> TagStream {
    return simulate_channels(config).to_stream();
}

/// Counts plus both estimates. An estimate is absent when it is undefined
/// (a two-fold count is zero); `error` then says why.
struct AnalysisResult {
    CountSummary counts;
    std::int64_t window_ps{default_window_ps};
    std::optional<G2Estimate> direct;
    std::optional<G2Estimate> accidental;
    std::string error;

    [[nodiscard]] auto defined() const noexcept -> bool { return direct && accidental; }
};

[[nodiscard]] inline auto analyze_counts(const CountSummary &counts, std::int64_t window_ps)
    -> AnalysisResult {
    AnalysisResult r;
    r.counts = counts;
    r.window_ps = window_ps;
    try {
        r.direct = g2_direct(counts);
        r.accidental = g2_accidental(counts, window_ps);
    } catch (const insufficient_data &e) {
        r.direct.reset();
        r.accidental.reset();
        r.error = e.what();
    }
    return r;
}

[[nodiscard]] inline auto analyze(const ChannelTimes &ct, const CoincidenceSpec &spec)
    -> AnalysisResult {
    return analyze_counts(summarize(ct, spec), spec.window_ps);
}

[[nodiscard]] inline auto analyze(const TagStream &stream, const CoincidenceSpec &spec)
    -> AnalysisResult {
    return analyze(ChannelTimes::split(stream), spec);
}

struct SweepRow {
    double parameter{0.0};
    std::uint64_t seed{0};
    AnalysisResult result;
};

struct SweepResult {
    SweepKind kind{SweepKind::power};
    std::vector<SweepRow> rows;
    /// False when a point had undefined estimates; rows stop at that point.
    bool complete{true};
    std::string error;
};

/// Seed for one sweep point, derived from the base seed and the point's own
/// parameter value (not its position), so reordering a sweep leaves each
/// row unchanged.
[[nodiscard]] inline auto sweep_point_seed(std::uint64_t base_seed, SweepKind kind,
                                           double parameter) -> std::uint64_t {
    const auto bits = std::bit_cast<std::uint64_t>(parameter == 0.0 ? 0.0 : parameter);
    return derive_seed(derive_seed(base_seed, 0x5357'0000ULL + static_cast<std::uint64_t>(kind)),
                       bits);
}

/// Config of one sweep point: the swept parameter and the derived seed.
[[nodiscard]] inline auto sweep_point_config(const ExperimentConfig &config, SweepKind kind,
                                             double parameter) -> ExperimentConfig {
    ExperimentConfig c = config;
    if (kind == SweepKind::power)
        c.source.pump_power_mw = parameter;
    else if (kind == SweepKind::oam)
        c.source.pump_oam_l = static_cast<int>(parameter);
    else
        throw config_error("sweep_point_config: only power and oam sweeps have points");
    c.source.seed = sweep_point_seed(config.source.seed, kind, parameter);
    return c;
}

[[nodiscard]] inline auto sweep_parameters(const ExperimentConfig &config, SweepKind kind)
    -> std::vector<double> {
    std::vector<double> params;
    if (kind == SweepKind::power) {
        validate_sweep_list(config.sweep.power_mw, "sweep.power_mw");
        params = config.sweep.power_mw;
    } else if (kind == SweepKind::oam) {
        validate_sweep_list(config.sweep.oam_l, "sweep.oam_l");
        for (const int l : config.sweep.oam_l) {
            if (l < 0)
                throw config_error("sweep.oam_l: OAM orders must be >= 0");
            params.push_back(static_cast<double>(l));
        }
    } else {
        throw config_error("run_sweep: expected a power or oam sweep");
    }
    return params;
}

/// One row per sweep point, in sweep order. Stops at the first point whose
/// estimates are undefined and marks the result incomplete.
[[nodiscard]] inline auto run_sweep(const ExperimentConfig &config, SweepKind kind)
    -> SweepResult {
    SweepResult out;
    out.kind = kind;
    for (const double p : sweep_parameters(config, kind)) {
        const auto point = sweep_point_config(config, kind, p);
        SweepRow row;
        row.parameter = p;
        row.seed = point.source.seed;
        row.result = analyze(simulate_channels(point), point.spec);
        const bool ok = row.result.defined();
        if (!ok) {
            out.complete = false;
            out.error = row.result.error;
        }
        out.rows.push_back(std::move(row));
        if (!ok)
            break;
    }
    return out;
}

}  // namespace hsps
