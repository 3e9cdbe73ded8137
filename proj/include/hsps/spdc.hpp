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

// Photon-pair source: CW-pumped down-conversion with an OAM-carrying pump.
//
// Pairs are emitted as a homogeneous Poisson process. Each pair splits the
// pump OAM l_p between idler and signal (l_i + l_s = l_p). The idler arm uses
// a single-mode fiber, which only accepts l_i = 0, so every heralded signal
// carries l_s = l_p. Pairs whose idler misses the fiber still send their
// signal towards the multimode signal fibers, with l_s = l_p - l_i drawn from
// the spiral spectrum of idler modes. Signal coupling falls off with |l_s|.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "hsps/errors.hpp"
#include "hsps/rng.hpp"

namespace hsps {

inline constexpr double ps_per_second = 1e12;

/// Upper bound on expected events for a single generate_pairs call.
inline constexpr double max_expected_pairs = 1e9;

struct SourceParams {
    double pump_power_mw{7.0};
    double pair_rate_per_mw_hz{4e5};
    int pump_oam_l{0};
    std::int64_t duration_ps{1'000'000'000'000};
    std::uint64_t seed{1};

    [[nodiscard]] auto pair_rate_hz() const noexcept -> double {
        return pump_power_mw * pair_rate_per_mw_hz;
    }

    void validate() const {
        if (!(pump_power_mw >= 0.0) || !std::isfinite(pump_power_mw))
            throw invalid_input("pump_power_mw must be finite and >= 0");
        if (!(pair_rate_per_mw_hz >= 0.0) || !std::isfinite(pair_rate_per_mw_hz))
            throw invalid_input("pair_rate_per_mw_hz must be finite and >= 0");
        if (!std::isfinite(pair_rate_hz()))
            throw invalid_input("pair rate overflows");
        if (pump_oam_l < 0)
            throw invalid_input("pump_oam_l must be >= 0");
        if (duration_ps < 0)
            throw invalid_input("duration_ps must be >= 0");
    }
};

/// Fiber coupling of the two arms.
///
/// Signal coupling for a photon of OAM l is eta_signal_base / (|l|+1)^order_falloff:
/// the LG mode area grows with |l| and overlaps less with a fixed fiber core.
struct CouplingModel {
    double eta_idler_smf{0.25};
    double eta_signal_base{0.8};
    double order_falloff{1.0};
    /// Standard deviation (in units of hbar) of the idler OAM for pairs whose
    /// idler is not projected onto l_i = 0. Zero means every signal carries l_p.
    double spiral_bandwidth{10.0};

    void validate() const {
        auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
        if (!unit(eta_idler_smf))
            throw invalid_input("eta_idler_smf must be in [0, 1]");
        if (!unit(eta_signal_base))
            throw invalid_input("eta_signal_base must be in [0, 1]");
        if (!(order_falloff >= 0.0) || !std::isfinite(order_falloff))
            throw invalid_input("order_falloff must be finite and >= 0");
        if (!(spiral_bandwidth >= 0.0) || !std::isfinite(spiral_bandwidth))
            throw invalid_input("spiral_bandwidth must be finite and >= 0");
    }
};

struct PairEvent {
    std::int64_t t_ps{0};
    /// OAM of the signal photon when the idler is projected onto l_i = 0.
    int signal_oam_l{0};

    friend constexpr auto operator==(const PairEvent &, const PairEvent &) -> bool = default;
};

[[nodiscard]] inline auto coupling_efficiency(const CouplingModel &model, int l) -> double {
    if (l < 0)
        throw invalid_input("coupling_efficiency: l must be >= 0");
    if (l == 0 || model.order_falloff == 0.0)
        return model.eta_signal_base;
    return model.eta_signal_base / std::pow(static_cast<double>(l) + 1.0, model.order_falloff);
}

/// Poisson emission of pairs over [0, params.duration_ps).
[[nodiscard]] inline auto generate_pairs(const SourceParams &params, std::uint64_t seed)
    -> std::vector<PairEvent> {
    params.validate();
    const double rate = params.pair_rate_hz();
    const double expected = rate * static_cast<double>(params.duration_ps) / ps_per_second;
    if (expected > max_expected_pairs)
        throw capacity_error("generate_pairs: " + std::to_string(expected) +
                             " expected pairs exceeds the limit of 1e9; split the run");
    std::vector<PairEvent> out;
    if (rate <= 0.0 || params.duration_ps == 0)
        return out;
    out.reserve(static_cast<std::size_t>(expected + 6.0 * std::sqrt(expected) + 16.0));

    Rng rng(seed);
    const double mean_gap_ps = ps_per_second / rate;
    const auto end = static_cast<double>(params.duration_ps);
    double t = 0.0;
    for (;;) {
        t += mean_gap_ps * standard_exponential(rng);
        if (t >= end)
            break;
        out.push_back({static_cast<std::int64_t>(t), params.pump_oam_l});
    }
    return out;
}

[[nodiscard]] inline auto generate_pairs(const SourceParams &params) -> std::vector<PairEvent> {
    return generate_pairs(params, params.seed);
}

/// Deterministic pairs at 0, spacing, 2*spacing, ... with l = 0.
[[nodiscard]] inline auto generate_pair_train(std::int64_t spacing_ps, std::size_t count,
                                              int oam_l = 0) -> std::vector<PairEvent> {
    if (spacing_ps <= 0)
        throw invalid_input("generate_pair_train: spacing_ps must be > 0");
    std::vector<PairEvent> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = {static_cast<std::int64_t>(k) * spacing_ps, oam_l};
    return out;
}

/// Inverse-CDF sampler for the integer OAM of an idler that missed the
/// single-mode fiber: a zero-mean Gaussian of width `bandwidth` rounded to
/// the nearest integer.
class SpiralSpectrum {
  public:
    explicit SpiralSpectrum(double bandwidth) {
        if (bandwidth <= 0.0) {
            cdf_ = {1.0};
            lowest_ = 0;
            return;
        }
        const int reach = static_cast<int>(std::ceil(10.0 * bandwidth)) + 1;
        lowest_ = -reach;
        const double scale = 1.0 / (bandwidth * std::numbers::sqrt2);
        double acc = 0.0;
        for (int k = -reach; k <= reach; ++k) {
            // P(round(bandwidth * z) == k)
            acc += 0.5 * (std::erfc(-(k + 0.5) * scale) - std::erfc(-(k - 0.5) * scale));
            cdf_.push_back(acc);
        }
        for (auto &c : cdf_)
            c /= acc;
        cdf_.back() = 1.0;
    }

    [[nodiscard]] auto operator()(double u) const noexcept -> int {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto k = static_cast<int>(it - cdf_.begin());
        return lowest_ + std::min(k, static_cast<int>(cdf_.size()) - 1);
    }

  private:
    std::vector<double> cdf_;
    int lowest_{0};
};

enum class SignalArm : std::uint8_t { lost, s1, s2 };

/// What happened to one pair in route_pairs.
struct RouteOutcome {
    bool idler_kept{false};
    SignalArm signal{SignalArm::lost};
    /// OAM carried by the signal photon (l_p when the idler was kept).
    int signal_oam_l{0};
};

/// Ideal (pre-detector) arrival times per arm.
struct RoutedArrivals {
    std::vector<std::int64_t> idler;
    std::vector<std::int64_t> s1;
    std::vector<std::int64_t> s2;
    std::size_t idler_lost{0};
    std::size_t signal_lost{0};
};

struct IgnoreOutcome {
    constexpr void operator()(const PairEvent &, const RouteOutcome &) const noexcept {}
};

/// Applies fiber coupling and the 50:50 beam splitter to each pair.
///
/// Per pair, in order: the idler survives with probability eta_idler_smf; if
/// it does not, the idler OAM is drawn from the spiral spectrum; the signal
/// survives with probability coupling_efficiency(|l_s|); a survivor goes to
/// s1 or s2 with probability 1/2. The random draws consumed per pair do not
/// depend on the pump OAM, so a fixed seed gives nested heralded-signal sets
/// as l_p grows. `visit(pair, outcome)` is called once per pair.
template <typename Visitor = IgnoreOutcome>
[[nodiscard]] auto route_pairs(const std::vector<PairEvent> &pairs, const CouplingModel &model,
                               std::uint64_t seed, Visitor &&visit = {}) -> RoutedArrivals {
    model.validate();
    for (std::size_t k = 1; k < pairs.size(); ++k)
        if (pairs[k].t_ps < pairs[k - 1].t_ps)
            throw invalid_input("route_pairs: pairs must be sorted by time");

    RoutedArrivals out;
    const auto n = pairs.size();
    out.idler.reserve(static_cast<std::size_t>(static_cast<double>(n) * model.eta_idler_smf) +
                      64);
    const auto per_arm =
        static_cast<std::size_t>(0.5 * static_cast<double>(n) * model.eta_signal_base) + 64;
    out.s1.reserve(per_arm);
    out.s2.reserve(per_arm);

    // Efficiency lookup for small |l|; the spiral spectrum rarely leaves it.
    constexpr int table_size = 128;
    std::vector<double> eta(table_size);
    for (int l = 0; l < table_size; ++l)
        eta[l] = coupling_efficiency(model, l);
    auto eta_of = [&](int l) {
        l = std::abs(l);
        return l < table_size ? eta[l] : coupling_efficiency(model, l);
    };

    const SpiralSpectrum spiral(model.spiral_bandwidth);
    Rng rng(seed);
    for (const auto &pair : pairs) {
        RouteOutcome outcome;
        outcome.idler_kept = uniform01(rng) < model.eta_idler_smf;
        // One word feeds the three remaining decisions: 32 bits for the
        // signal coupling, 1 bit for the splitter, 31 bits for the idler mode.
        const std::uint64_t w = rng();
        const double u_signal = static_cast<double>(w >> 32) * 0x1.0p-32;
        const bool to_s1 = ((w >> 31) & 1U) == 0;
        const double u_mode = static_cast<double>(w & 0x7fff'ffffU) * 0x1.0p-31;
        const int idler_l = outcome.idler_kept ? 0 : spiral(u_mode);
        outcome.signal_oam_l = pair.signal_oam_l - idler_l;

        if (outcome.idler_kept)
            out.idler.push_back(pair.t_ps);
        else
            ++out.idler_lost;

        if (u_signal < eta_of(outcome.signal_oam_l)) {
            if (to_s1) {
                outcome.signal = SignalArm::s1;
                out.s1.push_back(pair.t_ps);
            } else {
                outcome.signal = SignalArm::s2;
                out.s2.push_back(pair.t_ps);
            }
        } else {
            ++out.signal_lost;
        }
        visit(pair, outcome);
    }
    return out;
}

}  // namespace hsps
