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

// Heralded g2(0) estimators.
//
//   direct:      g2 = R_is1s2 * R_i / (R_is1 * R_is2)
//   accidental:  g2 = R_i * dt * (R_s1 / R_is1 + R_s2 / R_is2)
//
// The accidental form assumes every triple is a true herald/signal pair plus
// an uncorrelated click on the other signal arm; dt is the coincidence
// window (window_ps, not the full 2 * window_ps acceptance width). Errors are first-order propagation of independent Poisson
// counts (variance N), ignoring the covariance between nested counts.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hsps/coincidence.hpp"
#include "hsps/errors.hpp"
#include "hsps/timetag.hpp"

namespace hsps {

enum class G2Method : std::uint8_t { direct, accidental };

/// Data-quality marker attached to an estimate.
enum class G2Flag : std::uint8_t {
    ok,
    /// No three-fold coincidences: the direct value is 0 with zero error.
    no_triples,
};

[[nodiscard]] constexpr auto method_name(G2Method m) noexcept -> std::string_view {
    return m == G2Method::direct ? "direct" : "accidental";
}
[[nodiscard]] constexpr auto flag_name(G2Flag f) noexcept -> std::string_view {
    return f == G2Flag::ok ? "ok" : "no_triples";
}

struct G2Estimate {
    double value{0.0};
    double std_err{0.0};
    G2Method method{G2Method::direct};
    G2Flag flag{G2Flag::ok};
};

struct G2Point {
    std::int64_t tau_ps{0};
    CountSummary counts;
    G2Estimate estimate;
};

struct G2Curve {
    std::int64_t step_ps{0};
    std::vector<G2Point> points;
};

namespace detail {

using u128 = unsigned __int128;

[[nodiscard]] constexpr auto gcd128(u128 a, u128 b) noexcept -> u128 {
    while (b != 0) {
        const u128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

/// num/den as a double. The fraction is reduced first, so equal rationals
/// map to bit-identical doubles.
[[nodiscard]] inline auto exact_ratio(u128 num, u128 den) noexcept -> double {
    if (num == 0)
        return 0.0;
    const u128 g = gcd128(num, den);
    num /= g;
    den /= g;
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

[[nodiscard]] inline auto mul(u128 a, u128 b, bool &overflow) noexcept -> u128 {
    u128 r = 0;
    overflow = overflow || __builtin_mul_overflow(a, b, &r);
    return r;
}

inline void require_twofolds(const CountSummary &c, const char *who) {
    if (c.n_is1 == 0 || c.n_is2 == 0)
        throw insufficient_data(std::string(who) +
                                ": a two-fold coincidence count is zero, g2 is undefined");
}

}  // namespace detail

/// Direct estimator from three-fold coincidences. Durations cancel, so the
/// value is an exact function of the integer counts.
[[nodiscard]] inline auto g2_direct(const CountSummary &c) -> G2Estimate {
    detail::require_twofolds(c, "g2_direct");
    G2Estimate e;
    e.method = G2Method::direct;
    if (c.n_is1s2 == 0) {
        e.flag = G2Flag::no_triples;
        return e;
    }
    using detail::u128;
    e.value = detail::exact_ratio(u128{c.n_is1s2} * c.n_i, u128{c.n_is1} * c.n_is2);
    const double rel2 = 1.0 / static_cast<double>(c.n_is1s2) + 1.0 / static_cast<double>(c.n_i) +
                        1.0 / static_cast<double>(c.n_is1) + 1.0 / static_cast<double>(c.n_is2);
    e.std_err = e.value * std::sqrt(rel2);
    return e;
}

/// Accidentals-only estimator. `resolving_ps` is dt in picoseconds; the
/// analysis pipeline passes the coincidence window.
[[nodiscard]] inline auto g2_accidental(const CountSummary &c, std::int64_t resolving_ps)
    -> G2Estimate {
    detail::require_twofolds(c, "g2_accidental");
    if (c.duration_ps <= 0)
        throw insufficient_data("g2_accidental: zero acquisition time");
    if (resolving_ps < 0)
        throw invalid_input("g2_accidental: resolving time must be >= 0");
    G2Estimate e;
    e.method = G2Method::accidental;

    // n_i * dt / T * (n_s1 * n_is2 + n_s2 * n_is1) / (n_is1 * n_is2)
    using detail::u128;
    bool overflow = false;
    const u128 bracket = detail::mul(c.n_s1, c.n_is2, overflow) +
                         detail::mul(c.n_s2, c.n_is1, overflow);
    const u128 num = detail::mul(detail::mul(c.n_i, static_cast<std::uint64_t>(resolving_ps),
                                             overflow),
                                 bracket, overflow);
    const u128 den = detail::mul(detail::mul(static_cast<std::uint64_t>(c.duration_ps), c.n_is1,
                                             overflow),
                                 c.n_is2, overflow);
    const double a1 = static_cast<double>(c.n_s1) / static_cast<double>(c.n_is1);
    const double a2 = static_cast<double>(c.n_s2) / static_cast<double>(c.n_is2);
    const double ri_dt = static_cast<double>(c.n_i) * static_cast<double>(resolving_ps) /
                         static_cast<double>(c.duration_ps);
    e.value = overflow ? ri_dt * (a1 + a2) : detail::exact_ratio(num, den);

    const double var_a1 =
        a1 * a1 * (1.0 / static_cast<double>(c.n_s1) + 1.0 / static_cast<double>(c.n_is1));
    const double var_a2 =
        a2 * a2 * (1.0 / static_cast<double>(c.n_s2) + 1.0 / static_cast<double>(c.n_is2));
    const double sum = a1 + a2;
    const double rel2 = 1.0 / static_cast<double>(c.n_i) + (var_a1 + var_a2) / (sum * sum);
    e.std_err = e.value * std::sqrt(rel2);
    return e;
}

/// g2(tau) with the direct estimator: s2 is delayed by base + k * step_ps for
/// k = -n_steps_each_side .. n_steps_each_side.
[[nodiscard]] inline auto g2_delay_scan(const ChannelTimes &ct, const CoincidenceSpec &base,
                                        std::int64_t step_ps, int n_steps_each_side)
    -> G2Curve {
    base.validate();
    if (step_ps <= 0)
        throw invalid_input("g2_delay_scan: step_ps must be > 0");
    if (n_steps_each_side < 0)
        throw invalid_input("g2_delay_scan: n_steps_each_side must be >= 0");
    G2Curve curve;
    curve.step_ps = step_ps;
    curve.points.reserve(static_cast<std::size_t>(2 * n_steps_each_side + 1));
    for (int k = -n_steps_each_side; k <= n_steps_each_side; ++k) {
        CoincidenceSpec spec = base;
        const auto tau = static_cast<std::int64_t>(k) * step_ps;
        spec.delay_s2_ps = base.delay_s2_ps + tau;
        G2Point p;
        p.tau_ps = tau;
        p.counts = summarize(ct, spec);
        p.estimate = g2_direct(p.counts);
        curve.points.push_back(p);
    }
    return curve;
}

[[nodiscard]] inline auto g2_delay_scan(const TagStream &stream, const CoincidenceSpec &base,
                                        std::int64_t step_ps, int n_steps_each_side)
    -> G2Curve {
    return g2_delay_scan(ChannelTimes::split(stream), base, step_ps, n_steps_each_side);
}

}  // namespace hsps
