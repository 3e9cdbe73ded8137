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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hsps {

/// Engine used everywhere in the simulator. Its output sequence is fixed by
/// the C++ standard, so runs are bit-reproducible across toolchains as long
/// as we avoid the implementation-defined <random> distributions; the
/// samplers below are written out for that reason.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] constexpr auto mix64(std::uint64_t x) noexcept -> std::uint64_t {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent child seed from a parent seed and a stream label.
[[nodiscard]] constexpr auto derive_seed(std::uint64_t seed, std::uint64_t label) noexcept
    -> std::uint64_t {
    return mix64(mix64(seed) ^ mix64(label + 0x632be59bd9b4e019ULL));
}

/// Stream labels for the independent random streams of one simulation chunk.
namespace rng_stream {
inline constexpr std::uint64_t emission = 1;
inline constexpr std::uint64_t routing = 2;
inline constexpr std::uint64_t detector_base = 16;  // + channel code
}  // namespace rng_stream

/// Uniform on [0, 1) with 53 random bits.
[[nodiscard]] inline auto uniform01(Rng &rng) noexcept -> double {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponential with unit mean.
[[nodiscard]] inline auto standard_exponential(Rng &rng) noexcept -> double {
    return -std::log1p(-uniform01(rng));
}

/// Standard normal via Box-Muller; caches the second variate.
class NormalSampler {
  public:
    [[nodiscard]] auto operator()(Rng &rng) noexcept -> double {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // 1 - u keeps the log argument in (0, 1]
        const double r = std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
        const double phi = 2.0 * std::numbers::pi * uniform01(rng);
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

  private:
    double spare_{0.0};
    bool has_spare_{false};
};

}  // namespace hsps
