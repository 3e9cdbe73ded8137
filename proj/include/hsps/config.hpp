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

// Experiment configuration and its key/value file format.
//
// The file is a small TOML subset: `[section]` headers, `key = value` lines,
// `#` comments. Values are numbers, quoted or bare strings, or flat
// `[a, b, c]` lists of numbers. Unknown sections or keys are rejected. See
// docs in README.md for the full key list.

#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hsps/coincidence.hpp"
#include "hsps/detector.hpp"
#include "hsps/errors.hpp"
#include "hsps/spdc.hpp"
#include "hsps/timetag.hpp"

namespace hsps {

enum class SweepKind : std::uint8_t { none, power, oam, delay };
enum class OutputFormat : std::uint8_t { json, csv };

struct SweepConfig {
    SweepKind kind{SweepKind::none};
    std::vector<double> power_mw{7.0, 14.0, 28.0, 56.0};
    std::vector<int> oam_l{0, 1, 2, 3};
    std::int64_t delay_step_ps{500};
    int delay_steps{10};
};

struct ExperimentConfig {
    SourceParams source;
    CouplingModel coupling;
    std::array<DetectorParams, num_channels> detectors{};
    CoincidenceSpec spec;
    SweepConfig sweep;
    /// Simulation runs in independent chunks of this length (per-chunk seeds).
    std::int64_t chunk_ps{1'000'000'000'000};
    std::filesystem::path output_path;
    OutputFormat output_format{OutputFormat::json};

    [[nodiscard]] auto detector(ChannelId c) const noexcept -> const DetectorParams & {
        return detectors[channel_index(c)];
    }

    void validate() const {
        try {
            source.validate();
            coupling.validate();
            for (const auto &d : detectors)
                d.validate();
            spec.validate();
        } catch (const invalid_input &e) {
            throw config_error(e.what());
        }
        if (chunk_ps <= 0)
            throw config_error("chunk_ps must be > 0");
    }
};

/// Sweep lists must be non-empty and strictly increasing.
template <typename T>
inline void validate_sweep_list(const std::vector<T> &v, std::string_view name) {
    if (v.empty())
        throw config_error(std::string(name) + ": sweep list is empty");
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(v[k - 1] < v[k]))
            throw config_error(std::string(name) + ": sweep list must be strictly increasing");
}

namespace config_detail {

inline auto trim(std::string_view s) -> std::string_view {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

struct RawValue {
    std::string text;
    int line{0};
};

inline auto fail(const RawValue &v, const std::string &key, const std::string &why)
    -> config_error {
    return config_error("config line " + std::to_string(v.line) + ": " + key + ": " + why);
}

inline auto as_string(const RawValue &v) -> std::string {
    auto s = trim(v.text);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return std::string(s);
}

inline auto as_double(const RawValue &v, const std::string &key) -> double {
    const auto s = trim(v.text);
    double out = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(out))
        throw fail(v, key, "expected a number, got '" + std::string(s) + "'");
    return out;
}

template <typename Int>
inline auto as_int(const RawValue &v, const std::string &key) -> Int {
    auto s = trim(v.text);
    Int out{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && p == s.data() + s.size())
        return out;
    // Accept integral values written in float notation, e.g. 6e13.
    const double d = as_double(v, key);
    if (d != std::floor(d) || d < static_cast<double>(std::numeric_limits<Int>::lowest()) ||
        d >= static_cast<double>(std::numeric_limits<Int>::max()))
        throw fail(v, key, "expected an integer, got '" + std::string(s) + "'");
    return static_cast<Int>(d);
}

inline auto list_items(const RawValue &v, const std::string &key) -> std::vector<RawValue> {
    auto s = trim(v.text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw fail(v, key, "expected a [list]");
    s = s.substr(1, s.size() - 2);
    std::vector<RawValue> out;
    while (!trim(s).empty()) {
        const auto comma = s.find(',');
        out.push_back({std::string(trim(s.substr(0, comma))), v.line});
        if (out.back().text.empty())
            throw fail(v, key, "empty list item");
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

inline auto parse_format(const std::string &s) -> OutputFormat {
    if (s == "json")
        return OutputFormat::json;
    if (s == "csv")
        return OutputFormat::csv;
    throw config_error("unknown output format '" + s + "' (expected csv or json)");
}

inline auto parse_sweep_kind(const std::string &s) -> SweepKind {
    if (s == "none")
        return SweepKind::none;
    if (s == "power")
        return SweepKind::power;
    if (s == "oam")
        return SweepKind::oam;
    if (s == "delay")
        return SweepKind::delay;
    throw config_error("unknown sweep kind '" + s + "' (expected none, power, oam or delay)");
}

inline void apply_detector_key(DetectorParams &d, const std::string &key, const RawValue &v,
                               const std::string &full) {
    if (key == "efficiency")
        d.efficiency = as_double(v, full);
    else if (key == "dark_rate_hz")
        d.dark_rate_hz = as_double(v, full);
    else if (key == "jitter_sigma_ps")
        d.jitter_sigma_ps = as_double(v, full);
    else if (key == "dead_time_ps")
        d.dead_time_ps = as_int<std::int64_t>(v, full);
    else
        throw fail(v, full, "unknown key");
}

}  // namespace config_detail

inline auto parse_output_format(const std::string &s) -> OutputFormat {
    return config_detail::parse_format(s);
}

/// Parses configuration text. Keys not present keep their defaults.
[[nodiscard]] inline auto parse_config(std::string_view text) -> ExperimentConfig {
    using namespace config_detail;
    // section.key -> value, in file order per section
    std::map<std::string, RawValue> values;
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = line;
        bool in_quotes = false;
        for (std::size_t k = 0; k < sv.size(); ++k) {
            if (sv[k] == '"')
                in_quotes = !in_quotes;
            else if (sv[k] == '#' && !in_quotes) {
                sv = sv.substr(0, k);
                break;
            }
        }
        sv = trim(sv);
        if (sv.empty())
            continue;
        if (sv.front() == '[') {
            if (sv.back() != ']')
                throw config_error("config line " + std::to_string(line_no) +
                                   ": malformed section header");
            section = std::string(trim(sv.substr(1, sv.size() - 2)));
            continue;
        }
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = std::string(trim(sv.substr(0, eq)));
        const auto full = section.empty() ? key : section + "." + key;
        if (values.contains(full))
            throw config_error("config line " + std::to_string(line_no) + ": duplicate key " +
                               full);
        values[full] = {std::string(trim(sv.substr(eq + 1))), line_no};
    }

    ExperimentConfig cfg;
    // [detector] applies to every channel; [detector.<name>] overrides after.
    for (const auto &[full, v] : values) {
        const auto dot = full.rfind('.');
        const auto sec = dot == std::string::npos ? std::string{} : full.substr(0, dot);
        const auto key = dot == std::string::npos ? full : full.substr(dot + 1);
        if (sec == "detector")
            for (auto &d : cfg.detectors)
                apply_detector_key(d, key, v, full);
    }
    for (const auto &[full, v] : values) {
        const auto dot = full.rfind('.');
        const auto sec = dot == std::string::npos ? std::string{} : full.substr(0, dot);
        const auto key = dot == std::string::npos ? full : full.substr(dot + 1);
        if (sec == "detector") {
            continue;
        } else if (sec == "source") {
            if (key == "pump_power_mw")
                cfg.source.pump_power_mw = as_double(v, full);
            else if (key == "pair_rate_per_mw_hz")
                cfg.source.pair_rate_per_mw_hz = as_double(v, full);
            else if (key == "pump_oam_l")
                cfg.source.pump_oam_l = as_int<int>(v, full);
            else if (key == "duration_ps")
                cfg.source.duration_ps = as_int<std::int64_t>(v, full);
            else if (key == "duration_s")
                cfg.source.duration_ps = static_cast<std::int64_t>(
                    std::llround(as_double(v, full) * ps_per_second));
            else if (key == "seed")
                cfg.source.seed = as_int<std::uint64_t>(v, full);
            else if (key == "chunk_ps")
                cfg.chunk_ps = as_int<std::int64_t>(v, full);
            else
                throw fail(v, full, "unknown key");
        } else if (sec == "coupling") {
            if (key == "eta_idler_smf")
                cfg.coupling.eta_idler_smf = as_double(v, full);
            else if (key == "eta_signal_base")
                cfg.coupling.eta_signal_base = as_double(v, full);
            else if (key == "order_falloff")
                cfg.coupling.order_falloff = as_double(v, full);
            else if (key == "spiral_bandwidth")
                cfg.coupling.spiral_bandwidth = as_double(v, full);
            else
                throw fail(v, full, "unknown key");
        } else if (sec.starts_with("detector.")) {
            const auto name = sec.substr(9);
            std::size_t idx = num_channels;
            for (auto c : all_channels)
                if (channel_name(c) == name)
                    idx = channel_index(c);
            if (idx == num_channels)
                throw fail(v, full, "unknown detector '" + name + "'");
            apply_detector_key(cfg.detectors[idx], key, v, full);
        } else if (sec == "coincidence") {
            if (key == "window_ps")
                cfg.spec.window_ps = as_int<std::int64_t>(v, full);
            else if (key == "delay_s1_ps")
                cfg.spec.delay_s1_ps = as_int<std::int64_t>(v, full);
            else if (key == "delay_s2_ps")
                cfg.spec.delay_s2_ps = as_int<std::int64_t>(v, full);
            else
                throw fail(v, full, "unknown key");
        } else if (sec == "sweep") {
            if (key == "kind") {
                cfg.sweep.kind = parse_sweep_kind(as_string(v));
            } else if (key == "power_mw") {
                cfg.sweep.power_mw.clear();
                for (const auto &item : list_items(v, full))
                    cfg.sweep.power_mw.push_back(as_double(item, full));
            } else if (key == "oam_l") {
                cfg.sweep.oam_l.clear();
                for (const auto &item : list_items(v, full))
                    cfg.sweep.oam_l.push_back(as_int<int>(item, full));
            } else if (key == "delay_step_ps") {
                cfg.sweep.delay_step_ps = as_int<std::int64_t>(v, full);
            } else if (key == "delay_steps") {
                cfg.sweep.delay_steps = as_int<int>(v, full);
            } else {
                throw fail(v, full, "unknown key");
            }
        } else if (sec == "output") {
            if (key == "path")
                cfg.output_path = as_string(v);
            else if (key == "format")
                cfg.output_format = parse_format(as_string(v));
            else
                throw fail(v, full, "unknown key");
        } else {
            throw fail(v, full, "unknown section '" + sec + "'");
        }
    }
    cfg.validate();
    return cfg;
}

[[nodiscard]] inline auto load_config(const std::filesystem::path &path) -> ExperimentConfig {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace hsps
