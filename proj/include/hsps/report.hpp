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

// Machine-readable result files. JSON documents follow
// schemas/results.schema.json; CSV files carry the same numbers, one row per
// point, with doubles printed in shortest round-trip form so both formats
// parse to identical values.

#pragma once

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hsps/config.hpp"
#include "hsps/errors.hpp"
#include "hsps/experiment.hpp"
#include "hsps/g2.hpp"

namespace hsps::report {

inline constexpr int format_version = 1;

[[nodiscard]] inline auto format_double(double x) -> std::string {
    std::array<char, 32> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), p);
}

[[nodiscard]] inline auto to_json(const CountSummary &c) -> nlohmann::json {
    return {{"duration_ps", c.duration_ps}, {"n_i", c.n_i},     {"n_s1", c.n_s1},
            {"n_s2", c.n_s2},               {"n_is1", c.n_is1}, {"n_is2", c.n_is2},
            {"n_is1s2", c.n_is1s2}};
}

[[nodiscard]] inline auto to_json(const G2Estimate &e) -> nlohmann::json {
    return {{"method", method_name(e.method)},
            {"value", e.value},
            {"std_err", e.std_err},
            {"flag", flag_name(e.flag)}};
}

[[nodiscard]] inline auto estimates_json(const AnalysisResult &r) -> nlohmann::json {
    auto arr = nlohmann::json::array();
    if (r.direct)
        arr.push_back(to_json(*r.direct));
    if (r.accidental)
        arr.push_back(to_json(*r.accidental));
    return arr;
}

[[nodiscard]] inline auto to_json(const AnalysisResult &r) -> nlohmann::json {
    nlohmann::json j{{"format_version", format_version},
                     {"kind", "analysis"},
                     {"window_ps", r.window_ps},
                     {"counts", to_json(r.counts)},
                     {"estimates", estimates_json(r)}};
    j["error"] = r.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.error);
    return j;
}

[[nodiscard]] inline auto sweep_kind_name(SweepKind k) -> std::string_view {
    switch (k) {
    case SweepKind::power:
        return "sweep-power";
    case SweepKind::oam:
        return "sweep-oam";
    case SweepKind::delay:
        return "scan-delay";
    case SweepKind::none:
        break;
    }
    return "none";
}

[[nodiscard]] inline auto sweep_parameter_name(SweepKind k) -> std::string_view {
    return k == SweepKind::power ? "pump_power_mw" : "pump_oam_l";
}

[[nodiscard]] inline auto to_json(const SweepResult &s, std::int64_t window_ps)
    -> nlohmann::json {
    auto rows = nlohmann::json::array();
    for (const auto &row : s.rows) {
        nlohmann::json r{{"parameter", row.parameter},
                         {"seed", row.seed},
                         {"counts", to_json(row.result.counts)},
                         {"estimates", estimates_json(row.result)}};
        r["error"] = row.result.error.empty() ? nlohmann::json(nullptr)
                                              : nlohmann::json(row.result.error);
        rows.push_back(std::move(r));
    }
    nlohmann::json j{{"format_version", format_version},
                     {"kind", sweep_kind_name(s.kind)},
                     {"parameter", sweep_parameter_name(s.kind)},
                     {"window_ps", window_ps},
                     {"complete", s.complete},
                     {"rows", std::move(rows)}};
    j["error"] = s.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.error);
    return j;
}

[[nodiscard]] inline auto to_json(const G2Curve &curve, std::int64_t window_ps)
    -> nlohmann::json {
    auto points = nlohmann::json::array();
    for (const auto &p : curve.points)
        points.push_back({{"tau_ps", p.tau_ps},
                          {"counts", to_json(p.counts)},
                          {"estimate", to_json(p.estimate)}});
    return {{"format_version", format_version},
            {"kind", "scan-delay"},
            {"window_ps", window_ps},
            {"step_ps", curve.step_ps},
            {"points", std::move(points)}};
}

inline constexpr std::string_view counts_header = "duration_ps,n_i,n_s1,n_s2,n_is1,n_is2,n_is1s2";
inline constexpr std::string_view estimates_header =
    "g2_direct,g2_direct_err,g2_direct_flag,g2_accidental,g2_accidental_err";

[[nodiscard]] inline auto counts_csv(const CountSummary &c) -> std::string {
    return std::to_string(c.duration_ps) + "," + std::to_string(c.n_i) + "," +
           std::to_string(c.n_s1) + "," + std::to_string(c.n_s2) + "," + std::to_string(c.n_is1) +
           "," + std::to_string(c.n_is2) + "," + std::to_string(c.n_is1s2);
}

/// Undefined estimates are written as empty fields.
[[nodiscard]] inline auto estimates_csv(const AnalysisResult &r) -> std::string {
    std::string s;
    if (r.direct)
        s += format_double(r.direct->value) + "," + format_double(r.direct->std_err) + "," +
             std::string(flag_name(r.direct->flag));
    else
        s += ",,";
    s += ",";
    if (r.accidental)
        s += format_double(r.accidental->value) + "," + format_double(r.accidental->std_err);
    else
        s += ",";
    return s;
}

[[nodiscard]] inline auto to_csv(const AnalysisResult &r) -> std::string {
    return std::string(counts_header) + ",window_ps," + std::string(estimates_header) + "\n" +
           counts_csv(r.counts) + "," + std::to_string(r.window_ps) + "," + estimates_csv(r) +
           "\n";
}

[[nodiscard]] inline auto to_csv(const SweepResult &s, std::int64_t window_ps) -> std::string {
    std::string out = std::string(sweep_parameter_name(s.kind)) + ",seed," +
                      std::string(counts_header) + ",window_ps," + std::string(estimates_header) +
                      "\n";
    for (const auto &row : s.rows)
        out += format_double(row.parameter) + "," + std::to_string(row.seed) + "," +
               counts_csv(row.result.counts) + "," + std::to_string(window_ps) + "," +
               estimates_csv(row.result) + "\n";
    return out;
}

[[nodiscard]] inline auto to_csv(const G2Curve &curve) -> std::string {
    std::string out =
        "tau_ps," + std::string(counts_header) + ",g2_direct,g2_direct_err,g2_direct_flag\n";
    for (const auto &p : curve.points)
        out += std::to_string(p.tau_ps) + "," + counts_csv(p.counts) + "," +
               format_double(p.estimate.value) + "," + format_double(p.estimate.std_err) + "," +
               std::string(flag_name(p.estimate.flag)) + "\n";
    return out;
}

/// Writes `text` to `path`, or to stdout when the path is empty.
inline void emit(const std::string &text, const std::filesystem::path &path, std::ostream &stdout_) {
    if (path.empty()) {
        stdout_ << text;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw io_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw io_error("write failed for " + path.string());
}

}  // namespace hsps::report
