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

#include <string>

#include <gtest/gtest.h>

#include "hsps/config.hpp"

#ifndef HSPS_SOURCE_DIR
#define HSPS_SOURCE_DIR "."
#endif

namespace {

using namespace hsps;

TEST(Config, EmptyTextGivesDefaults) {
    const auto c = parse_config("");
    const ExperimentConfig d;
    EXPECT_EQ(c.source.pump_power_mw, d.source.pump_power_mw);
    EXPECT_EQ(c.spec.window_ps, 410);
    EXPECT_EQ(c.detector(ChannelId::idler).dark_rate_hz, 25.0);
    EXPECT_EQ(c.sweep.delay_step_ps, 500);
    EXPECT_EQ(c.output_format, OutputFormat::json);
}

TEST(Config, ShippedExampleMatchesDefaults) {
    const auto c = load_config(std::string(HSPS_SOURCE_DIR) + "/examples_cfg/default.toml");
    const ExperimentConfig d;
    EXPECT_EQ(c.source.pump_power_mw, d.source.pump_power_mw);
    EXPECT_EQ(c.source.pair_rate_per_mw_hz, d.source.pair_rate_per_mw_hz);
    EXPECT_EQ(c.source.duration_ps, d.source.duration_ps);
    EXPECT_EQ(c.source.seed, d.source.seed);
    EXPECT_EQ(c.coupling.eta_idler_smf, d.coupling.eta_idler_smf);
    EXPECT_EQ(c.coupling.spiral_bandwidth, d.coupling.spiral_bandwidth);
    for (auto ch : all_channels) {
        EXPECT_EQ(c.detector(ch).efficiency, d.detector(ch).efficiency);
        EXPECT_EQ(c.detector(ch).dead_time_ps, d.detector(ch).dead_time_ps);
    }
    EXPECT_EQ(c.sweep.power_mw, d.sweep.power_mw);
    EXPECT_EQ(c.sweep.oam_l, d.sweep.oam_l);
}

TEST(Config, ParsesAllSections) {
    const auto c = parse_config(R"(
# comment
[source]
pump_power_mw = 14.5
pump_oam_l = 2
duration_s = 0.25
seed = 18446744073709551615

[coupling]
order_falloff = 2

[detector]
efficiency = 0.5
[detector.signal2]
efficiency = 0.7   # trailing comment

[coincidence]
window_ps = 300
delay_s2_ps = -1500

[sweep]
kind = "power"
power_mw = [1, 2.5, 4]
oam_l = [0, 3]

[output]
path = "out # not a comment.json"
format = csv
)");
    EXPECT_EQ(c.source.pump_power_mw, 14.5);
    EXPECT_EQ(c.source.pump_oam_l, 2);
    EXPECT_EQ(c.source.duration_ps, 250'000'000'000);
    EXPECT_EQ(c.source.seed, 18446744073709551615ULL);
    EXPECT_EQ(c.coupling.order_falloff, 2.0);
    EXPECT_EQ(c.detector(ChannelId::idler).efficiency, 0.5);
    EXPECT_EQ(c.detector(ChannelId::signal1).efficiency, 0.5);
    EXPECT_EQ(c.detector(ChannelId::signal2).efficiency, 0.7);
    EXPECT_EQ(c.spec.window_ps, 300);
    EXPECT_EQ(c.spec.delay_s2_ps, -1500);
    EXPECT_EQ(c.sweep.kind, SweepKind::power);
    EXPECT_EQ(c.sweep.power_mw, (std::vector<double>{1, 2.5, 4}));
    EXPECT_EQ(c.sweep.oam_l, (std::vector<int>{0, 3}));
    EXPECT_EQ(c.output_path, "out # not a comment.json");
    EXPECT_EQ(c.output_format, OutputFormat::csv);
}

TEST(Config, RejectsBadInput) {
    for (const char *bad : {
             "[source]\nbogus = 1\n",
             "[nosuch]\nx = 1\n",
             "[source]\nseed = 1\nseed = 2\n",
             "[source]\npump_power_mw = abc\n",
             "[source]\npump_power_mw = -1\n",
             "[coincidence]\nwindow_ps = 0\n",
             "[coincidence]\nwindow_ps = 1.5\n",
             "[detector]\nefficiency = 2\n",
             "[detector.bogus]\nefficiency = 0.5\n",
             "[sweep]\nkind = sideways\n",
             "[sweep]\npower_mw = [1, x]\n",
             "[output]\nformat = xml\n",
             "[source\n",
             "just text\n",
         })
        EXPECT_THROW((void)parse_config(bad), config_error) << bad;
}

TEST(Config, ErrorNamesLine) {
    try {
        (void)parse_config("[source]\n\nbogus = 1\n");
        FAIL();
    } catch (const config_error &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Config, SweepListValidation) {
    EXPECT_THROW(validate_sweep_list(std::vector<double>{}, "x"), config_error);
    EXPECT_THROW(validate_sweep_list(std::vector<double>{7, 7}, "x"), config_error);
    EXPECT_THROW(validate_sweep_list(std::vector<int>{3, 1}, "x"), config_error);
    EXPECT_NO_THROW(validate_sweep_list(std::vector<int>{0, 1, 2}, "x"));
}

TEST(Config, MissingFile) {
    EXPECT_THROW((void)load_config("/nonexistent/hsps.toml"), config_error);
}

}  // namespace
