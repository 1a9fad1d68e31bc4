// SPDX-License-Identifier: Apache-2.0
//
// hbsim: hybrid beam selection simulator for beamspace MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "hbsim/error.hpp"
#include "hbsim/harness.hpp"

using namespace hbsim;

namespace {

RunConfig small_config()
{
    RunConfig c;
    c.M = 64;
    c.K = 4;
    c.L = 2;
    c.n_rf = 8;
    c.g1 = 8;
    c.g2 = 4;
    c.trials = 20;
    c.seed = 5;
    return c;
}

} // namespace

TEST_CASE("a run is a deterministic function of its configuration")
{
    auto c = small_config();
    c.snr_db = {0.0, 12.0};
    const auto a = run(c);
    const auto b = run(c);
    REQUIRE(a.rows.size() == 2);
    CHECK(a.rows == b.rows);
    c.seed = 6;
    CHECK_FALSE(run(c).rows == a.rows);
}

TEST_CASE("thread count does not change results")
{
    auto c = small_config();
    c.scheme = Scheme::hbs;
    const auto serial = run(c);
    c.threads = 4;
    CHECK(run(c).rows == serial.rows);
    c.threads = 64;
    CHECK(run(c).rows == serial.rows);
}

TEST_CASE("report rows carry the configuration and consistent diagnostics")
{
    auto c = small_config();
    c.snr_db = {6.0};
    const auto r = run(c, "probe").rows.front();
    CHECK(r.label == "probe");
    CHECK(r.scheme == Scheme::sbs);
    CHECK(r.M == 64);
    CHECK(r.g1 == 8);
    CHECK(r.g2 == 0);
    CHECK(r.clusters == 2.0);
    CHECK(r.feedback_bits == feedback_bits(6.0, 4, 2.0));
    CHECK_FALSE(r.bits_overridden);
    CHECK(r.gamma_db == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(r.gamma_lin == doctest::Approx(db_to_linear(6.0)).epsilon(1e-12));
    CHECK(r.max_leakage <= 1e-9);
    CHECK(r.captured_group1 > 0.0);
    CHECK(r.captured_group1 <= 1.0);
    CHECK(r.captured_group2 == 0.0);
    CHECK(r.measured_qe >= 0.0);
    CHECK(r.measured_qe <= 1.0);
    REQUIRE(r.expected_qe.has_value());
    REQUIRE(r.bound.has_value());
    CHECK(*r.expected_qe == doctest::Approx(expected_qe_closed(2.0, r.feedback_bits)));
    CHECK(r.first_trial_beams_group1.size() == 4);
    for (const auto& beams : r.first_trial_beams_group1)
        CHECK(beams.size() == 2);
    CHECK(r.rate_perfect > r.rate_quantized);
    CHECK(std::abs(r.delta_r - (r.rate_perfect - r.rate_quantized)) < 1e-12);
}

TEST_CASE("feedback override is recorded")
{
    auto c = small_config();
    c.feedback_bits = 2;
    const auto report = run(c);
    CHECK(report.rows.front().feedback_bits == 2);
    CHECK(report.rows.front().bits_overridden);
}

TEST_CASE("single-cluster rows report no closed-form expectation")
{
    auto c = small_config();
    c.scheme = Scheme::hbs;
    c.xi = 0.0;
    const auto r = run(c).rows.front();
    CHECK(r.clusters == 1.0);
    CHECK(r.feedback_bits == 0);
    CHECK_FALSE(r.expected_qe.has_value());
    CHECK_FALSE(r.bound.has_value());
}

TEST_CASE("measured rate loss respects the bound at multi-cluster settings")
{
    for (auto scheme : {Scheme::sbs, Scheme::hbs}) {
        auto c = small_config();
        c.scheme = scheme;
        c.L = 3;
        c.n_rf = 12;
        c.trials = 100;
        c.snr_db = {4.0, 12.0};
        for (const auto& r : run(c).rows) {
            REQUIRE(r.bound.has_value());
            CHECK(r.delta_r <= *r.bound);
        }
    }
}

TEST_CASE("standard error shrinks with the trial count")
{
    auto c = small_config();
    c.trials = 100;
    const double se100 = run(c).rows.front().delta_r_stderr;
    c.trials = 400;
    const double se400 = run(c).rows.front().delta_r_stderr;
    const double ratio = se100 / se400;
    CHECK(ratio > 1.0);
    CHECK(ratio < 4.0);
}

TEST_CASE("trial errors carry the trial index and label")
{
    const auto geometry = ArrayGeometry::half_wavelength(16);
    std::vector<std::vector<PathComponent>> users(2);
    users[0] = {{cd(1.0, 0.0), 0.0, 0.0}};
    users[1] = {{cd(0.0, 0.0), 0.0, 0.25}};
    const auto path = std::filesystem::temp_directory_path() / "hbsim_dead_user.csv";
    save_channel_csv(make_channel_set(geometry, users), path);
    RunConfig c;
    c.M = 16;
    c.K = 2;
    c.L = 1;
    c.n_rf = 2;
    c.trials = 2;
    c.channels_file = path.string();
    try {
        run(c, "dead user");
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("trial 0 of dead user") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("singular zero-forcing trials follow the configured policy")
{
    const auto geometry = ArrayGeometry::half_wavelength(8);
    std::vector<std::vector<PathComponent>> users(2);
    users[0] = {{cd(1.0, 0.0), 0.0, 0.125}};
    users[1] = users[0];
    const auto path = std::filesystem::temp_directory_path() / "hbsim_twins.csv";
    save_channel_csv(make_channel_set(geometry, users), path);
    RunConfig c;
    c.M = 8;
    c.K = 2;
    c.L = 1;
    c.n_rf = 2;
    c.trials = 3;
    c.channels_file = path.string();
    // Every trial is singular: skipping leaves nothing to average.
    CHECK_THROWS_AS(run(c, "twins"), SingularityError);
    c.on_singular = SingularPolicy::error;
    try {
        run(c, "twins");
        FAIL("expected an error");
    } catch (const SingularityError& e) {
        CHECK(std::string(e.what()).find("trial 0 of twins") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("skipped trials are counted, listed and excluded")
{
    // Reference-size hybrid draw whose thirteenth trial has a rank-deficient
    // leftover-beam block.
    RunConfig c;
    c.scheme = Scheme::hbs;
    c.g1 = 32;
    c.g2 = 16;
    c.xi = 0.0;
    c.L = 1;
    c.seed = 2024;
    c.trials = 13;
    const auto report = run(c, "leftover");
    REQUIRE(report.rows.size() == 1);
    const auto& row = report.rows.front();
    CHECK(row.trials == 13);
    CHECK(row.singular_trials == 1);
    CHECK(std::isfinite(row.delta_r));
    bool listed = false;
    for (const auto& note : report.notes)
        listed = listed || note.find("skipped 1 trial(s) with singular zero-forcing: 12") != std::string::npos;
    CHECK(listed);

    c.trials = 12;
    const auto clean = run(c, "leftover");
    CHECK(clean.rows.front().singular_trials == 0);
    CHECK(clean.rows.front().rate_perfect == doctest::Approx(row.rate_perfect).epsilon(0.2));
    c.trials = 13;
    c.on_singular = SingularPolicy::error;
    CHECK_THROWS_AS(run(c, "leftover"), SingularityError);
}

TEST_CASE("an imported ensemble reproduces the sampled trial")
{
    auto c = small_config();
    c.trials = 1;
    const auto path = std::filesystem::temp_directory_path() / "hbsim_trial0.csv";
    save_channel_csv(trial_channels(c, 0), path);
    const auto sampled = run(c);
    c.channels_file = path.string();
    const auto imported = run(c);
    CHECK(imported.rows == sampled.rows);
    c.L = 3;
    CHECK_THROWS_AS(run(c), ConfigError);
    std::filesystem::remove(path);
}

TEST_CASE("table entries follow the reference configurations")
{
    const auto entries = table1_entries(RunConfig{});
    REQUIRE(entries.size() == 5);
    const std::size_t bits[] = {15, 0, 7, 7, 15};
    const double refs[] = {0.34, 0.73, 0.12, 0.10, 0.09};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(bits_for(entries[i].config, 12.0) == bits[i]);
        CHECK(entries[i].reference == refs[i]);
        CHECK(static_cast<double>(entries[i].config.L) == active_clusters(entries[i].config));
        CHECK_NOTHROW(validate(entries[i].config));
    }
}

TEST_CASE("table reproduction at reduced trials")
{
    RunConfig c;
    c.trials = 2;
    c.seed = 3;
    const auto t = reproduce_table1(c);
    REQUIRE(t.rows.size() == 5);
    for (const auto& r : t.rows) {
        CHECK(r.reference.has_value());
        CHECK(r.trials == 2);
        CHECK(r.seed == 3);
    }
    CHECK(t.rows[0].feedback_bits == 15);
    CHECK(t.rows[1].feedback_bits == 0);
}

TEST_CASE("sweep produces every scheme at every point")
{
    auto c = small_config();
    c.trials = 10;
    c.snr_db = {0.0, 20.0};
    SweepOptions o;
    o.setting = SweepSetting::fig2;
    // The fig2 layout needs g1 = 32 and g2 = 16 beams; K = 4 keeps the budgets valid on 64 beams.
    const auto s = sweep_snr(c, o);
    REQUIRE(s.points.size() == 8);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s.points[i].snr_db == 0.0);
        CHECK(s.points[i + 4].snr_db == 20.0);
        CHECK(s.points[i].scheme == s.points[i + 4].scheme);
        CHECK(s.points[i + 4].rate >= s.points[i].rate);
    }
    CHECK(s.points[0].scheme == "sbs");
    CHECK(s.points[1].scheme == "hbs_case_i");
    CHECK(s.points[2].scheme == "hbs_case_ii");
    CHECK(s.points[3].scheme == "ideal");
    for (std::size_t i = 0; i < 8; i += 4)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(s.points[i + 3].rate >= s.points[i + j].rate);
    CHECK_THROWS_AS(sweep_snr(RunConfig{.snr_db = {}}, o), ConfigError);
}

TEST_CASE("full-dimensional baseline sweep")
{
    RunConfig c;
    c.K = 4;
    c.trials = 3;
    c.snr_db = {0.0};
    c.M = 64;
    SweepOptions o;
    o.rvq_full_baseline = true;
    o.baseline_antennas = 16;
    const auto s = sweep_snr(c, o);
    CHECK(s.points.size() == 5);
    CHECK(s.points.back().scheme == "rvq_full");
    CHECK(s.points.back().rate > 0.0);
    o.baseline_antennas = 128;
    CHECK_THROWS_AS(sweep_snr(c, o), ConfigError);
}

TEST_CASE("default sweep grid")
{
    const auto g = default_sweep_grid();
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 20.0);
}

TEST_CASE("quantization error table")
{
    const auto rows = qe_table({2.0, 3.0}, {7, 15, 22});
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].expected_closed == doctest::Approx(1.0 / 129.0));
    CHECK(rows[0].expected_numeric.has_value());
    CHECK_FALSE(rows[2].expected_numeric.has_value());
    CHECK(rows[4].bound_case_ii == doctest::Approx(std::exp2(-7.5)));
    CHECK_THROWS_AS(qe_table({1.0}, {3}), DomainError);
}
