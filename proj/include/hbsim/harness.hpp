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


#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbsim/channel.hpp"
#include "hbsim/feedback.hpp"

namespace hbsim {

enum class Scheme { sbs, hbs };
enum class ReportFormat { csv, json };

// What a trial does when zero-forcing hits the conditioning guard.
enum class SingularPolicy { skip, error };

const char* to_string(SingularPolicy policy);
SingularPolicy singular_policy_from_string(const std::string& s);

const char* to_string(Scheme s);
const char* to_string(ReportFormat f);
Scheme scheme_from_string(const std::string& s);
ReportFormat format_from_string(const std::string& s);

/// One experiment. Defaults follow the reference setting: M = 256, K = 16,
/// 12 dB, 10 trials.
struct RunConfig {
    std::size_t M = 256;
    std::size_t K = 16;
    std::size_t L = 3; // channel paths per user
    Scheme scheme = Scheme::sbs;
    std::size_t n_rf = 48; // SBS budget
    std::size_t g1 = 32;   // HBS group sizes
    std::size_t g2 = 16;
    double xi = 1.0;
    std::vector<double> snr_db{12.0};
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    std::optional<std::size_t> feedback_bits; // override of the feedback-bit rule
    std::string output;                       // empty: standard output
    ReportFormat format = ReportFormat::csv;
    CodebookScope codebook_scope = CodebookScope::user;
    std::size_t threads = 1;
    double carrier_hz = 60e9;
    std::string channels_file; // optional imported ensemble reused by every trial
    SingularPolicy on_singular = SingularPolicy::skip;
};

/// Throws ConfigError describing the first violated precondition.
void validate(const RunConfig& config);

/// L_h of the configuration: n_rf/K for SBS, ξL₁ + (1−ξ)L₂ for HBS.
double active_clusters(const RunConfig& config);

/// Feedback bits used at `snr_db`: the override if present, else the rule.
std::size_t bits_for(const RunConfig& config, double snr_db);

/// Parses flat `key = value` text; `#` starts a comment. Unknown keys are errors.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies one `key = value` assignment (shared by the parser and the CLI).
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

struct ReportRow {
    std::string label;
    Scheme scheme = Scheme::sbs;
    std::size_t M = 0, K = 0, L = 0;
    std::size_t g1 = 0, g2 = 0; // SBS: g1 = n_rf, g2 = 0
    double xi = 1.0;
    double clusters = 0.0; // L_h
    std::size_t feedback_bits = 0;
    bool bits_overridden = false;
    std::string codebook_scope;
    double snr_db = 0.0;
    double rho = 0.0;
    double gamma_lin = 0.0; // γ̂
    double gamma_db = 0.0;
    double rate_perfect = 0.0; // mean per-user, bits/s/Hz
    double rate_perfect_std = 0.0;
    double rate_quantized = 0.0;
    double rate_quantized_std = 0.0;
    double delta_r = 0.0;
    double delta_r_stderr = 0.0;
    double measured_qe = 0.0;
    std::optional<double> expected_qe; // closed form, L_h ≥ 2 only
    std::optional<double> bound;       // rate-loss bound, L_h ≥ 2 only
    std::optional<double> reference;   // published value, when reproducing
    double captured_group1 = 0.0;
    double captured_group2 = 0.0;
    double max_leakage = 0.0; // perfect-CSI ZF, max_{i≠k} |h_k^H w_i| / ‖h_k‖
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t singular_trials = 0; // excluded from the rate statistics
    std::vector<std::vector<std::size_t>> first_trial_beams_group1; // per user
    std::vector<std::vector<std::size_t>> first_trial_beams_group2;

    bool operator==(const ReportRow&) const = default;
};

struct RateReport {
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;
    double wall_clock_s = 0.0;

    bool operator==(const RateReport&) const = default;
};

/// Seeded Monte Carlo: channels → beamspace → selection → H_eq → RVQ feedback →
/// ZF (perfect and quantized CSI) → rates. One row per configured SNR.
/// ρ is calibrated per row so that (ρ/K)·mean‖h_eq,k‖² hits the configured SNR.
/// Module errors are rethrown with the trial index and the configuration label.
RateReport run(const RunConfig& config, std::string label = {});

/// The channel ensemble that `run` draws for `trial` (export and regression fixtures).
ChannelSet trial_channels(const RunConfig& config, std::size_t trial);

struct Table1Entry {
    std::string label;
    RunConfig config;
    double reference;
};

/// The five reference configurations (SBS 48; HBS 32+16 at ξ = 0 and 1; HBS 48+32
/// at ξ = 0 and 1), sharing `base`'s M, K, SNR, seed, trials, threads and scope.
/// Each row's channel path count equals its active cluster count.
std::vector<Table1Entry> table1_entries(const RunConfig& base);
RateReport reproduce_table1(const RunConfig& base);

enum class SweepSetting { fig2, fig3 };
SweepSetting sweep_setting_from_string(const std::string& s);

struct SweepPoint {
    double snr_db = 0.0;
    std::string scheme; // sbs, hbs_case_i, hbs_case_ii, ideal, rvq_full
    double rate = 0.0;  // mean per-user rate
    double rate_std = 0.0;

    bool operator==(const SweepPoint&) const = default;
};

struct SweepReport {
    std::vector<SweepPoint> points;
    std::vector<std::string> notes;
    double wall_clock_s = 0.0;
};

struct SweepOptions {
    SweepSetting setting = SweepSetting::fig2;
    bool rvq_full_baseline = false;
    std::size_t baseline_antennas = 64;
};

/// Per SNR point of `base.snr_db`: quantized-CSI rate of SBS (3 beams per user),
/// HBS Case I (ξ = 0) and Case II (ξ = 1), plus `ideal`, the best error-free
/// (perfect-CSI) rate among the three. Feedback bits follow the rule at each point.
/// fig2 gives each user 2 group-1 and 1 group-2 beams (32 + 16 at K = 16);
/// fig3 gives 3 and 2 (48 + 32). Each scheme's channel path count equals its
/// active beams per user.
SweepReport sweep_snr(const RunConfig& base, const SweepOptions& options);

/// Default sweep grid: 0 to 20 dB in 2 dB steps.
std::vector<double> default_sweep_grid();

struct QeTableRow {
    double clusters = 0.0;
    std::size_t bits = 0;
    double expected_closed = 0.0;
    std::optional<double> expected_numeric; // absent above max_oracle_bits
    double bound_case_i = 0.0;
    double bound_case_ii = 0.0;
};

std::vector<QeTableRow> qe_table(const std::vector<double>& clusters, const std::vector<std::size_t>& bits);

} // namespace hbsim
