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


#include "hbsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "hbsim/beamspace.hpp"
#include "hbsim/channel.hpp"
#include "hbsim/error.hpp"
#include "hbsim/precoding.hpp"

namespace hbsim {

namespace {

constexpr std::size_t rvq_full_max_bits = 16;

// Runs body(i) for i in [0, count) on `threads` workers. Exceptions are
// collected per index and the lowest-index one is rethrown after joining.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body)
{
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&](std::size_t first) {
        for (std::size_t i = first; i < count; i += threads) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker, t);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// Prefixes the message of any hbsim error with `context`, keeping its type.
template <class F>
auto with_context(const std::string& context, F&& f)
{
    try {
        return f();
    } catch (const SingularityError& e) {
        throw SingularityError(context + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError(context + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(context + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(context + ": " + e.what());
    } catch (const Error& e) {
        throw Error(e.kind(), context + ": " + e.what());
    }
}

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string format_number(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string default_label(const RunConfig& c)
{
    std::ostringstream os;
    if (c.scheme == Scheme::sbs)
        os << "SBS n_rf=" << c.n_rf;
    else
        os << "HBS g1=" << c.g1 << " g2=" << c.g2 << " xi=" << format_number(c.xi);
    os << " L=" << c.L;
    return os.str();
}

std::vector<std::vector<std::size_t>> beams_per_user(const SelectionGroup& g, std::size_t K)
{
    std::vector<std::vector<std::size_t>> out(K);
    for (std::size_t k = 0; k < K; ++k)
        out[k] = g.beams_of(k);
    return out;
}

struct TrialOutcome {
    ComplexMatrix h_eq;
    ComplexMatrix h_hat;
    double mean_qe = 0.0;
    double captured1 = 0.0;
    double captured2 = 0.0;
    std::vector<std::vector<std::size_t>> beams1;
    std::vector<std::vector<std::size_t>> beams2;
};

TrialOutcome simulate_trial(const RunConfig& c, const UnitaryDft& F, const ArrayGeometry& geometry,
                            const ChannelSet* fixed, std::size_t trial, std::size_t bits)
{
    const Substreams streams = Substreams(c.seed).child(trial);
    const ChannelSet channels = fixed ? *fixed : sample_channel_set(geometry, c.K, c.L, streams);
    const BeamspaceChannel bs = to_beamspace(channels, F);
    const HybridSelector sel =
        c.scheme == Scheme::sbs ? sbs_selector(bs, c.n_rf) : build_hybrid_selector(bs, c.g1, c.g2, c.xi);
    const EquivalentChannel eq = equivalent_channel(bs, sel);

    TrialOutcome out;
    out.h_eq = eq.matrix;
    out.h_hat.resize(eq.matrix.rows(), eq.matrix.cols());
    double qe_sum = 0.0;
    for (std::size_t k = 0; k < c.K; ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        const auto q = quantize_rvq(eq.matrix.col(col), sel, bits, k, streams, c.codebook_scope);
        out.h_hat.col(col) = q.quantized_channel;
        qe_sum += q.qe;
    }
    out.mean_qe = qe_sum / static_cast<double>(c.K);
    out.captured1 = captured_energy_fraction(bs, sel.group1);
    out.captured2 = captured_energy_fraction(bs, sel.group2);
    if (trial == 0) {
        out.beams1 = beams_per_user(sel.group1, c.K);
        out.beams2 = beams_per_user(sel.group2, c.K);
    }
    return out;
}

struct TrialRates {
    double perfect = 0.0;
    double quantized = 0.0;
    double leakage = 0.0;
    bool singular = false;
};

// Row plus the indices of trials dropped by the skip policy.
struct SnrResult {
    ReportRow row;
    std::vector<std::size_t> skipped;
};

SnrResult run_one_snr(const RunConfig& c, const std::string& label, double snr_db, const ChannelSet* fixed)
{
    const std::size_t bits = bits_for(c, snr_db);
    const UnitaryDft F(c.M);
    const ArrayGeometry geometry = ArrayGeometry::half_wavelength(c.M, c.carrier_hz);

    std::vector<TrialOutcome> trials(c.trials);
    parallel_for(c.trials, c.threads, [&](std::size_t t) {
        trials[t] = with_context("trial " + std::to_string(t) + " of " + label,
                                 [&] { return simulate_trial(c, F, geometry, fixed, t, bits); });
    });

    std::vector<ComplexMatrix> h_eqs;
    h_eqs.reserve(trials.size());
    double energy = 0.0;
    for (const auto& t : trials) {
        h_eqs.push_back(t.h_eq);
        energy += t.h_eq.colwise().squaredNorm().sum();
    }
    energy /= static_cast<double>(c.trials * c.K);
    const double rho = with_context(label, [&] { return rho_for_snr(snr_db, c.K, energy); });

    std::vector<TrialRates> rates(c.trials);
    parallel_for(c.trials, c.threads, [&](std::size_t t) {
        rates[t] = with_context("trial " + std::to_string(t) + " of " + label, [&] {
            const auto& tr = trials[t];
            TrialRates r;
            try {
                r.perfect = rate_perfect(tr.h_eq, rho).mean();
                r.quantized = rate_quantized(tr.h_eq, tr.h_hat, rho).mean();
                r.leakage = max_leakage_ratio(tr.h_eq, zf_precoder(tr.h_eq).matrix);
            } catch (const SingularityError&) {
                if (c.on_singular == SingularPolicy::error)
                    throw;
                r = TrialRates{};
                r.singular = true;
            }
            return r;
        });
    });

    std::vector<double> perfect, quantized, loss, qe, cap1, cap2;
    std::vector<std::size_t> skipped;
    double leakage = 0.0;
    for (std::size_t t = 0; t < c.trials; ++t) {
        if (rates[t].singular) {
            skipped.push_back(t);
            continue;
        }
        perfect.push_back(rates[t].perfect);
        quantized.push_back(rates[t].quantized);
        loss.push_back(rates[t].perfect - rates[t].quantized);
        qe.push_back(trials[t].mean_qe);
        cap1.push_back(trials[t].captured1);
        cap2.push_back(trials[t].captured2);
        leakage = std::max(leakage, rates[t].leakage);
    }

    if (perfect.empty())
        throw SingularityError(label + ": zero-forcing was singular in every trial");

    ReportRow row;
    row.label = label;
    row.scheme = c.scheme;
    row.M = c.M;
    row.K = c.K;
    row.L = c.L;
    row.g1 = c.scheme == Scheme::sbs ? c.n_rf : c.g1;
    row.g2 = c.scheme == Scheme::sbs ? 0 : c.g2;
    row.xi = c.scheme == Scheme::sbs ? 1.0 : c.xi;
    row.clusters = active_clusters(c);
    row.feedback_bits = bits;
    row.bits_overridden = c.feedback_bits.has_value();
    row.codebook_scope = to_string(c.codebook_scope);
    row.snr_db = snr_db;
    row.rho = rho;
    const SnrEstimate gamma = received_snr_estimate(h_eqs, rho);
    row.gamma_lin = gamma.linear;
    row.gamma_db = gamma.db;
    row.rate_perfect = mean_of(perfect);
    row.rate_perfect_std = std_of(perfect);
    row.rate_quantized = mean_of(quantized);
    row.rate_quantized_std = std_of(quantized);
    row.delta_r = mean_of(loss);
    row.delta_r_stderr = std_of(loss) / std::sqrt(static_cast<double>(loss.size()));
    row.measured_qe = mean_of(qe);
    if (row.clusters >= 2.0) {
        row.expected_qe = expected_qe_closed(row.clusters, bits);
        row.bound = rate_loss_bound(gamma.linear, c.K, *row.expected_qe);
    }
    row.captured_group1 = mean_of(cap1);
    row.captured_group2 = mean_of(cap2);
    row.max_leakage = leakage;
    row.seed = c.seed;
    row.trials = c.trials;
    row.singular_trials = skipped.size();
    row.first_trial_beams_group1 = std::move(trials.front().beams1);
    row.first_trial_beams_group2 = std::move(trials.front().beams2);
    return {std::move(row), std::move(skipped)};
}

std::string skipped_note(const std::string& label, double snr_db, const std::vector<std::size_t>& skipped)
{
    std::ostringstream os;
    os << label << " at " << format_number(snr_db) << " dB: skipped " << skipped.size()
       << " trial(s) with singular zero-forcing:";
    for (std::size_t t : skipped)
        os << ' ' << t;
    return os.str();
}

} // namespace

RateReport run(const RunConfig& config, std::string label)
{
    validate(config);
    if (label.empty())
        label = default_label(config);
    const auto start = std::chrono::steady_clock::now();
    std::optional<ChannelSet> fixed;
    if (!config.channels_file.empty()) {
        fixed = load_channel_csv(config.channels_file);
        if (fixed->geometry.M != config.M || fixed->num_users() != config.K ||
            fixed->paths_per_user() != config.L)
            throw ConfigError("imported ensemble '" + config.channels_file + "' does not match M, K and L");
    }
    RateReport report;
    std::vector<std::string> skip_notes;
    for (double snr : config.snr_db) {
        auto result = run_one_snr(config, label, snr, fixed ? &*fixed : nullptr);
        if (!result.skipped.empty())
            skip_notes.push_back(skipped_note(label, snr, result.skipped));
        report.rows.push_back(std::move(result.row));
    }
    if (fixed)
        report.notes.push_back("channels imported from " + config.channels_file);
    report.notes.push_back(std::string("codebook scope: ") + to_string(config.codebook_scope));
    if (config.M < config.K * config.L)
        report.notes.push_back("M is smaller than K*L; beam supports overlap heavily");
    if (config.feedback_bits)
        report.notes.push_back("feedback bits overridden to " + std::to_string(*config.feedback_bits));
    report.notes.insert(report.notes.end(), skip_notes.begin(), skip_notes.end());
    report.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ChannelSet trial_channels(const RunConfig& config, std::size_t trial)
{
    validate(config);
    return sample_channel_set(ArrayGeometry::half_wavelength(config.M, config.carrier_hz), config.K, config.L,
                              Substreams(config.seed).child(trial));
}

std::vector<Table1Entry> table1_entries(const RunConfig& base)
{
    auto make = [&](Scheme scheme, std::size_t g1, std::size_t g2, double xi, std::size_t L) {
        RunConfig c = base;
        c.scheme = scheme;
        c.L = L;
        c.feedback_bits.reset();
        c.channels_file.clear();
        if (scheme == Scheme::sbs) {
            c.n_rf = g1;
        } else {
            c.g1 = g1;
            c.g2 = g2;
            c.xi = xi;
        }
        c.snr_db = {base.snr_db.front()};
        return c;
    };
    return {
        {"SBS n_rf=48 L=3", make(Scheme::sbs, 48, 0, 1.0, 3), 0.34},
        {"HBS g1=32 g2=16 xi=0 L=1", make(Scheme::hbs, 32, 16, 0.0, 1), 0.73},
        {"HBS g1=32 g2=16 xi=1 L=2", make(Scheme::hbs, 32, 16, 1.0, 2), 0.12},
        {"HBS g1=48 g2=32 xi=0 L=2", make(Scheme::hbs, 48, 32, 0.0, 2), 0.10},
        {"HBS g1=48 g2=32 xi=1 L=3", make(Scheme::hbs, 48, 32, 1.0, 3), 0.09},
    };
}

RateReport reproduce_table1(const RunConfig& base)
{
    const auto start = std::chrono::steady_clock::now();
    RateReport report;
    for (const auto& entry : table1_entries(base)) {
        auto one = run(entry.config, entry.label);
        auto row = std::move(one.rows.front());
        row.reference = entry.reference;
        report.rows.push_back(std::move(row));
        for (auto& note : one.notes)
            if (note.find("singular zero-forcing") != std::string::npos)
                report.notes.push_back(std::move(note));
    }
    report.notes.push_back(std::string("codebook scope: ") + to_string(base.codebook_scope));
    report.notes.push_back("channel paths per user equal each row's active cluster count");
    report.notes.push_back("reference: published per-user rate loss for the same configuration");
    report.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SweepSetting sweep_setting_from_string(const std::string& s)
{
    if (s == "fig2")
        return SweepSetting::fig2;
    if (s == "fig3")
        return SweepSetting::fig3;
    throw ConfigError("unknown sweep setting '" + s + "' (expected fig2 or fig3)");
}

std::vector<double> default_sweep_grid()
{
    std::vector<double> grid;
    for (int s = 0; s <= 20; s += 2)
        grid.push_back(static_cast<double>(s));
    return grid;
}

namespace {

// Full-dimensional RVQ over all antennas, ZF in the antenna domain, no beam selection.
std::vector<SweepPoint> rvq_full_baseline(const RunConfig& base, std::size_t antennas)
{
    if (antennas > 64)
        throw ConfigError("the rvq-full baseline is limited to M <= 64");
    const ArrayGeometry geometry = ArrayGeometry::half_wavelength(antennas, base.carrier_hz);
    std::vector<SweepPoint> points;
    for (double snr : base.snr_db) {
        const std::size_t bits = std::min(feedback_bits(snr, base.K, 3.0), rvq_full_max_bits);
        std::vector<ComplexMatrix> h(base.trials), h_hat(base.trials);
        parallel_for(base.trials, base.threads, [&](std::size_t t) {
            const Substreams streams = Substreams(base.seed).child(t);
            h[t] = sample_channel_set(geometry, base.K, 3, streams).matrix;
            h_hat[t].resize(h[t].rows(), h[t].cols());
            const auto dim = h[t].rows();
            ComplexVector c(dim), best(dim);
            for (Eigen::Index k = 0; k < h[t].cols(); ++k) {
                auto rng = streams.stream(Purpose::baseline, static_cast<std::uint64_t>(k));
                const ComplexVector hk = h[t].col(k);
                double best_c2 = -1.0;
                for (std::size_t i = 0; i < (std::size_t{1} << bits); ++i) {
                    for (Eigen::Index j = 0; j < dim; ++j)
                        c(j) = rng.complex_normal(1.0);
                    c.normalize();
                    const double c2 = std::norm(c.dot(hk));
                    if (c2 > best_c2) {
                        best_c2 = c2;
                        best = c;
                    }
                }
                h_hat[t].col(k) = hk.norm() * best;
            }
        });
        double energy = 0.0;
        for (const auto& m : h)
            energy += m.colwise().squaredNorm().sum();
        energy /= static_cast<double>(base.trials * base.K);
        const double rho = rho_for_snr(snr, base.K, energy);
        std::vector<double> rates;
        for (std::size_t t = 0; t < base.trials; ++t)
            rates.push_back(rate_quantized(h[t], h_hat[t], rho).mean());
        points.push_back({snr, "rvq_full", mean_of(rates), std_of(rates)});
    }
    return points;
}

} // namespace

SweepReport sweep_snr(const RunConfig& base, const SweepOptions& options)
{
    if (base.snr_db.empty())
        throw ConfigError("sweep needs at least one SNR value");
    const auto start = std::chrono::steady_clock::now();
    const bool fig2 = options.setting == SweepSetting::fig2;
    // Beams per user: group 1, group 2 and the SBS baseline.
    const std::size_t L1 = fig2 ? 2 : 3;
    const std::size_t L2 = fig2 ? 1 : 2;
    const std::size_t L_sbs = 3;

    RunConfig sbs = base;
    sbs.scheme = Scheme::sbs;
    sbs.n_rf = L_sbs * base.K;
    sbs.L = L_sbs;
    sbs.feedback_bits.reset();
    sbs.channels_file.clear();

    RunConfig case1 = base;
    case1.scheme = Scheme::hbs;
    case1.g1 = L1 * base.K;
    case1.g2 = L2 * base.K;
    case1.xi = 0.0;
    case1.L = L2;
    case1.feedback_bits.reset();
    case1.channels_file.clear();

    RunConfig case2 = case1;
    case2.xi = 1.0;
    case2.L = L1;

    const auto r_sbs = run(sbs);
    const auto r_case1 = run(case1);
    const auto r_case2 = run(case2);

    SweepReport report;
    for (std::size_t i = 0; i < base.snr_db.size(); ++i) {
        const double snr = base.snr_db[i];
        const auto& a = r_sbs.rows[i];
        const auto& b = r_case1.rows[i];
        const auto& d = r_case2.rows[i];
        report.points.push_back({snr, "sbs", a.rate_quantized, a.rate_quantized_std});
        report.points.push_back({snr, "hbs_case_i", b.rate_quantized, b.rate_quantized_std});
        report.points.push_back({snr, "hbs_case_ii", d.rate_quantized, d.rate_quantized_std});
        const ReportRow* ideal = &a;
        for (const ReportRow* r : {&b, &d})
            if (r->rate_perfect > ideal->rate_perfect)
                ideal = r;
        report.points.push_back({snr, "ideal", ideal->rate_perfect, ideal->rate_perfect_std});
    }
    if (options.rvq_full_baseline) {
        for (auto& p : rvq_full_baseline(base, options.baseline_antennas))
            report.points.push_back(p);
        std::stable_sort(report.points.begin(), report.points.end(),
                         [](const SweepPoint& x, const SweepPoint& y) { return x.snr_db < y.snr_db; });
        report.notes.push_back("rvq_full baseline: M = " + std::to_string(options.baseline_antennas) +
                               ", L = 3, bits capped at " + std::to_string(rvq_full_max_bits) + "; indicative only");
    }
    report.notes.push_back(std::string("setting: ") + (fig2 ? "fig2" : "fig3") + " (g1 = " +
                           std::to_string(case1.g1) + ", g2 = " + std::to_string(case1.g2) +
                           ", SBS n_rf = " + std::to_string(sbs.n_rf) + ")");
    report.notes.push_back(std::string("codebook scope: ") + to_string(base.codebook_scope));
    for (const RateReport* r : {&r_sbs, &r_case1, &r_case2})
        for (const auto& note : r->notes)
            if (note.find("singular zero-forcing") != std::string::npos)
                report.notes.push_back(note);
    if (base.snr_db == default_sweep_grid())
        report.notes.push_back("SNR grid 0-20 dB in 2 dB steps is a chosen default");
    report.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<QeTableRow> qe_table(const std::vector<double>& clusters, const std::vector<std::size_t>& bits)
{
    std::vector<QeTableRow> rows;
    for (double L : clusters)
        for (std::size_t N : bits) {
            QeTableRow r;
            r.clusters = L;
            r.bits = N;
            r.expected_closed = expected_qe_closed(L, N);
            if (N <= max_oracle_bits)
                r.expected_numeric = expected_qe_numeric(L, N);
            r.bound_case_i = qe_case_bound(L, N, QeCase::I);
            r.bound_case_ii = qe_case_bound(L, N, QeCase::II);
            rows.push_back(r);
        }
    return rows;
}

} // namespace hbsim
