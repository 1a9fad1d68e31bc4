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


#include "hbsim/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hbsim/error.hpp"
#include "text_util.hpp"

namespace hbsim {

using nlohmann::ordered_json;
using detail::format_double;

namespace {

constexpr const char* report_schema = "hbsim.rate_report/1";
constexpr const char* sweep_schema = "hbsim.sweep_report/1";

std::string format_optional(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

// Users separated by ';', beams within a user by ' '.
std::string format_beams(const std::vector<std::vector<std::size_t>>& beams)
{
    std::string out;
    for (std::size_t k = 0; k < beams.size(); ++k) {
        if (k)
            out += ';';
        for (std::size_t i = 0; i < beams[k].size(); ++i) {
            if (i)
                out += ' ';
            out += std::to_string(beams[k][i]);
        }
    }
    return out;
}

ordered_json number_or_null(double v)
{
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json optional_json(const std::optional<double>& v)
{
    return v ? number_or_null(*v) : ordered_json(nullptr);
}

std::optional<double> optional_from(const ordered_json& j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<double>();
}

double double_from(const ordered_json& j)
{
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

ordered_json row_to_json(const ReportRow& r)
{
    ordered_json j;
    j["label"] = r.label;
    j["scheme"] = to_string(r.scheme);
    j["M"] = r.M;
    j["K"] = r.K;
    j["L"] = r.L;
    j["g1"] = r.g1;
    j["g2"] = r.g2;
    j["xi"] = r.xi;
    j["clusters"] = r.clusters;
    j["feedback_bits"] = r.feedback_bits;
    j["bits_overridden"] = r.bits_overridden;
    j["codebook_scope"] = r.codebook_scope;
    j["snr_db"] = r.snr_db;
    j["rho"] = number_or_null(r.rho);
    j["gamma_lin"] = number_or_null(r.gamma_lin);
    j["gamma_db"] = number_or_null(r.gamma_db);
    j["rate_perfect"] = number_or_null(r.rate_perfect);
    j["rate_perfect_std"] = number_or_null(r.rate_perfect_std);
    j["rate_quantized"] = number_or_null(r.rate_quantized);
    j["rate_quantized_std"] = number_or_null(r.rate_quantized_std);
    j["delta_r"] = number_or_null(r.delta_r);
    j["delta_r_stderr"] = number_or_null(r.delta_r_stderr);
    j["measured_qe"] = number_or_null(r.measured_qe);
    j["expected_qe"] = optional_json(r.expected_qe);
    j["bound"] = optional_json(r.bound);
    j["reference"] = optional_json(r.reference);
    j["captured_group1"] = number_or_null(r.captured_group1);
    j["captured_group2"] = number_or_null(r.captured_group2);
    j["max_leakage"] = number_or_null(r.max_leakage);
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["singular_trials"] = r.singular_trials;
    j["first_trial_beams_group1"] = r.first_trial_beams_group1;
    j["first_trial_beams_group2"] = r.first_trial_beams_group2;
    return j;
}

ReportRow row_from_json(const ordered_json& j)
{
    ReportRow r;
    r.label = j.at("label").get<std::string>();
    r.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    r.M = j.at("M").get<std::size_t>();
    r.K = j.at("K").get<std::size_t>();
    r.L = j.at("L").get<std::size_t>();
    r.g1 = j.at("g1").get<std::size_t>();
    r.g2 = j.at("g2").get<std::size_t>();
    r.xi = j.at("xi").get<double>();
    r.clusters = j.at("clusters").get<double>();
    r.feedback_bits = j.at("feedback_bits").get<std::size_t>();
    r.bits_overridden = j.at("bits_overridden").get<bool>();
    r.codebook_scope = j.at("codebook_scope").get<std::string>();
    r.snr_db = j.at("snr_db").get<double>();
    r.rho = double_from(j.at("rho"));
    r.gamma_lin = double_from(j.at("gamma_lin"));
    r.gamma_db = double_from(j.at("gamma_db"));
    r.rate_perfect = double_from(j.at("rate_perfect"));
    r.rate_perfect_std = double_from(j.at("rate_perfect_std"));
    r.rate_quantized = double_from(j.at("rate_quantized"));
    r.rate_quantized_std = double_from(j.at("rate_quantized_std"));
    r.delta_r = double_from(j.at("delta_r"));
    r.delta_r_stderr = double_from(j.at("delta_r_stderr"));
    r.measured_qe = double_from(j.at("measured_qe"));
    r.expected_qe = optional_from(j.at("expected_qe"));
    r.bound = optional_from(j.at("bound"));
    r.reference = optional_from(j.at("reference"));
    r.captured_group1 = double_from(j.at("captured_group1"));
    r.captured_group2 = double_from(j.at("captured_group2"));
    r.max_leakage = double_from(j.at("max_leakage"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trials = j.at("trials").get<std::size_t>();
    r.singular_trials = j.at("singular_trials").get<std::size_t>();
    r.first_trial_beams_group1 = j.at("first_trial_beams_group1").get<std::vector<std::vector<std::size_t>>>();
    r.first_trial_beams_group2 = j.at("first_trial_beams_group2").get<std::vector<std::vector<std::size_t>>>();
    return r;
}

template <class Writer>
void emit(const std::string& path, Writer&& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        if (!std::cout)
            throw IoError("failed writing to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    write(out);
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

} // namespace

std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_report_csv(const RateReport& report, std::ostream& out)
{
    out << "label,scheme,M,K,L,g1,g2,xi,clusters,feedback_bits,bits_overridden,codebook_scope,snr_db,rho,"
           "gamma_lin,gamma_db,rate_perfect,rate_perfect_std,rate_quantized,rate_quantized_std,delta_r,"
           "delta_r_stderr,measured_qe,expected_qe,bound,reference,captured_group1,captured_group2,"
           "max_leakage,seed,trials,singular_trials,beams_group1,beams_group2\n";
    for (const auto& r : report.rows) {
        out << csv_escape(r.label) << ',' << to_string(r.scheme) << ',' << r.M << ',' << r.K << ',' << r.L << ','
            << r.g1 << ',' << r.g2 << ',' << format_double(r.xi) << ',' << format_double(r.clusters) << ','
            << r.feedback_bits << ',' << (r.bits_overridden ? "true" : "false") << ','
            << csv_escape(r.codebook_scope) << ',' << format_double(r.snr_db) << ',' << format_double(r.rho) << ','
            << format_double(r.gamma_lin) << ',' << format_double(r.gamma_db) << ','
            << format_double(r.rate_perfect) << ',' << format_double(r.rate_perfect_std) << ','
            << format_double(r.rate_quantized) << ',' << format_double(r.rate_quantized_std) << ','
            << format_double(r.delta_r) << ',' << format_double(r.delta_r_stderr) << ','
            << format_double(r.measured_qe) << ',' << format_optional(r.expected_qe) << ','
            << format_optional(r.bound) << ',' << format_optional(r.reference) << ','
            << format_double(r.captured_group1) << ',' << format_double(r.captured_group2) << ','
            << format_double(r.max_leakage) << ',' << r.seed << ',' << r.trials << ',' << r.singular_trials << ','
            << csv_escape(format_beams(r.first_trial_beams_group1)) << ','
            << csv_escape(format_beams(r.first_trial_beams_group2)) << '\n';
    }
}

void write_report_json(const RateReport& report, std::ostream& out)
{
    ordered_json j;
    j["schema"] = report_schema;
    j["metadata"] = {{"notes", report.notes}, {"wall_clock_s", report.wall_clock_s}};
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows)
        rows.push_back(row_to_json(r));
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

RateReport read_report_json(std::istream& in)
{
    try {
        const ordered_json j = ordered_json::parse(in);
        if (j.at("schema").get<std::string>() != report_schema)
            throw IoError("unexpected report schema '" + j.at("schema").get<std::string>() + "'");
        RateReport report;
        report.notes = j.at("metadata").at("notes").get<std::vector<std::string>>();
        report.wall_clock_s = j.at("metadata").at("wall_clock_s").get<double>();
        for (const auto& r : j.at("rows"))
            report.rows.push_back(row_from_json(r));
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed report JSON: ") + e.what());
    } catch (const ConfigError& e) {
        throw IoError(std::string("malformed report JSON: ") + e.what());
    }
}

void write_sweep_csv(const SweepReport& report, std::ostream& out)
{
    out << "snr_db,scheme,rate,rate_std\n";
    for (const auto& p : report.points)
        out << format_double(p.snr_db) << ',' << csv_escape(p.scheme) << ',' << format_double(p.rate) << ','
            << format_double(p.rate_std) << '\n';
}

void write_sweep_json(const SweepReport& report, std::ostream& out)
{
    ordered_json j;
    j["schema"] = sweep_schema;
    j["metadata"] = {{"notes", report.notes}, {"wall_clock_s", report.wall_clock_s}};
    ordered_json points = ordered_json::array();
    for (const auto& p : report.points)
        points.push_back({{"snr_db", p.snr_db},
                          {"scheme", p.scheme},
                          {"rate", number_or_null(p.rate)},
                          {"rate_std", number_or_null(p.rate_std)}});
    j["points"] = std::move(points);
    out << j.dump(2) << '\n';
}

void write_qe_csv(const std::vector<QeTableRow>& rows, std::ostream& out)
{
    out << "L,N,E_closed,E_numeric,bound_caseI,bound_caseII\n";
    for (const auto& r : rows)
        out << format_double(r.clusters) << ',' << r.bits << ',' << format_double(r.expected_closed) << ','
            << format_optional(r.expected_numeric) << ',' << format_double(r.bound_case_i) << ','
            << format_double(r.bound_case_ii) << '\n';
}

void emit_report(const RateReport& report, const std::string& path, ReportFormat format)
{
    emit(path, [&](std::ostream& out) {
        if (format == ReportFormat::csv)
            write_report_csv(report, out);
        else
            write_report_json(report, out);
    });
}

void emit_report(const SweepReport& report, const std::string& path, ReportFormat format)
{
    emit(path, [&](std::ostream& out) {
        if (format == ReportFormat::csv)
            write_sweep_csv(report, out);
        else
            write_sweep_json(report, out);
    });
}

void emit_qe_table(const std::vector<QeTableRow>& rows, const std::string& path)
{
    emit(path, [&](std::ostream& out) { write_qe_csv(rows, out); });
}

} // namespace hbsim
