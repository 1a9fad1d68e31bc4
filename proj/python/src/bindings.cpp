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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "hbsim/beamspace.hpp"
#include "hbsim/channel.hpp"
#include "hbsim/error.hpp"
#include "hbsim/feedback.hpp"
#include "hbsim/harness.hpp"
#include "hbsim/precoding.hpp"

namespace py = pybind11;
using namespace hbsim;

namespace {

RunConfig config_from(const std::map<std::string, std::string>& settings)
{
    RunConfig c;
    for (const auto& [key, value] : settings)
        set_config_value(c, key, value);
    return c;
}

py::object optional_value(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

py::dict row_dict(const ReportRow& r)
{
    py::dict d;
    d["label"] = r.label;
    d["scheme"] = to_string(r.scheme);
    d["M"] = r.M;
    d["K"] = r.K;
    d["L"] = r.L;
    d["g1"] = r.g1;
    d["g2"] = r.g2;
    d["xi"] = r.xi;
    d["clusters"] = r.clusters;
    d["feedback_bits"] = r.feedback_bits;
    d["bits_overridden"] = r.bits_overridden;
    d["codebook_scope"] = r.codebook_scope;
    d["snr_db"] = r.snr_db;
    d["rho"] = r.rho;
    d["gamma_lin"] = r.gamma_lin;
    d["gamma_db"] = r.gamma_db;
    d["rate_perfect"] = r.rate_perfect;
    d["rate_perfect_std"] = r.rate_perfect_std;
    d["rate_quantized"] = r.rate_quantized;
    d["rate_quantized_std"] = r.rate_quantized_std;
    d["delta_r"] = r.delta_r;
    d["delta_r_stderr"] = r.delta_r_stderr;
    d["measured_qe"] = r.measured_qe;
    d["expected_qe"] = optional_value(r.expected_qe);
    d["bound"] = optional_value(r.bound);
    d["reference"] = optional_value(r.reference);
    d["captured_group1"] = r.captured_group1;
    d["captured_group2"] = r.captured_group2;
    d["max_leakage"] = r.max_leakage;
    d["seed"] = r.seed;
    d["trials"] = r.trials;
    d["singular_trials"] = r.singular_trials;
    d["beams_group1"] = r.first_trial_beams_group1;
    d["beams_group2"] = r.first_trial_beams_group2;
    return d;
}

py::dict report_dict(const RateReport& r)
{
    py::list rows;
    for (const auto& row : r.rows)
        rows.append(row_dict(row));
    py::dict d;
    d["rows"] = rows;
    d["notes"] = r.notes;
    d["wall_clock_s"] = r.wall_clock_s;
    return d;
}

} // namespace

PYBIND11_MODULE(_hbsim, m)
{
    m.doc() = "Hybrid beam selection simulator for beamspace MIMO (native core)";

    // Translators run most-recent first, so the base class is registered first.
    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
    static py::exception<DomainError> domain_error(m, "DomainError", error.ptr());
    static py::exception<NumericalError> numerical_error(m, "NumericalError", error.ptr());
    static py::exception<SingularityError> singularity_error(m, "SingularityError", numerical_error.ptr());
    static py::exception<IoError> io_error(m, "IoError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const SingularityError& e) {
            py::set_error(singularity_error, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical_error, e.what());
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const IoError& e) {
            py::set_error(io_error, e.what());
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    // numerics
    m.def("log_gamma", &log_gamma, py::arg("x"));
    m.def("beta_fn", &beta_fn, py::arg("x"), py::arg("y"));
    m.def("dft_matrix", [](std::size_t M) { return UnitaryDft(M).matrix(); }, py::arg("M"));
    m.def("cos2_angle", &cos2_angle, py::arg("u"), py::arg("v"));
    m.def("right_pseudoinverse", [](const ComplexMatrix& G) { return right_pseudoinverse(G, "argument"); },
          py::arg("G"));

    // channel
    m.def("steering_vector", &steering_vector, py::arg("phi"), py::arg("M"));
    m.def(
        "sample_channels",
        [](std::size_t M, std::size_t K, std::size_t L, std::uint64_t seed) {
            return sample_channel_set(ArrayGeometry::half_wavelength(M), K, L, Substreams(seed)).matrix;
        },
        py::arg("M"), py::arg("K"), py::arg("L"), py::arg("seed"),
        "M×K channel matrix drawn from the seeded sparse multipath model.");
    m.def(
        "load_channels", [](const std::string& path) { return load_channel_csv(path).matrix; }, py::arg("path"));

    // beamspace
    m.def(
        "select_sbs",
        [](const ComplexMatrix& H, std::size_t n_rf) {
            const auto g = select_sbs(to_beamspace(H, UnitaryDft(static_cast<std::size_t>(H.rows()))), n_rf);
            std::vector<std::vector<std::size_t>> per_user;
            for (std::size_t k = 0; k < static_cast<std::size_t>(H.cols()); ++k)
                per_user.push_back(g.beams_of(k));
            return per_user;
        },
        py::arg("H"), py::arg("n_rf"), "Beams chosen for each user by the greedy magnitude rule.");

    // feedback
    m.def("feedback_bits", &feedback_bits, py::arg("gamma_db"), py::arg("K"), py::arg("clusters"));
    m.def("qe_ccdf", &qe_ccdf, py::arg("z"), py::arg("clusters"), py::arg("bits"));
    m.def("expected_qe_closed", &expected_qe_closed, py::arg("clusters"), py::arg("bits"));
    m.def("expected_qe_numeric", &expected_qe_numeric, py::arg("clusters"), py::arg("bits"));
    m.def(
        "qe_case_bound",
        [](double clusters, std::size_t bits, const std::string& which) {
            if (which != "I" && which != "II")
                throw ConfigError("case must be 'I' or 'II'");
            return qe_case_bound(clusters, bits, which == "I" ? QeCase::I : QeCase::II);
        },
        py::arg("clusters"), py::arg("bits"), py::arg("case"));
    m.def(
        "sample_isotropic_qe",
        [](std::size_t clusters, std::size_t bits, std::size_t samples, std::uint64_t seed) {
            return sample_isotropic_qe(clusters, bits, samples, Substreams(seed));
        },
        py::arg("clusters"), py::arg("bits"), py::arg("samples"), py::arg("seed"));

    // precoding
    m.def(
        "zf_precoder",
        [](const ComplexMatrix& h_eq) {
            auto p = zf_precoder(h_eq);
            return py::make_tuple(p.matrix, p.normalization);
        },
        py::arg("h_eq"));
    m.def("rate_perfect", &rate_perfect, py::arg("h_eq"), py::arg("rho"));
    m.def("rate_quantized", &rate_quantized, py::arg("h_eq"), py::arg("h_eq_hat"), py::arg("rho"));
    m.def("rate_loss_bound", &rate_loss_bound, py::arg("gamma_linear"), py::arg("K"), py::arg("expected_qe"));

    // harness
    m.def(
        "run", [](const std::map<std::string, std::string>& s) { return report_dict(run(config_from(s))); },
        py::arg("settings"));
    m.def(
        "table1", [](const std::map<std::string, std::string>& s) { return report_dict(reproduce_table1(config_from(s))); },
        py::arg("settings"));
    m.def(
        "sweep",
        [](const std::map<std::string, std::string>& s, const std::string& setting, bool rvq_full) {
            RunConfig c = config_from(s);
            if (!s.count("snr_db"))
                c.snr_db = default_sweep_grid();
            SweepOptions o;
            o.setting = sweep_setting_from_string(setting);
            o.rvq_full_baseline = rvq_full;
            const auto r = sweep_snr(c, o);
            py::list points;
            for (const auto& p : r.points) {
                py::dict d;
                d["snr_db"] = p.snr_db;
                d["scheme"] = p.scheme;
                d["rate"] = p.rate;
                d["rate_std"] = p.rate_std;
                points.append(d);
            }
            py::dict d;
            d["points"] = points;
            d["notes"] = r.notes;
            return d;
        },
        py::arg("settings"), py::arg("setting") = "fig2", py::arg("rvq_full") = false);
    m.def(
        "qe_table",
        [](const std::vector<double>& clusters, const std::vector<std::size_t>& bits) {
            py::list rows;
            for (const auto& r : qe_table(clusters, bits)) {
                py::dict d;
                d["L"] = r.clusters;
                d["N"] = r.bits;
                d["E_closed"] = r.expected_closed;
                d["E_numeric"] = optional_value(r.expected_numeric);
                d["bound_caseI"] = r.bound_case_i;
                d["bound_caseII"] = r.bound_case_ii;
                rows.append(d);
            }
            return rows;
        },
        py::arg("clusters"), py::arg("bits"));

#ifdef VERSION_INFO
#define HBSIM_STR(x) #x
#define HBSIM_XSTR(x) HBSIM_STR(x)
    m.attr("__version__") = HBSIM_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
