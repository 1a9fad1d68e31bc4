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


#include "hbsim/feedback.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hbsim/error.hpp"

namespace hbsim {

namespace {

constexpr double min_codeword_norm = 1e-12;
constexpr int max_resample = 16;

void require_clusters(double clusters, const char* who)
{
    if (!(clusters >= 2.0) || !std::isfinite(clusters))
        throw DomainError(std::string(who) + ": needs at least 2 clusters, got " + std::to_string(clusters));
}

std::vector<std::size_t> scope_support(const HybridSelector& sel, std::size_t user, CodebookScope scope)
{
    auto support = scope == CodebookScope::user ? sel.active_rows_of(user) : sel.active_rows();
    if (support.empty())
        throw ConfigError("user " + std::to_string(user) + " has no active beams to quantize on");
    return support;
}

// Draws one codeword on `support` into `out` (unit norm).
void draw_codeword(RandomStream& rng, const HybridSelector& sel, const std::vector<std::size_t>& support,
                   Eigen::Ref<ComplexVector> out)
{
    for (int attempt = 0; attempt < max_resample; ++attempt) {
        for (std::size_t j = 0; j < support.size(); ++j)
            out(static_cast<Eigen::Index>(j)) = sel.row_scale(support[j]) * rng.complex_normal(1.0);
        const double n = out.norm();
        if (n >= min_codeword_norm) {
            out /= n;
            return;
        }
    }
    throw NumericalError("codeword generation produced near-zero vectors repeatedly");
}

void check_selector(const HybridSelector& sel, const UnitaryDft& F)
{
    for (std::size_t r = 0; r < sel.width(); ++r)
        if (sel.beam_of_row(r) >= F.size())
            throw ConfigError("selector beam index exceeds the lens size " + std::to_string(F.size()));
}

void check_bits(std::size_t bits)
{
    if (bits > max_feedback_bits)
        throw ConfigError("feedback budget of " + std::to_string(bits) + " bits exceeds the supported maximum of " +
                          std::to_string(max_feedback_bits));
}

} // namespace

std::size_t feedback_bits(double gamma_db, std::size_t K, double clusters)
{
    if (K < 2)
        throw DomainError("feedback_bits: needs K ≥ 2 (log2(K-1) undefined), got K = " + std::to_string(K));
    if (!(clusters >= 1.0))
        throw DomainError("feedback_bits: needs L ≥ 1");
    if (!(gamma_db >= 0.0))
        throw DomainError("feedback_bits: SNR must be non-negative in dB, got " + std::to_string(gamma_db));
    const double lm1 = clusters - 1.0;
    const double v = gamma_db / 3.0 * lm1 + lm1 * std::log2(static_cast<double>(K - 1));
    // The slack keeps exact integers from flooring one below after rounding.
    return static_cast<std::size_t>(std::floor(v + 1e-9));
}

const char* to_string(CodebookScope scope)
{
    return scope == CodebookScope::user ? "user" : "group";
}

CodebookScope codebook_scope_from_string(const std::string& s)
{
    if (s == "user")
        return CodebookScope::user;
    if (s == "group")
        return CodebookScope::group;
    throw ConfigError("unknown codebook scope '" + s + "' (expected user or group)");
}

ComplexVector Codebook::codeword(std::size_t i) const
{
    if (i >= size())
        throw DomainError("codeword index out of range");
    ComplexVector w = ComplexVector::Zero(static_cast<Eigen::Index>(dimension));
    for (std::size_t j = 0; j < support.size(); ++j)
        w(static_cast<Eigen::Index>(support[j])) = entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    return w;
}

Codebook generate_codebook(const HybridSelector& sel, const UnitaryDft& F, std::size_t bits, std::size_t user,
                           const Substreams& streams, CodebookScope scope)
{
    check_bits(bits);
    check_selector(sel, F);
    Codebook cb;
    cb.dimension = sel.width();
    cb.support = scope_support(sel, user, scope);
    cb.bits = bits;
    cb.user = user;
    cb.seed = streams.seed();
    const auto count = Eigen::Index{1} << bits;
    cb.entries.resize(static_cast<Eigen::Index>(cb.support.size()), count);
    auto rng = streams.stream(Purpose::codebook, user);
    for (Eigen::Index i = 0; i < count; ++i)
        draw_codeword(rng, sel, cb.support, cb.entries.col(i));
    return cb;
}

QuantizationResult quantize(const ComplexVector& h_eq, const Codebook& cb)
{
    if (static_cast<std::size_t>(h_eq.size()) != cb.dimension)
        throw DomainError("quantize: channel length does not match the codebook dimension");
    const double energy = h_eq.squaredNorm();
    if (!(energy > 0.0))
        throw DomainError("quantize: zero channel");
    ComplexVector restricted(static_cast<Eigen::Index>(cb.support.size()));
    for (std::size_t j = 0; j < cb.support.size(); ++j)
        restricted(static_cast<Eigen::Index>(j)) = h_eq(static_cast<Eigen::Index>(cb.support[j]));

    const ComplexVector inner = cb.entries.adjoint() * restricted;
    QuantizationResult best;
    for (Eigen::Index i = 0; i < inner.size(); ++i) {
        const double z = 1.0 - std::min(1.0, std::norm(inner(i)) / energy);
        if (i == 0 || z < best.qe) {
            best.qe = z;
            best.index = static_cast<std::size_t>(i);
        }
    }
    best.quantized_channel = std::sqrt(energy) * cb.codeword(best.index);
    return best;
}

QuantizationResult quantize_rvq(const ComplexVector& h_eq, const HybridSelector& sel, std::size_t bits,
                                std::size_t user, const Substreams& streams, CodebookScope scope)
{
    check_bits(bits);
    if (static_cast<std::size_t>(h_eq.size()) != sel.width())
        throw DomainError("quantize: channel length does not match the selector width");
    const double energy = h_eq.squaredNorm();
    if (!(energy > 0.0))
        throw DomainError("quantize: zero channel");
    const auto support = scope_support(sel, user, scope);
    const auto dim = static_cast<Eigen::Index>(support.size());
    ComplexVector restricted(dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        restricted(j) = h_eq(static_cast<Eigen::Index>(support[static_cast<std::size_t>(j)]));

    auto rng = streams.stream(Purpose::codebook, user);
    ComplexVector c(dim);
    ComplexVector best_c(dim);
    QuantizationResult best;
    const std::size_t count = std::size_t{1} << bits;
    for (std::size_t i = 0; i < count; ++i) {
        draw_codeword(rng, sel, support, c);
        const double z = 1.0 - std::min(1.0, std::norm(c.dot(restricted)) / energy);
        if (i == 0 || z < best.qe) {
            best.qe = z;
            best.index = i;
            best_c = c;
        }
    }
    best.quantized_channel = ComplexVector::Zero(h_eq.size());
    const double norm = std::sqrt(energy);
    for (Eigen::Index j = 0; j < dim; ++j)
        best.quantized_channel(static_cast<Eigen::Index>(support[static_cast<std::size_t>(j)])) = norm * best_c(j);
    return best;
}

double qe_ccdf(double z, double clusters, std::size_t bits)
{
    require_clusters(clusters, "qe_ccdf");
    if (!(z >= 0.0 && z <= 1.0))
        throw DomainError("qe_ccdf: z must lie in [0, 1]");
    if (z == 0.0)
        return 1.0;
    const double base = std::log1p(-std::pow(z, clusters - 1.0));
    return std::exp(std::ldexp(1.0, static_cast<int>(bits)) * base);
}

double expected_qe_closed(double clusters, std::size_t bits)
{
    require_clusters(clusters, "expected_qe_closed");
    const double n = std::ldexp(1.0, static_cast<int>(bits));
    const double a = clusters / (clusters - 1.0);
    // n·Γ(n)·Γ(a)/Γ(n + a)
    return std::exp(std::log(n) + log_gamma(a) - log_gamma_ratio(n, a));
}

double expected_qe_numeric(double clusters, std::size_t bits)
{
    require_clusters(clusters, "expected_qe_numeric");
    if (bits > max_oracle_bits)
        throw DomainError("expected_qe_numeric: bits above " + std::to_string(max_oracle_bits) +
                          " are not resolved by the quadrature");
    const double n = std::ldexp(1.0, static_cast<int>(bits));
    const double p = clusters - 1.0;
    auto integrand = [n, p](double z) {
        if (z <= 0.0)
            return 1.0;
        return std::exp(n * std::log1p(-std::pow(z, p)));
    };
    // The mass sits within z ~ n^{-1/p} of the origin; breakpoints on that scale keep
    // the adaptive rule from sampling only the flat tail.
    std::vector<double> edges{0.0};
    for (double z = std::pow(n, -1.0 / p); z < 1.0; z *= 4.0)
        edges.push_back(z);
    edges.push_back(1.0);
    const double tol = 1e-12 / static_cast<double>(edges.size() - 1);
    double total = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i)
        total += integrate_adaptive(integrand, edges[i - 1], edges[i], tol).value;
    return total;
}

double qe_case_bound(double clusters, std::size_t bits, QeCase which)
{
    require_clusters(clusters, "qe_case_bound");
    const double n = static_cast<double>(bits);
    return which == QeCase::I ? std::exp2(-n) : std::exp2(-n / 2.0);
}

std::vector<double> sample_isotropic_qe(std::size_t clusters, std::size_t bits, std::size_t samples,
                                        const Substreams& streams)
{
    check_bits(bits);
    if (clusters < 1)
        throw DomainError("sample_isotropic_qe: dimension must be positive");
    const auto dim = static_cast<Eigen::Index>(clusters);
    const auto count = Eigen::Index{1} << bits;
    Codebook cb;
    cb.dimension = clusters;
    cb.support.resize(clusters);
    for (std::size_t j = 0; j < clusters; ++j)
        cb.support[j] = j;
    cb.bits = bits;
    cb.seed = streams.seed();
    cb.entries.resize(dim, count);

    std::vector<double> out;
    out.reserve(samples);
    ComplexVector h(dim);
    for (std::size_t s = 0; s < samples; ++s) {
        auto rng = streams.stream(Purpose::validation, s);
        for (Eigen::Index j = 0; j < dim; ++j)
            h(j) = rng.complex_normal(1.0);
        for (Eigen::Index i = 0; i < count; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j)
                cb.entries(j, i) = rng.complex_normal(1.0);
            cb.entries.col(i).normalize();
        }
        out.push_back(quantize(h, cb).qe);
    }
    return out;
}

} // namespace hbsim
