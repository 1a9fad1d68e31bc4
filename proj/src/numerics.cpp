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


#include "hbsim/numerics.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <vector>

#include "hbsim/error.hpp"

namespace hbsim {

void require_finite(const ComplexMatrix& m, const char* what)
{
    if (!m.allFinite())
        throw DomainError(std::string(what) + " contains non-finite entries");
}

UnitaryDft::UnitaryDft(std::size_t size)
{
    if (size == 0)
        throw DomainError("DFT size must be positive");
    const auto M = static_cast<Eigen::Index>(size);
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    matrix_.resize(M, M);
    // Integer phase reduction keeps every entry exact to rounding for large M.
    for (Eigen::Index m = 0; m < M; ++m)
        for (Eigen::Index n = 0; n < M; ++n) {
            const auto k = static_cast<double>((m * n) % M);
            matrix_(m, n) = std::polar(scale, 2.0 * pi * k / static_cast<double>(M));
        }
}

ComplexMatrix UnitaryDft::apply(const ComplexMatrix& x) const
{
    if (x.rows() != matrix_.rows())
        throw ConfigError("DFT of size " + std::to_string(matrix_.rows()) + " applied to " +
                          std::to_string(x.rows()) + " rows");
    return matrix_ * x;
}

UnitaryDft dft_matrix(std::size_t M) { return UnitaryDft(M); }

double cos2_angle(const ComplexVector& u, const ComplexVector& v)
{
    if (u.size() != v.size())
        throw DomainError("cos2_angle: length mismatch");
    const double nu = u.squaredNorm();
    const double nv = v.squaredNorm();
    if (nu <= 0.0 || nv <= 0.0)
        throw DomainError("cos2_angle: zero-norm vector");
    const double c = std::norm(u.dot(v)) / (nu * nv);
    return std::clamp(c, 0.0, 1.0);
}

double condition_number(const ComplexMatrix& G)
{
    if (G.size() == 0)
        return 1.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(G);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0))
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

ComplexMatrix right_pseudoinverse(const ComplexMatrix& G, const char* label)
{
    const auto K = G.rows();
    const auto N = G.cols();
    if (K == 0 || N < K)
        throw ConfigError(std::string(label) + ": right pseudoinverse needs a K×N matrix with N ≥ K ≥ 1, got " +
                          std::to_string(K) + "×" + std::to_string(N));
    require_finite(G, label);

    const double cond = condition_number(G);
    if (!(cond <= max_condition_number))
        throw SingularityError(std::string(label) + " is rank deficient or ill-conditioned (condition estimate " +
                               std::to_string(cond) + ")");

    const ComplexMatrix gram = G * G.adjoint();
    const Eigen::LLT<ComplexMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw SingularityError(std::string(label) + ": Gram matrix is not positive definite");

    const ComplexMatrix eye = ComplexMatrix::Identity(K, K);
    ComplexMatrix x = llt.solve(eye);
    x += llt.solve(eye - gram * x);
    return G.adjoint() * x;
}

// ---------------------------------------------------------------------------
// Special functions

namespace {

constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
constexpr double stirling_min = 15.0;

// Tail of Stirling's series, sum of B_2k / (2k(2k-1) x^(2k-1)) for k = 1..8.
double stirling_tail(double x)
{
    static constexpr std::array<double, 8> c = {
        1.0 / 12.0,      -1.0 / 360.0,        1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0,    -691.0 / 360360.0,   1.0 / 156.0,  -3617.0 / 122400.0};
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * inv2 + *it;
    return acc * inv;
}

double log_gamma_large(double x)
{
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + stirling_tail(x);
}

} // namespace

double log_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
    if (x >= stirling_min)
        return log_gamma_large(x);
    // Shift upward with Γ(z+1) = zΓ(z) until the asymptotic series is accurate.
    double prod = 1.0;
    double z = x;
    while (z < stirling_min) {
        prod *= z;
        z += 1.0;
    }
    return log_gamma_large(z) - std::log(prod);
}

double log_gamma_ratio(double x, double a)
{
    if (!(x > 0.0) || !(x + a > 0.0))
        throw DomainError("log_gamma_ratio: arguments must be positive");
    if (x < stirling_min || x + a < stirling_min)
        return log_gamma(x + a) - log_gamma(x);
    return (x - 0.5) * std::log1p(a / x) + a * std::log(x + a) - a + stirling_tail(x + a) - stirling_tail(x);
}

double log_beta(double x, double y)
{
    if (!(x > 0.0) || !(y > 0.0))
        throw DomainError("beta: arguments must be positive");
    // Put the larger argument in the ratio so large-argument cancellation is avoided.
    const double big = std::max(x, y);
    const double small = std::min(x, y);
    return log_gamma(small) - log_gamma_ratio(big, small);
}

double beta_fn(double x, double y) { return std::exp(log_beta(x, y)); }

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf)
{
    if (samples.empty())
        throw DomainError("ks_distance: empty sample");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = cdf(s[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

} // namespace hbsim
