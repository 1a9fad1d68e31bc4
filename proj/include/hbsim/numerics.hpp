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

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

namespace hbsim {

using cd = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

/// Residual bound for a right pseudoinverse: |G·G† − I| per entry.
inline constexpr double pinv_residual_tol = 1e-9;
/// Largest admissible 2-norm condition number of a matrix handed to right_pseudoinverse.
inline constexpr double max_condition_number = 1e12;

/// Throws DomainError naming `what` if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

/// M×M spatial DFT (lens) matrix. Row m is a(m/M)^H, so F is unitary.
class UnitaryDft {
public:
    explicit UnitaryDft(std::size_t size);

    std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

    ComplexMatrix apply(const ComplexMatrix& x) const;

private:
    ComplexMatrix matrix_;
};

UnitaryDft dft_matrix(std::size_t M);

/// |u^H v|² / (‖u‖²‖v‖²), clamped to [0, 1]. Throws DomainError on a zero-norm input.
double cos2_angle(const ComplexVector& u, const ComplexVector& v);

/// Right inverse G^H (G G^H)^{-1} of a K×N matrix with N ≥ K.
///
/// The K×K Gram matrix is factored once, refined by one step of iterative
/// refinement, and guarded by an eigenvalue-based condition estimate of G.
/// Throws SingularityError (with `label` in the message) if cond(G) exceeds
/// max_condition_number, and ConfigError if N < K.
ComplexMatrix right_pseudoinverse(const ComplexMatrix& G, const char* label = "matrix");

/// 2-norm condition number of a K×N matrix (K ≤ N) from the Gram eigenvalues.
double condition_number(const ComplexMatrix& G);

// Special functions. All work in the log domain; arguments must be positive.

double log_gamma(double x);
/// lnΓ(x + a) − lnΓ(x), accurate for large x where the direct difference cancels.
double log_gamma_ratio(double x, double a);
double log_beta(double x, double y);
double beta_fn(double x, double y);

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
/// Throws NumericalError carrying the achieved estimate when abs_tol is not met
/// within max_intervals subdivisions.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, std::size_t max_intervals = 4000);

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and `cdf`.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace hbsim
