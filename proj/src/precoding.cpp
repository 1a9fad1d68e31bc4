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


#include "hbsim/precoding.hpp"

#include <cmath>
#include <string>

#include "hbsim/error.hpp"

namespace hbsim {

Precoder zf_precoder(const ComplexMatrix& h_eq)
{
    if (h_eq.cols() == 0 || h_eq.rows() < h_eq.cols())
        throw ConfigError("zero-forcing needs at least as many RF chains as users, got " +
                          std::to_string(h_eq.rows()) + "×" + std::to_string(h_eq.cols()));
    Precoder p;
    p.matrix = right_pseudoinverse(h_eq.adjoint(), "equivalent channel H_eq^H");
    p.normalization = p.matrix.colwise().norm().transpose();
    for (Eigen::Index k = 0; k < p.matrix.cols(); ++k) {
        if (!(p.normalization(k) > 0.0))
            throw SingularityError("zero-forcing column " + std::to_string(k) + " vanished");
        p.matrix.col(k) /= p.normalization(k);
    }
    return p;
}

RealVector rates_with_precoder(const ComplexMatrix& h_eq, const ComplexMatrix& w, double rho)
{
    if (h_eq.rows() != w.rows() || h_eq.cols() != w.cols())
        throw DomainError("rate evaluation: channel and precoder shapes differ");
    const auto K = h_eq.cols();
    const double per_user = rho / static_cast<double>(K);
    const Eigen::MatrixXd gains = (h_eq.adjoint() * w).cwiseAbs2(); // (k, i) = |h_k^H w_i|²
    RealVector rates(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double signal = per_user * gains(k, k);
        const double interference = per_user * (gains.row(k).sum() - gains(k, k));
        rates(k) = std::log2(1.0 + signal / (1.0 + interference));
    }
    return rates;
}

RealVector rate_perfect(const ComplexMatrix& h_eq, double rho)
{
    const auto K = h_eq.cols();
    const Precoder p = zf_precoder(h_eq);
    const double per_user = rho / static_cast<double>(K);
    const ComplexMatrix g = h_eq.adjoint() * p.matrix;
    RealVector rates(K);
    for (Eigen::Index k = 0; k < K; ++k)
        rates(k) = std::log2(1.0 + per_user * std::norm(g(k, k)));
    return rates;
}

RealVector rate_quantized(const ComplexMatrix& h_eq, const ComplexMatrix& h_eq_hat, double rho)
{
    return rates_with_precoder(h_eq, zf_precoder(h_eq_hat).matrix, rho);
}

RateLoss rate_loss(const RealVector& perfect, const RealVector& quantized)
{
    if (perfect.size() != quantized.size())
        throw DomainError("rate_loss: length mismatch");
    RateLoss out;
    out.per_user = perfect - quantized;
    out.mean = out.per_user.size() > 0 ? out.per_user.mean() : 0.0;
    return out;
}

double rate_loss_bound(double gamma_linear, std::size_t K, double expected_qe)
{
    if (!(gamma_linear >= 0.0) || !(expected_qe >= 0.0) || K < 1)
        throw DomainError("rate_loss_bound: inputs must be non-negative");
    return std::log2(1.0 + gamma_linear * static_cast<double>(K - 1) * expected_qe);
}

SnrEstimate received_snr_estimate(std::span<const ComplexMatrix> h_eq_samples, double rho)
{
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t K = 0;
    for (const auto& h : h_eq_samples) {
        K = static_cast<std::size_t>(h.cols());
        sum += h.colwise().squaredNorm().sum();
        count += K;
    }
    if (count == 0)
        throw DomainError("received_snr_estimate: no samples");
    SnrEstimate s;
    s.linear = rho / static_cast<double>(K) * (sum / static_cast<double>(count));
    s.db = linear_to_db(s.linear);
    return s;
}

double rho_for_snr(double gamma_db, std::size_t K, double mean_channel_energy)
{
    if (!(mean_channel_energy > 0.0))
        throw NumericalError("selected beams carry no channel energy; SNR cannot be calibrated");
    return db_to_linear(gamma_db) * static_cast<double>(K) / mean_channel_energy;
}

double max_leakage_ratio(const ComplexMatrix& h_eq, const ComplexMatrix& w)
{
    const ComplexMatrix g = h_eq.adjoint() * w;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < g.rows(); ++k) {
        const double nk = h_eq.col(k).norm();
        for (Eigen::Index i = 0; i < g.cols(); ++i)
            if (i != k && nk > 0.0)
                worst = std::max(worst, std::abs(g(k, i)) / nk);
    }
    return worst;
}

} // namespace hbsim
