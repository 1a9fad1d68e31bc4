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
#include <span>

#include "hbsim/numerics.hpp"

namespace hbsim {

/// Column-normalized zero-forcing precoder.
struct Precoder {
    ComplexMatrix matrix;     // W, N_RF_g × K, unit-norm columns
    RealVector normalization; // Λ: column norms of the pseudoinverse before normalization
};

/// ZF on the downlink matrix G = H_eq^H: w_k = G†(:,k) / ‖G†(:,k)‖.
/// Throws SingularityError when H_eq lacks full column rank.
Precoder zf_precoder(const ComplexMatrix& h_eq);

/// Per-user log₂(1 + (ρ/K)|h_k^H w_k|² / (1 + Σ_{i≠k} (ρ/K)|h_k^H w_i|²)), with
/// h_k the columns of `h_eq` and w_i the columns of `w`.
RealVector rates_with_precoder(const ComplexMatrix& h_eq, const ComplexMatrix& w, double rho);

/// Ideal ZF rate: precoder built from the true H_eq; interference is nulled.
RealVector rate_perfect(const ComplexMatrix& h_eq, double rho);

/// Limited-feedback rate: precoder built from Ĥ_eq, evaluated on the true H_eq.
RealVector rate_quantized(const ComplexMatrix& h_eq, const ComplexMatrix& h_eq_hat, double rho);

struct RateLoss {
    RealVector per_user;
    double mean = 0.0;
};

RateLoss rate_loss(const RealVector& perfect, const RealVector& quantized);

/// log₂(1 + γ(K−1)·E[Z_h]) with γ in linear scale.
double rate_loss_bound(double gamma_linear, std::size_t K, double expected_qe);

struct SnrEstimate {
    double linear = 0.0;
    double db = 0.0;
};

/// γ = (ρ/K)·mean‖h_eq,k‖² over all users of all samples.
SnrEstimate received_snr_estimate(std::span<const ComplexMatrix> h_eq_samples, double rho);

/// Transmit power ρ that puts the received SNR at `gamma_db` for the given mean ‖h_eq,k‖².
double rho_for_snr(double gamma_db, std::size_t K, double mean_channel_energy);

/// max over i ≠ k of |h_k^H w_i| / ‖h_k‖.
double max_leakage_ratio(const ComplexMatrix& h_eq, const ComplexMatrix& w);

} // namespace hbsim
