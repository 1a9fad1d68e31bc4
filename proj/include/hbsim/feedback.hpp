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
#include <optional>
#include <vector>

#include "hbsim/beamspace.hpp"
#include "hbsim/numerics.hpp"
#include "hbsim/rng.hpp"

namespace hbsim {

/// Exhaustive search over more than 2^24 codewords per user is refused.
inline constexpr std::size_t max_feedback_bits = 24;
/// Largest bit count accepted by the quadrature oracle.
inline constexpr std::size_t max_oracle_bits = 20;

/// floor[(γ_dB/3)(L−1) + (L−1)·log₂(K−1)], the smallest budget meeting the
/// feedback-bit rule. γ is in dB here. Requires K ≥ 2, L ≥ 1, γ_dB ≥ 0.
std::size_t feedback_bits(double gamma_db, std::size_t K, double clusters);

/// Where RVQ codewords may be nonzero inside the N_RF_g-length equivalent space.
enum class CodebookScope {
    user,  ///< the quantizing user's own beams in the active group(s)
    group, ///< every row with a nonzero block weight
};

const char* to_string(CodebookScope scope);
CodebookScope codebook_scope_from_string(const std::string& s);

/// 2^bits unit-norm codewords of length `dimension`, zero outside `support`.
struct Codebook {
    std::size_t dimension = 0;
    std::vector<std::size_t> support;
    ComplexMatrix entries; // |support| × 2^bits, unit-norm columns
    std::size_t bits = 0;
    std::size_t user = 0;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(entries.cols()); }
    ComplexVector codeword(std::size_t i) const;
};

struct QuantizationResult {
    std::size_t index = 0;
    double qe = 1.0;                  // Z_h = 1 − cos²∠(h, codeword)
    ComplexVector quantized_channel;  // ‖h‖ · codeword
};

/// Draws c ~ CN(0, I_M) per codeword and keeps ξ_{k,i} = S_h^H F c restricted to
/// the scope's support, normalized. Because F is unitary, F·c is itself
/// CN(0, I_M), so the selected beamspace coordinates are drawn directly.
/// User k draws from streams.stream(Purpose::codebook, k).
Codebook generate_codebook(const HybridSelector& sel, const UnitaryDft& F, std::size_t bits, std::size_t user,
                           const Substreams& streams, CodebookScope scope = CodebookScope::user);

/// Exhaustive argmin of Z_h over the codebook; ties go to the lowest index.
QuantizationResult quantize(const ComplexVector& h_eq, const Codebook& cb);

/// Same result as quantize(h_eq, generate_codebook(...)) but never stores the
/// codebook; used for large bit counts in the simulation loop.
QuantizationResult quantize_rvq(const ComplexVector& h_eq, const HybridSelector& sel, std::size_t bits,
                                std::size_t user, const Substreams& streams,
                                CodebookScope scope = CodebookScope::user);

// Closed-form quantization-error theory. `clusters` is L_h ≥ 2.

/// Pr(Z_h ≥ z) = (1 − z^{L−1})^{2^N}
double qe_ccdf(double z, double clusters, std::size_t bits);

/// E[Z_h] = 2^N Γ(2^N) Γ(L/(L−1)) / Γ(2^N + L/(L−1)), in the log domain.
double expected_qe_closed(double clusters, std::size_t bits);

/// ∫₀¹ (1 − z^{L−1})^{2^N} dz by adaptive quadrature (abs tol 1e-12); independent
/// check of expected_qe_closed. Requires bits ≤ max_oracle_bits.
double expected_qe_numeric(double clusters, std::size_t bits);

enum class QeCase { I, II };

/// Case I: 2^{−N}; Case II: 2^{−N/2}.
double qe_case_bound(double clusters, std::size_t bits, QeCase which);

/// Z_h samples for isotropic unit directions in C^L quantized with a fresh
/// codebook of 2^bits isotropic unit vectors per sample. Sample s uses
/// streams.stream(Purpose::validation, s).
std::vector<double> sample_isotropic_qe(std::size_t clusters, std::size_t bits, std::size_t samples,
                                        const Substreams& streams);

} // namespace hbsim
