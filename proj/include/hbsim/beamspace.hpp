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
#include <vector>

#include "hbsim/channel.hpp"
#include "hbsim/numerics.hpp"

namespace hbsim {

/// H_b = F·H together with per-beam, per-user energies |[h_b,k]_m|².
struct BeamspaceChannel {
    ComplexMatrix matrix;
    Eigen::MatrixXd beam_energy;

    std::size_t num_beams() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t num_users() const noexcept { return static_cast<std::size_t>(matrix.cols()); }
};

/// A set of distinct beams, each owned by one user. Beams are stored user by
/// user, in the order each user claimed them.
struct SelectionGroup {
    std::vector<std::size_t> beam_indices;
    std::vector<std::size_t> owner_user;

    std::size_t size() const noexcept { return beam_indices.size(); }
    bool empty() const noexcept { return beam_indices.empty(); }
    std::vector<std::size_t> beams_of(std::size_t user) const;

    /// M×size() selector with a single 1 per column.
    Eigen::MatrixXd matrix(std::size_t M) const;
};

/// S_h = [ξ·S₁  (1−ξ)·S₂]. Plain SBS is a hybrid selector with an empty group 2 and ξ = 1.
struct HybridSelector {
    SelectionGroup group1;
    SelectionGroup group2;
    double xi = 1.0;

    std::size_t width() const noexcept { return group1.size() + group2.size(); }
    /// Block weight of row r of H_eq: ξ for group-1 rows, 1−ξ for group-2 rows.
    double row_scale(std::size_t row) const noexcept { return row < group1.size() ? xi : 1.0 - xi; }
    std::size_t beam_of_row(std::size_t row) const;
    std::size_t owner_of_row(std::size_t row) const;

    Eigen::MatrixXd matrix(std::size_t M) const;

    /// Rows of H_eq carrying a nonzero block weight and owned by `user`.
    std::vector<std::size_t> active_rows_of(std::size_t user) const;
    /// Every row carrying a nonzero block weight.
    std::vector<std::size_t> active_rows() const;

    /// L_h = ξ·L₁ + (1−ξ)·L₂ with L_g = |group g| / K.
    double hybrid_clusters(std::size_t K) const;
};

struct EquivalentChannel {
    ComplexMatrix matrix; // N_RF_g × K
    HybridSelector selector;
};

BeamspaceChannel to_beamspace(const ComplexMatrix& H, const UnitaryDft& F);
BeamspaceChannel to_beamspace(const ChannelSet& channels, const UnitaryDft& F);

/// Greedy magnitude allocation of budget/K beams to every user.
///
/// Repeatedly takes, among users still under their quota, the largest
/// unclaimed beam energy and hands that beam to its user. Equal energies go to
/// the lower beam index, then the lower user index. Indices in `excluded` are
/// never used. A user whose strong beams are all taken still receives its best
/// remaining beams, so every user ends with exactly budget/K beams.
SelectionGroup allocate_beams(const BeamspaceChannel& bs, std::size_t budget,
                              std::span<const std::size_t> excluded = {});

/// Single beam selection baseline: allocate_beams with n_rf, validated.
SelectionGroup select_sbs(const BeamspaceChannel& bs, std::size_t n_rf);

/// SBS wrapped as a selector (group 2 empty, ξ = 1).
HybridSelector sbs_selector(const BeamspaceChannel& bs, std::size_t n_rf);

/// Group 1 gets g1/K beams per user, group 2 gets g2/K beams per user from
/// the beams group 1 left unclaimed.
HybridSelector build_hybrid_selector(const BeamspaceChannel& bs, std::size_t g1, std::size_t g2, double xi);

/// H_eq = S_h^H H_b.
EquivalentChannel equivalent_channel(const BeamspaceChannel& bs, const HybridSelector& sel);

/// Σ_k ‖h_b,k restricted to the group‖² / Σ_k ‖h_b,k‖².
double captured_energy_fraction(const BeamspaceChannel& bs, const SelectionGroup& group);

} // namespace hbsim
