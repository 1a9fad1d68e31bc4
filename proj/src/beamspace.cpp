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


#include "hbsim/beamspace.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hbsim/error.hpp"

namespace hbsim {

std::vector<std::size_t> SelectionGroup::beams_of(std::size_t user) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < beam_indices.size(); ++i)
        if (owner_user[i] == user)
            out.push_back(beam_indices[i]);
    return out;
}

Eigen::MatrixXd SelectionGroup::matrix(std::size_t M) const
{
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(size()));
    for (std::size_t c = 0; c < size(); ++c)
        s(static_cast<Eigen::Index>(beam_indices[c]), static_cast<Eigen::Index>(c)) = 1.0;
    return s;
}

std::size_t HybridSelector::beam_of_row(std::size_t row) const
{
    return row < group1.size() ? group1.beam_indices[row] : group2.beam_indices.at(row - group1.size());
}

std::size_t HybridSelector::owner_of_row(std::size_t row) const
{
    return row < group1.size() ? group1.owner_user[row] : group2.owner_user.at(row - group1.size());
}

Eigen::MatrixXd HybridSelector::matrix(std::size_t M) const
{
    Eigen::MatrixXd s(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(width()));
    s << xi * group1.matrix(M), (1.0 - xi) * group2.matrix(M);
    return s;
}

std::vector<std::size_t> HybridSelector::active_rows_of(std::size_t user) const
{
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < width(); ++r)
        if (row_scale(r) != 0.0 && owner_of_row(r) == user)
            rows.push_back(r);
    return rows;
}

std::vector<std::size_t> HybridSelector::active_rows() const
{
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < width(); ++r)
        if (row_scale(r) != 0.0)
            rows.push_back(r);
    return rows;
}

double HybridSelector::hybrid_clusters(std::size_t K) const
{
    const double k = static_cast<double>(K);
    return xi * static_cast<double>(group1.size()) / k + (1.0 - xi) * static_cast<double>(group2.size()) / k;
}

BeamspaceChannel to_beamspace(const ComplexMatrix& H, const UnitaryDft& F)
{
    if (static_cast<std::size_t>(H.rows()) != F.size())
        throw ConfigError("beamspace transform: channel has " + std::to_string(H.rows()) +
                          " antennas but the lens has " + std::to_string(F.size()));
    BeamspaceChannel bs;
    bs.matrix = F.apply(H);
    bs.beam_energy = bs.matrix.cwiseAbs2();
    return bs;
}

BeamspaceChannel to_beamspace(const ChannelSet& channels, const UnitaryDft& F)
{
    return to_beamspace(channels.matrix, F);
}

SelectionGroup allocate_beams(const BeamspaceChannel& bs, std::size_t budget, std::span<const std::size_t> excluded)
{
    const std::size_t M = bs.num_beams();
    const std::size_t K = bs.num_users();
    if (K == 0 || budget % K != 0)
        throw ConfigError("beam budget " + std::to_string(budget) + " is not divisible by K = " + std::to_string(K));
    std::vector<bool> claimed(M, false);
    for (auto m : excluded) {
        if (m >= M)
            throw ConfigError("excluded beam index out of range");
        claimed[m] = true;
    }
    const auto free_beams = static_cast<std::size_t>(std::count(claimed.begin(), claimed.end(), false));
    if (budget > free_beams)
        throw ConfigError("beam budget " + std::to_string(budget) + " exceeds the " + std::to_string(free_beams) +
                          " available beams");

    const std::size_t quota = budget / K;
    // Per-user beam order: energy descending, then index ascending.
    std::vector<std::vector<std::size_t>> order(K);
    for (std::size_t k = 0; k < K; ++k) {
        auto& o = order[k];
        o.resize(M);
        std::iota(o.begin(), o.end(), std::size_t{0});
        const auto col = static_cast<Eigen::Index>(k);
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) {
            return bs.beam_energy(static_cast<Eigen::Index>(a), col) > bs.beam_energy(static_cast<Eigen::Index>(b), col);
        });
    }
    std::vector<std::size_t> cursor(K, 0);
    std::vector<std::vector<std::size_t>> owned(K);

    for (std::size_t step = 0; step < budget; ++step) {
        std::size_t best_user = K;
        std::size_t best_beam = M;
        double best_energy = -1.0;
        for (std::size_t k = 0; k < K; ++k) {
            if (owned[k].size() >= quota)
                continue;
            while (claimed[order[k][cursor[k]]])
                ++cursor[k];
            const std::size_t m = order[k][cursor[k]];
            const double e = bs.beam_energy(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
            if (e > best_energy || (e == best_energy && m < best_beam)) {
                best_energy = e;
                best_user = k;
                best_beam = m;
            }
        }
        claimed[best_beam] = true;
        owned[best_user].push_back(best_beam);
    }

    SelectionGroup group;
    group.beam_indices.reserve(budget);
    group.owner_user.reserve(budget);
    for (std::size_t k = 0; k < K; ++k)
        for (auto m : owned[k]) {
            group.beam_indices.push_back(m);
            group.owner_user.push_back(k);
        }
    return group;
}

SelectionGroup select_sbs(const BeamspaceChannel& bs, std::size_t n_rf)
{
    const std::size_t K = bs.num_users();
    if (n_rf < K)
        throw ConfigError("n_rf = " + std::to_string(n_rf) + " is smaller than K = " + std::to_string(K));
    if (n_rf > bs.num_beams())
        throw ConfigError("n_rf = " + std::to_string(n_rf) + " exceeds M = " + std::to_string(bs.num_beams()));
    return allocate_beams(bs, n_rf);
}

HybridSelector sbs_selector(const BeamspaceChannel& bs, std::size_t n_rf)
{
    HybridSelector sel;
    sel.group1 = select_sbs(bs, n_rf);
    sel.xi = 1.0;
    return sel;
}

HybridSelector build_hybrid_selector(const BeamspaceChannel& bs, std::size_t g1, std::size_t g2, double xi)
{
    const std::size_t K = bs.num_users();
    if (!(xi >= 0.0 && xi <= 1.0))
        throw ConfigError("xi must lie in [0, 1], got " + std::to_string(xi));
    for (auto g : {g1, g2})
        if (g < K || g % K != 0)
            throw ConfigError("group size " + std::to_string(g) + " must be a positive multiple of K = " +
                              std::to_string(K));
    if (g1 + g2 > bs.num_beams())
        throw ConfigError("g1 + g2 = " + std::to_string(g1 + g2) + " exceeds M = " + std::to_string(bs.num_beams()));

    HybridSelector sel;
    sel.xi = xi;
    sel.group1 = allocate_beams(bs, g1);
    sel.group2 = allocate_beams(bs, g2, sel.group1.beam_indices);
    return sel;
}

EquivalentChannel equivalent_channel(const BeamspaceChannel& bs, const HybridSelector& sel)
{
    const auto rows = sel.width();
    EquivalentChannel eq;
    eq.selector = sel;
    eq.matrix.resize(static_cast<Eigen::Index>(rows), bs.matrix.cols());
    for (std::size_t r = 0; r < rows; ++r) {
        const auto m = sel.beam_of_row(r);
        if (m >= bs.num_beams())
            throw ConfigError("selector beam index " + std::to_string(m) + " out of range");
        eq.matrix.row(static_cast<Eigen::Index>(r)) = sel.row_scale(r) * bs.matrix.row(static_cast<Eigen::Index>(m));
    }
    return eq;
}

double captured_energy_fraction(const BeamspaceChannel& bs, const SelectionGroup& group)
{
    const double total = bs.beam_energy.sum();
    if (!(total > 0.0))
        return 0.0;
    double picked = 0.0;
    for (auto m : group.beam_indices)
        picked += bs.beam_energy.row(static_cast<Eigen::Index>(m)).sum();
    return picked / total;
}

} // namespace hbsim
