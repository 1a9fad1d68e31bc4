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


#include "hbsim/channel.hpp"

#include <cmath>
#include <string>

#include "hbsim/error.hpp"

namespace hbsim {

ArrayGeometry ArrayGeometry::half_wavelength(std::size_t M, double carrier_hz)
{
    if (M == 0)
        throw ConfigError("array needs at least one antenna");
    if (!(carrier_hz > 0.0))
        throw ConfigError("carrier frequency must be positive");
    ArrayGeometry g;
    g.M = M;
    g.carrier_hz = carrier_hz;
    g.wavelength_m = speed_of_light / carrier_hz;
    g.spacing_m = speed_of_light / (2.0 * carrier_hz);
    return g;
}

ComplexVector steering_vector(double phi, std::size_t M)
{
    if (M == 0)
        throw DomainError("steering_vector: M must be positive");
    ComplexVector a(static_cast<Eigen::Index>(M));
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (std::size_t m = 0; m < M; ++m) {
        double cycles = phi * static_cast<double>(m);
        cycles -= std::floor(cycles);
        a(static_cast<Eigen::Index>(m)) = std::polar(scale, -2.0 * pi * cycles);
    }
    return a;
}

double spatial_frequency(double theta_rad, const ArrayGeometry& geometry)
{
    if (!(theta_rad >= -pi / 2 && theta_rad <= pi / 2))
        throw DomainError("angle of departure outside [-pi/2, pi/2]: " + std::to_string(theta_rad));
    return geometry.spacing_ratio() * std::sin(theta_rad);
}

ComplexVector path_sum(const std::vector<PathComponent>& paths, std::size_t M)
{
    ComplexVector h = ComplexVector::Zero(static_cast<Eigen::Index>(M));
    for (const auto& p : paths)
        h += p.gain * steering_vector(p.spatial_freq, M);
    return h;
}

ChannelSet make_channel_set(const ArrayGeometry& geometry, std::vector<std::vector<PathComponent>> users,
                            std::uint64_t seed)
{
    if (geometry.M == 0)
        throw ConfigError("array needs at least one antenna");
    if (users.empty())
        throw ConfigError("channel set needs at least one user");
    ChannelSet set;
    set.geometry = geometry;
    set.seed = seed;
    set.matrix.resize(static_cast<Eigen::Index>(geometry.M), static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k) {
        const auto L = users[k].size();
        if (L < 1 || L > max_paths_per_user)
            throw ConfigError("user " + std::to_string(k) + " has " + std::to_string(L) +
                              " paths; 1 to 3 are supported");
        set.matrix.col(static_cast<Eigen::Index>(k)) = path_sum(users[k], geometry.M);
    }
    require_finite(set.matrix, "channel matrix");
    set.users = std::move(users);
    return set;
}

ChannelSet sample_channel_set(const ArrayGeometry& geometry, std::size_t K, std::size_t L,
                              const Substreams& streams)
{
    if (K == 0)
        throw ConfigError("need at least one user");
    if (L < 1 || L > max_paths_per_user)
        throw ConfigError("paths per user must be in [1, 3], got " + std::to_string(L));

    const double variance = 1.0 / static_cast<double>(L);
    std::vector<std::vector<PathComponent>> users(K);
    for (std::size_t k = 0; k < K; ++k) {
        auto rng = streams.stream(Purpose::channel, k);
        users[k].reserve(L);
        for (std::size_t i = 0; i < L; ++i) {
            PathComponent p;
            p.aod_rad = -pi / 2 + pi * rng.uniform();
            p.gain = rng.complex_normal(variance);
            p.spatial_freq = spatial_frequency(p.aod_rad, geometry);
            users[k].push_back(p);
        }
    }
    return make_channel_set(geometry, std::move(users), streams.seed());
}

} // namespace hbsim
