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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hbsim/numerics.hpp"
#include "hbsim/rng.hpp"

namespace hbsim {

inline constexpr double speed_of_light = 299792458.0;
inline constexpr std::size_t max_paths_per_user = 3;

/// M-element uniform linear array.
struct ArrayGeometry {
    std::size_t M = 256;
    double carrier_hz = 60e9;
    double wavelength_m = speed_of_light / 60e9;
    double spacing_m = speed_of_light / (2.0 * 60e9);

    /// d = λ/2 with λ = c/f_c.
    static ArrayGeometry half_wavelength(std::size_t M, double carrier_hz = 60e9);

    double spacing_ratio() const noexcept { return spacing_m / wavelength_m; }
};

struct PathComponent {
    cd gain;
    double aod_rad = 0.0;
    double spatial_freq = 0.0; // (d/λ) sin(aod)
};

/// K users' spatial channels h_k = Σ_i α_{k,i} a(φ_{k,i}) over one array.
struct ChannelSet {
    ArrayGeometry geometry;
    std::vector<std::vector<PathComponent>> users;
    ComplexMatrix matrix; // M×K, column k is h_k
    std::uint64_t seed = 0;

    std::size_t num_users() const noexcept { return users.size(); }
    std::size_t paths_per_user() const noexcept { return users.empty() ? 0 : users.front().size(); }
};

/// a(φ) = M^{-1/2} [1, e^{-j2πφ}, ..., e^{-j2πφ(M-1)}]^T
ComplexVector steering_vector(double phi, std::size_t M);

/// (d/λ) sin(θ); θ must lie in [-π/2, π/2].
double spatial_frequency(double theta_rad, const ArrayGeometry& geometry);

ComplexVector path_sum(const std::vector<PathComponent>& paths, std::size_t M);

/// Assembles a ChannelSet from explicit per-user paths (1 to 3 paths each).
ChannelSet make_channel_set(const ArrayGeometry& geometry, std::vector<std::vector<PathComponent>> users,
                            std::uint64_t seed = 0);

/// Draws K users with L paths each: AoD uniform on [-π/2, π/2], gains CN(0, 1/L),
/// so E‖h_k‖² = 1. User k draws from streams.stream(Purpose::channel, k).
ChannelSet sample_channel_set(const ArrayGeometry& geometry, std::size_t K, std::size_t L,
                              const Substreams& streams);

// Text exchange format, see README ("Channel ensemble CSV").
void write_channel_csv(const ChannelSet& channels, std::ostream& out);
ChannelSet read_channel_csv(std::istream& in);
void save_channel_csv(const ChannelSet& channels, const std::filesystem::path& path);
ChannelSet load_channel_csv(const std::filesystem::path& path);

} // namespace hbsim
