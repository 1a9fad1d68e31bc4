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

#include <complex>
#include <cstdint>
#include <random>

namespace hbsim {

/// What a random stream is used for; part of the substream key.
enum class Purpose : std::uint64_t { channel = 1, codebook = 2, validation = 3, baseline = 4 };

/// Seeded stream of uniforms and Gaussians.
///
/// Gaussians come from Box-Muller over 53-bit uniforms taken directly from
/// mt19937_64, so a given seed yields the same doubles with any standard library.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal();

    /// Circularly-symmetric complex Gaussian with E|z|² = variance.
    std::complex<double> complex_normal(double variance = 1.0);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Counter-based derivation of independent streams.
///
/// A stream is addressed by a path of indices (e.g. trial, then user) and a
/// purpose, never by draw order, so concurrent work units get the same
/// numbers regardless of scheduling.
class Substreams {
public:
    explicit Substreams(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    Substreams child(std::uint64_t index) const;
    RandomStream stream(Purpose purpose, std::uint64_t index) const;

private:
    Substreams(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

    std::uint64_t seed_;
    std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace hbsim
