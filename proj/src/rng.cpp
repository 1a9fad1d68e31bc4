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


#include "hbsim/rng.hpp"

#include <cmath>

#include "hbsim/numerics.hpp"

namespace hbsim {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double RandomStream::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

std::complex<double> RandomStream::complex_normal(double variance)
{
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

Substreams::Substreams(std::uint64_t seed) : seed_(seed), key_(splitmix64(seed)) {}

Substreams Substreams::child(std::uint64_t index) const
{
    return Substreams(seed_, splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

RandomStream Substreams::stream(Purpose purpose, std::uint64_t index) const
{
    const std::uint64_t tagged = splitmix64(static_cast<std::uint64_t>(purpose) * 0x2545f4914f6cdd1dULL);
    return RandomStream(splitmix64(key_ ^ tagged ^ splitmix64(index)));
}

} // namespace hbsim
