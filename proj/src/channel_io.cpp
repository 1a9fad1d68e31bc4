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


#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "hbsim/channel.hpp"
#include "hbsim/error.hpp"
#include "text_util.hpp"

namespace hbsim {

using detail::format_double;
using detail::parse_double;
using detail::parse_uint;
using detail::split;

namespace {

constexpr const char* header_dims = "M,K,L,seed";
constexpr const char* header_entries = "user,antenna,re,im";
constexpr const char* header_paths = "user,path,gain_re,gain_im,aod_rad,spatial_freq";

std::vector<std::string> next_row(std::istream& in, std::size_t fields, const char* section)
{
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError(std::string("channel CSV truncated in ") + section);
    auto row = split(line, ',');
    if (row.size() != fields)
        throw ConfigError(std::string("channel CSV: expected ") + std::to_string(fields) + " fields in " + section +
                          ", got '" + line + "'");
    return row;
}

void expect_header(std::istream& in, const char* header)
{
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != header)
        throw ConfigError(std::string("channel CSV: expected header '") + header + "'");
}

} // namespace

void write_channel_csv(const ChannelSet& channels, std::ostream& out)
{
    const auto M = channels.geometry.M;
    const auto K = channels.num_users();
    out << header_dims << '\n'
        << M << ',' << K << ',' << channels.paths_per_user() << ',' << channels.seed << '\n';
    out << header_entries << '\n';
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t m = 0; m < M; ++m) {
            const cd v = channels.matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
            out << k << ',' << m << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
    out << header_paths << '\n';
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t i = 0; i < channels.users[k].size(); ++i) {
            const auto& p = channels.users[k][i];
            out << k << ',' << i << ',' << format_double(p.gain.real()) << ',' << format_double(p.gain.imag())
                << ',' << format_double(p.aod_rad) << ',' << format_double(p.spatial_freq) << '\n';
        }
}

ChannelSet read_channel_csv(std::istream& in)
{
    expect_header(in, header_dims);
    const auto dims = next_row(in, 4, "dimensions");
    const auto M = parse_uint(dims[0], "M");
    const auto K = parse_uint(dims[1], "K");
    const auto L = parse_uint(dims[2], "L");
    const auto seed = parse_uint(dims[3], "seed");
    if (M == 0 || K == 0 || L < 1 || L > max_paths_per_user)
        throw ConfigError("channel CSV: invalid dimensions");

    ComplexMatrix stored(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(K));
    expect_header(in, header_entries);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t m = 0; m < M; ++m) {
            const auto row = next_row(in, 4, "entries");
            if (parse_uint(row[0], "user") != k || parse_uint(row[1], "antenna") != m)
                throw ConfigError("channel CSV: entries out of order at user " + std::to_string(k));
            stored(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
                cd(parse_double(row[2], "re"), parse_double(row[3], "im"));
        }

    std::vector<std::vector<PathComponent>> users(K);
    expect_header(in, header_paths);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t i = 0; i < L; ++i) {
            const auto row = next_row(in, 6, "paths");
            if (parse_uint(row[0], "user") != k || parse_uint(row[1], "path") != i)
                throw ConfigError("channel CSV: paths out of order at user " + std::to_string(k));
            PathComponent p;
            p.gain = cd(parse_double(row[2], "gain_re"), parse_double(row[3], "gain_im"));
            p.aod_rad = parse_double(row[4], "aod_rad");
            p.spatial_freq = parse_double(row[5], "spatial_freq");
            users[k].push_back(p);
        }

    auto set = make_channel_set(ArrayGeometry::half_wavelength(M), std::move(users), seed);
    // Stored entries must agree with their own path decomposition.
    for (Eigen::Index k = 0; k < set.matrix.cols(); ++k) {
        const double scale = std::max(1.0, set.matrix.col(k).norm());
        if ((set.matrix.col(k) - stored.col(k)).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ConfigError("channel CSV: entries of user " + std::to_string(k) +
                              " disagree with their path decomposition");
    }
    set.matrix = stored;
    return set;
}

void save_channel_csv(const ChannelSet& channels, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_channel_csv(channels, out);
    if (!out)
        throw IoError("write failed: " + path.string());
}

ChannelSet load_channel_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    return read_channel_csv(in);
}

} // namespace hbsim
