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


#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "hbsim/channel.hpp"
#include "hbsim/error.hpp"
#include "hbsim/harness.hpp"
#include "text_util.hpp"

namespace hbsim {

using detail::parse_double;
using detail::parse_uint;

const char* to_string(Scheme s) { return s == Scheme::sbs ? "SBS" : "HBS"; }
const char* to_string(ReportFormat f) { return f == ReportFormat::csv ? "csv" : "json"; }

Scheme scheme_from_string(const std::string& s)
{
    if (s == "SBS" || s == "sbs")
        return Scheme::sbs;
    if (s == "HBS" || s == "hbs")
        return Scheme::hbs;
    throw ConfigError("unknown scheme '" + s + "' (expected SBS or HBS)");
}

ReportFormat format_from_string(const std::string& s)
{
    if (s == "csv")
        return ReportFormat::csv;
    if (s == "json")
        return ReportFormat::json;
    throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

const char* to_string(SingularPolicy p) { return p == SingularPolicy::skip ? "skip" : "error"; }

SingularPolicy singular_policy_from_string(const std::string& s)
{
    if (s == "skip")
        return SingularPolicy::skip;
    if (s == "error")
        return SingularPolicy::error;
    throw ConfigError("unknown on_singular policy '" + s + "' (expected skip or error)");
}

double active_clusters(const RunConfig& c)
{
    const double k = static_cast<double>(c.K);
    if (c.scheme == Scheme::sbs)
        return static_cast<double>(c.n_rf) / k;
    return c.xi * static_cast<double>(c.g1) / k + (1.0 - c.xi) * static_cast<double>(c.g2) / k;
}

std::size_t bits_for(const RunConfig& c, double snr_db)
{
    if (c.feedback_bits)
        return *c.feedback_bits;
    return feedback_bits(snr_db, c.K, active_clusters(c));
}

namespace {

void require(bool ok, const std::string& message)
{
    if (!ok)
        throw ConfigError(message);
}

std::string n(std::size_t v) { return std::to_string(v); }

} // namespace

void validate(const RunConfig& c)
{
    require(c.M >= 1, "M must be at least 1");
    require(c.K >= 1, "K must be at least 1");
    require(c.L >= 1 && c.L <= max_paths_per_user, "L must be in [1, 3], got " + n(c.L));
    require(c.trials >= 1, "trials must be at least 1");
    require(c.threads >= 1, "threads must be at least 1");
    require(!c.snr_db.empty(), "snr_db needs at least one value");
    require(c.carrier_hz > 0.0, "carrier_hz must be positive");
    if (c.scheme == Scheme::sbs) {
        require(c.n_rf >= c.K, "n_rf = " + n(c.n_rf) + " is smaller than K = " + n(c.K));
        require(c.n_rf % c.K == 0, "n_rf = " + n(c.n_rf) + " is not divisible by K = " + n(c.K));
        require(c.n_rf <= c.M, "n_rf = " + n(c.n_rf) + " exceeds M = " + n(c.M));
    } else {
        require(c.xi >= 0.0 && c.xi <= 1.0, "xi must lie in [0, 1]");
        for (auto g : {c.g1, c.g2}) {
            require(g >= c.K, "group size " + n(g) + " is smaller than K = " + n(c.K));
            require(g % c.K == 0, "group size " + n(g) + " is not divisible by K = " + n(c.K));
        }
        require(c.g1 + c.g2 <= c.M, "g1 + g2 = " + n(c.g1 + c.g2) + " exceeds M = " + n(c.M));
    }
    for (double snr : c.snr_db) {
        require(std::isfinite(snr), "snr_db values must be finite");
        std::size_t bits = 0;
        if (c.feedback_bits) {
            bits = *c.feedback_bits;
        } else {
            require(c.K >= 2, "the feedback-bit rule needs K >= 2; set feedback_bits explicitly");
            require(snr >= 0.0, "the feedback-bit rule needs snr_db >= 0; set feedback_bits explicitly");
            bits = feedback_bits(snr, c.K, active_clusters(c));
        }
        require(bits <= max_feedback_bits, "feedback budget of " + n(bits) + " bits at " + std::to_string(snr) +
                                               " dB exceeds the supported " + n(max_feedback_bits));
    }
}

namespace {

std::vector<double> parse_snr_list(const std::string& value)
{
    std::vector<double> out;
    if (value.find(':') != std::string::npos) {
        const auto parts = detail::split(value, ':');
        require(parts.size() == 3, "snr range must be start:stop:step");
        const double start = parse_double(parts[0], "snr start");
        const double stop = parse_double(parts[1], "snr stop");
        const double step = parse_double(parts[2], "snr step");
        require(step > 0.0 && stop >= start, "snr range must have step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(start + step * static_cast<double>(i));
        return out;
    }
    for (const auto& item : detail::split(value, ','))
        out.push_back(parse_double(item, "snr_db"));
    return out;
}

} // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value)
{
    if (key == "M")
        c.M = parse_uint(value, "M");
    else if (key == "K")
        c.K = parse_uint(value, "K");
    else if (key == "L")
        c.L = parse_uint(value, "L");
    else if (key == "scheme")
        c.scheme = scheme_from_string(value);
    else if (key == "n_rf")
        c.n_rf = parse_uint(value, "n_rf");
    else if (key == "g1")
        c.g1 = parse_uint(value, "g1");
    else if (key == "g2")
        c.g2 = parse_uint(value, "g2");
    else if (key == "xi")
        c.xi = parse_double(value, "xi");
    else if (key == "snr_db")
        c.snr_db = parse_snr_list(value);
    else if (key == "trials")
        c.trials = parse_uint(value, "trials");
    else if (key == "seed")
        c.seed = parse_uint(value, "seed");
    else if (key == "feedback_bits")
        c.feedback_bits = parse_uint(value, "feedback_bits");
    else if (key == "output")
        c.output = value;
    else if (key == "format")
        c.format = format_from_string(value);
    else if (key == "codebook_scope")
        c.codebook_scope = codebook_scope_from_string(value);
    else if (key == "threads")
        c.threads = parse_uint(value, "threads");
    else if (key == "carrier_hz")
        c.carrier_hz = parse_double(value, "carrier_hz");
    else if (key == "channels")
        c.channels_file = value;
    else if (key == "on_singular")
        c.on_singular = singular_policy_from_string(value);
    else
        throw ConfigError("unknown configuration key '" + key + "'");
}

RunConfig parse_config(std::string_view text)
{
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto body = detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + n(line_no) + ": expected key = value");
        const std::string key(detail::trim(body.substr(0, eq)));
        const std::string value(detail::trim(body.substr(eq + 1)));
        try {
            set_config_value(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + n(line_no) + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace hbsim
