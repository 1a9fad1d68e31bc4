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


#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hbsim/error.hpp"
#include "hbsim/report.hpp"

using namespace hbsim;

namespace {

std::size_t count_lines(const std::string& s)
{
    std::size_t n = 0;
    for (char c : s)
        n += c == '\n';
    return n;
}

RateReport sample_report()
{
    RunConfig c;
    c.M = 64;
    c.K = 4;
    c.L = 2;
    c.n_rf = 8;
    c.trials = 3;
    c.snr_db = {3.0, 9.0};
    auto r = run(c, "label, with \"quotes\"");
    r.rows[1].reference = 0.125;
    return r;
}

} // namespace

TEST_CASE("CSV escaping")
{
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("rate report CSV has a header and one line per row")
{
    const auto report = sample_report();
    std::ostringstream out;
    write_report_csv(report, out);
    const std::string text = out.str();
    CHECK(text.rfind("label,scheme,M,K,L,", 0) == 0);
    CHECK(count_lines(text) == 3);
    CHECK(text.find("\"label, with \"\"quotes\"\"\"") != std::string::npos);
    CHECK(text.find("wall") == std::string::npos);
    // Seventeen significant digits for reals.
    CHECK(text.find(",1.9952623149688795,") != std::string::npos); // γ at 3 dB
    std::ostringstream again;
    write_report_csv(sample_report(), again);
    CHECK(again.str() == text);
}

TEST_CASE("table-sized reports have five data rows")
{
    RateReport r;
    r.rows.resize(5);
    std::ostringstream out;
    write_report_csv(r, out);
    CHECK(count_lines(out.str()) == 6);
}

TEST_CASE("JSON round trip preserves every field")
{
    const auto report = sample_report();
    std::stringstream buf;
    write_report_json(report, buf);
    const auto back = read_report_json(buf);
    CHECK(back.rows == report.rows);
    CHECK(back.notes == report.notes);
    CHECK(back.wall_clock_s == report.wall_clock_s);
    CHECK(back == report);
}

TEST_CASE("JSON keeps a stable key order")
{
    std::stringstream buf;
    write_report_json(sample_report(), buf);
    const std::string text = buf.str();
    const auto schema = text.find("\"schema\"");
    const auto metadata = text.find("\"metadata\"");
    const auto rows = text.find("\"rows\"");
    CHECK(schema < metadata);
    CHECK(metadata < rows);
    CHECK(text.find("\"label\"") < text.find("\"scheme\"", rows));
    CHECK(text.find("\"expected_qe\"") < text.find("\"bound\""));
}

TEST_CASE("malformed JSON is an I/O error")
{
    std::stringstream junk("{\"schema\": \"something else\"}");
    CHECK_THROWS_AS(read_report_json(junk), IoError);
    std::stringstream broken("{ not json");
    CHECK_THROWS_AS(read_report_json(broken), IoError);
}

TEST_CASE("empty sweep gives a header-only CSV")
{
    std::ostringstream out;
    write_sweep_csv(SweepReport{}, out);
    CHECK(out.str() == "snr_db,scheme,rate,rate_std\n");
}

TEST_CASE("sweep CSV and JSON")
{
    SweepReport s;
    s.points.push_back({0.0, "sbs", 1.25, 0.5});
    s.points.push_back({2.0, "ideal", 0.1, 0.0});
    std::ostringstream csv;
    write_sweep_csv(s, csv);
    CHECK(csv.str() == "snr_db,scheme,rate,rate_std\n0,sbs,1.25,0.5\n2,ideal,0.10000000000000001,0\n");
    std::ostringstream json;
    write_sweep_json(s, json);
    CHECK(json.str().find("\"points\"") != std::string::npos);
}

TEST_CASE("quantization error table CSV")
{
    std::ostringstream out;
    write_qe_csv(qe_table({2.0}, {7}), out);
    CHECK(out.str().rfind("L,N,E_closed,E_numeric,bound_caseI,bound_caseII\n2,7,", 0) == 0);
}

TEST_CASE("emitting to files")
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = (dir / "hbsim_emit_test.json").string();
    const auto report = sample_report();
    emit_report(report, path, ReportFormat::json);
    std::ifstream in(path);
    CHECK(read_report_json(in) == report);
    std::filesystem::remove(path);
    try {
        emit_report(report, "/nonexistent/dir/out.csv", ReportFormat::csv);
        FAIL("expected an I/O error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(emit_report(SweepReport{}, "/nonexistent/x.csv", ReportFormat::csv), IoError);
    CHECK_THROWS_AS(emit_qe_table({}, "/nonexistent/x.csv"), IoError);
}
