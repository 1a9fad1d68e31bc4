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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hbsim/harness.hpp"

namespace hbsim {

// CSV carries data only (no wall-clock), so identical runs give identical bytes.
// JSON adds a metadata object with notes and timing.

void write_report_csv(const RateReport& report, std::ostream& out);
void write_report_json(const RateReport& report, std::ostream& out);
RateReport read_report_json(std::istream& in);

void write_sweep_csv(const SweepReport& report, std::ostream& out);
void write_sweep_json(const SweepReport& report, std::ostream& out);

void write_qe_csv(const std::vector<QeTableRow>& rows, std::ostream& out);

/// Writes to `path`, or to standard output when path is empty or "-".
/// Throws IoError naming the path on failure.
void emit_report(const RateReport& report, const std::string& path, ReportFormat format);
void emit_report(const SweepReport& report, const std::string& path, ReportFormat format);
void emit_qe_table(const std::vector<QeTableRow>& rows, const std::string& path);

std::string csv_escape(const std::string& field);

} // namespace hbsim
