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

#include <stdexcept>
#include <string>

namespace hbsim {

/// Failure categories. Each maps to one process exit code of the CLI.
enum class ErrorKind { config, domain, numerical, io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// 2 for configuration and domain errors, 3 for numerical failures, 4 for I/O.
    int exit_code() const noexcept
    {
        switch (kind_) {
        case ErrorKind::numerical: return 3;
        case ErrorKind::io: return 4;
        default: return 2;
        }
    }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

// Raised when a matrix that must be inverted is rank deficient or too badly conditioned.
struct SingularityError : NumericalError {
    explicit SingularityError(const std::string& what) : NumericalError(what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

} // namespace hbsim
