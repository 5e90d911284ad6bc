// Copyright 2026 The stcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Invariant suites behind `stcorr verify`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stcorr {

enum class VerifySuite { Exact, Spectral, Oracle, MonteCarlo, All };

std::optional<VerifySuite> parse_suite(std::string_view name);
std::string_view to_string(VerifySuite suite);

enum class CheckStatus {
    Pass,
    Fail,
    // A literal statement known to be false; reported with its measured
    // value, never counted as a pass or a failure.
    KnownDeviation,
};

struct CheckResult {
    std::string suite;
    std::string name;
    double measured = 0.0;
    std::string relation;  // "<=", "<", "==", ...
    double tolerance = 0.0;
    CheckStatus status = CheckStatus::Fail;
    std::string anchor;    // what the check is measured against
    std::string note;
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] int failures() const;
};

struct VerifyOptions {
    std::uint64_t seed = 20240607;
    int workers = 1;
};

VerifyReport run_verify(VerifySuite suite, const VerifyOptions& options = {});

/// One line per check plus a summary line.
void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace stcorr
