// Copyright 2026 The amdriver Authors
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

/**
 * @file
 * Command-line front end. Exit codes: 0 success, 1 domain error (one-line
 * diagnostic on the error stream), 2 usage error.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace amdriver::cli {

inline constexpr const char *kToolVersion = "0.1.0";
inline constexpr const char *kOutputEnvVar = "AMDRIVER_OUT";

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

enum class Command { Enumerate, Solve, Sweep, State, Verify, Sample };
enum class OutputFormat { Json, Csv };

struct RunConfig {
    Command command = Command::Solve;
    /// 0 means "infer from the other inputs".
    int intersections = 0;
    std::vector<double> exit_payoffs;
    std::optional<double> motel;
    std::optional<double> payoff_n;
    double n_min = 0.0;
    double n_max = 12.0;
    double step = 0.1;
    std::string vertex;
    std::string named_state;
    std::optional<double> product_p;
    std::vector<double> phases;
    std::string state_file;
    std::int64_t shots = 1000;
    std::optional<std::uint64_t> seed;
    double tolerance = 1e-9;
    OutputFormat format = OutputFormat::Json;
    /// Empty means the output stream passed to run().
    std::string out;
};

/// Either a config or the exit code to return right away (help, usage error).
using ParseResult = std::variant<RunConfig, int>;

ParseResult parse_args(int argc, const char *const *argv, std::ostream &out,
                       std::ostream &err);

/// Validates numeric ranges, then executes. Output goes to `config.out` when
/// set, otherwise to `out`.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

/// parse_args + output-path override from the environment + run.
int main_entry(int argc, const char *const *argv, std::ostream &out,
               std::ostream &err);

} // namespace amdriver::cli
