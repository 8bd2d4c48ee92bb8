// Copyright 2026 The bornlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bornlab/errors.hpp"
#include "bornlab/tolerances.hpp"

namespace bornlab::cli {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Bad flags or arguments; maps to exit code 2.
class UsageError : public Error {
   public:
    using Error::Error;
};

struct RunConfig {
    std::string command;
    std::vector<std::size_t> dims;
    std::size_t trials = 0;
    std::size_t shots = 100000;
    std::size_t draws = 100;
    std::string rule = "born";
    std::uint64_t seed = 0;
    double tol_defect = tol::kDefect;
    double tol_spread = tol::kSpread;
    std::string format = "json";
    std::optional<std::string> out;
    unsigned threads = 1;
    /// Real amplitudes for `sample`; normalized before use.
    std::optional<std::vector<double>> state;

    json to_json() const;
};

/// Command-specific defaults (dims, trials) for `command`. Throws UsageError
/// for unknown commands.
RunConfig default_config(std::string_view command);

/// Throws UsageError describing the first invalid field.
void validate(const RunConfig& config);

struct CsvRow {
    std::size_t index = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    double value = 0.0;
};

struct Report {
    std::string command;
    json config;
    json results;
    bool pass = false;
    double runtime_ms = 0.0;
    std::vector<CsvRow> series;

    json to_json() const;
    /// "index,d,k,value" header plus one row per series entry, 17 significant digits.
    std::string to_csv() const;
    int exit_code() const { return pass ? 0 : 1; }
};

Report cmd_verify_born(const RunConfig& config);
Report cmd_falsify(const RunConfig& config);
Report cmd_independence(const RunConfig& config);
Report cmd_recover(const RunConfig& config);
Report cmd_stationarity(const RunConfig& config);
Report cmd_spin1(const RunConfig& config);
Report cmd_sample(const RunConfig& config);

/// Validates and dispatches on config.command.
Report run_command(const RunConfig& config);

const std::vector<std::string>& command_names();

/// Throws std::runtime_error unless the report has exactly the documented
/// top-level keys and the documented results keys for its command.
void validate_report_schema(const json& report);

/// Recomputes the pass flag from the serialized results and thresholds.
bool recheck_pass(const json& report);

/// Parses "2,3,5" or "2..8" (or a mix: "2,4..6").
std::vector<std::size_t> parse_dims(std::string_view text);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bornlab::cli
