// Copyright 2026 The qweaver Authors
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

#ifndef QWEAVER_HARNESS_HPP
#define QWEAVER_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qweaver/error_detection.hpp"

namespace qweaver {

inline constexpr const char *kVersion = "0.1.0";

/// Bad or contradictory run settings. The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class Check { stabilizers, fidelity, detection };

const char *to_string(Check c);
Check parse_check(const std::string &name);

struct RunConfig {
    GraphSpec graph;
    /// Where the graph came from: "template" or a file path.
    std::string graph_source = "template";
    QubusModel mode = QubusModel::ideal;
    double alpha = 500.0;
    double theta = 0.01;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    /// "WALK:STEP" or "last".
    std::optional<std::string> fault;
    std::vector<Check> checks{Check::stabilizers, Check::fidelity};
    bool single_photon_inputs = false;

    /// Throws ConfigError for infeasible combinations.
    void validate() const;
};

nlohmann::json config_to_json(const RunConfig &config);
/// Fields missing from `j` keep their values from `base`. The "graph" key
/// takes an inline graph object or a file path.
RunConfig config_from_json(const nlohmann::json &j, RunConfig base = {});

struct CheckResult {
    std::string name;
    bool passed = false;
    nlohmann::json details;
};

struct RunReport {
    std::string version = kVersion;
    nlohmann::json config;
    nlohmann::json schedule;
    std::vector<CheckResult> checks;
    nlohmann::json timings_ms = nlohmann::json::object();
    bool passed = false;
};

nlohmann::json report_to_json(const RunReport &report, bool include_timings = true);
RunReport report_from_json(const nlohmann::json &j);

/// compile, execute, check. Deterministic in (config, seed) apart from the
/// timings.
RunReport run(const RunConfig &config);

}  // namespace qweaver

#endif
