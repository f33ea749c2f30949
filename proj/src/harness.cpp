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

#include "qweaver/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace qweaver {

namespace {

constexpr double kStateTolerance = 1e-9;
constexpr double kAnalyticTolerance = 1e-10;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool has_check(const RunConfig &c, Check check) {
    return std::find(c.checks.begin(), c.checks.end(), check) != c.checks.end();
}

std::optional<FaultSpec> resolve_fault(const RunConfig &config, const OperationSchedule &staging) {
    if (!config.fault) {
        return std::nullopt;
    }
    if (*config.fault == "last") {
        return last_step_fault(staging);
    }
    return parse_fault(*config.fault);
}

template <typename T>
T get_or(const nlohmann::json &j, const char *key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config key \"") + key + "\": " + e.what());
    }
}

nlohmann::json walk_log_json(const WalkLog &log) {
    nlohmann::json j{{"photons", log.photons},
                     {"disposition", to_string(log.disposition)},
                     {"photon_numbers", log.photon_numbers},
                     {"feed_forward_flips", log.feed_forward_flips},
                     {"corrected_photons", log.corrected_photons},
                     {"max_herald_infidelity", log.max_herald_infidelity}};
    if (log.detection) {
        j["detection"] = to_string(*log.detection);
    }
    return j;
}

CheckResult stabilizer_check(const PhotonicState &state, const GraphSpec &spec) {
    std::vector<double> k = stabilizer_expectations(state, spec);
    double lowest = k.empty() ? 1.0 : *std::min_element(k.begin(), k.end());
    CheckResult r{"stabilizers", lowest >= 1.0 - kStateTolerance, {}};
    r.details = {{"expectations", k}, {"min", lowest}, {"tolerance", kStateTolerance}};
    return r;
}

CheckResult fidelity_check(const ExecutionResult &exec, const GraphSpec &spec) {
    LocalFrame frame = find_local_frame(exec.state, graph_state_oracle(spec), kStateTolerance);
    CheckResult r{"fidelity", frame.fidelity_after >= 1.0 - kStateTolerance, {}};
    std::vector<std::string> ops;
    for (LocalClifford op : frame.ops) {
        ops.emplace_back(to_string(op));
    }
    nlohmann::json walks = nlohmann::json::array();
    for (const WalkLog &log : exec.walks) {
        walks.push_back(walk_log_json(log));
    }
    r.details = {{"fidelity_before", frame.fidelity_before},
                 {"fidelity", frame.fidelity_after},
                 {"local_corrections", ops},
                 {"exhaustive_search", frame.exhaustive},
                 {"correction_log", walks},
                 {"tolerance", kStateTolerance}};
    return r;
}

CheckResult detection_check(const RunConfig &config, const CpParams &params) {
    OperationSchedule staging = grid_two_pass_staging(config.graph.rows, config.graph.cols);
    std::optional<FaultSpec> fault = resolve_fault(config, staging);
    MonteCarloResult mc = monte_carlo_detection(staging, params, fault, config.trials, config.seed);

    double expected = fault ? 0.5 : 0.0;
    bool analytic_ok = std::abs(mc.analytic_p - expected) <= kAnalyticTolerance;
    double sigma = std::sqrt(mc.analytic_p * (1.0 - mc.analytic_p) / static_cast<double>(mc.trials));
    bool sampled_ok = std::abs(mc.flag_rate - mc.analytic_p) <= 4.0 * sigma;

    CheckResult r{"detection", analytic_ok && sampled_ok, {}};
    r.details = {{"analytic_p", mc.analytic_p},
                 {"expected_p", expected},
                 {"flag_rate", mc.flag_rate},
                 {"flags", mc.flags},
                 {"ci95", mc.ci95},
                 {"trials", mc.trials},
                 {"seed", config.seed},
                 {"fault", fault ? nlohmann::json(to_string(*fault)) : nlohmann::json(nullptr)},
                 {"grid", {{"rows", config.graph.rows}, {"cols", config.graph.cols}}},
                 {"staging", schedule_to_json(staging)}};

    if (!fault) {
        // The surviving state after a coincidence must be the intact graph state.
        RunRng rng = RunRng(config.seed).split(0x636f6d70);
        TwoPassResult walked = two_pass_walk(staging, params, std::nullopt, rng);
        auto [outcome, survived] = compare_ancillas(walked, rng);
        double f = fidelity(survived, two_pass_oracle(staging));
        r.details["surviving_fidelity"] = f;
        r.passed = r.passed && outcome.coincidence && f >= 1.0 - kStateTolerance;
    }
    return r;
}

}  // namespace

const char *to_string(Check c) {
    switch (c) {
        case Check::stabilizers:
            return "stabilizers";
        case Check::fidelity:
            return "fidelity";
        case Check::detection:
            return "detection";
    }
    return "?";
}

Check parse_check(const std::string &name) {
    for (Check c : {Check::stabilizers, Check::fidelity, Check::detection}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw ConfigError("unknown check \"" + name + "\" (expected stabilizers, fidelity or detection)");
}

void RunConfig::validate() const {
    if (checks.empty()) {
        throw ConfigError("no checks requested");
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (!(alpha > 0) || !(theta > 0) || !std::isfinite(alpha) || !std::isfinite(theta)) {
        throw ConfigError(std::string(mode == QubusModel::physical ? "physical" : "ideal") +
                          " mode needs alpha > 0 and theta > 0");
    }
    bool detection = has_check(*this, Check::detection);
    if (detection && graph.kind != GraphTemplate::grid) {
        throw ConfigError("the detection check runs on grid templates only");
    }
    if (detection && (graph.rows < 2 || graph.cols < 2)) {
        throw ConfigError("the detection check needs at least a 2x2 grid");
    }
    if (fault && !detection) {
        throw ConfigError("a fault only makes sense together with the detection check");
    }
    if (fault && *fault != "last") {
        FaultSpec f;
        try {
            f = parse_fault(*fault);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
        std::size_t steps = graph.rows * graph.cols;
        if (f.walk_id > 1 || f.skipped_step >= steps) {
            throw ConfigError("fault " + *fault + " does not name a step (walks 0-1, steps 0-" +
                              std::to_string(steps - 1) + ")");
        }
    }
    if (single_photon_inputs && graph.kind != GraphTemplate::wheel) {
        throw ConfigError("single-photon inputs only change wheel schedules");
    }
    bool executes = has_check(*this, Check::stabilizers) || has_check(*this, Check::fidelity);
    if (executes && graph.n_vertices > kMaxExecutableVertices) {
        throw ConfigError(graph.describe() + " exceeds the " + std::to_string(kMaxExecutableVertices) +
                          "-vertex simulation limit");
    }
}

nlohmann::json config_to_json(const RunConfig &c) {
    std::vector<std::string> checks;
    for (Check k : c.checks) {
        checks.emplace_back(to_string(k));
    }
    return {{"graph", graph_spec_to_json(c.graph)},
            {"graph_source", c.graph_source},
            {"mode", c.mode == QubusModel::ideal ? "ideal" : "physical"},
            {"alpha", c.alpha},
            {"theta", c.theta},
            {"trials", c.trials},
            {"seed", c.seed},
            {"fault", c.fault ? nlohmann::json(*c.fault) : nlohmann::json(nullptr)},
            {"checks", checks},
            {"single_photon_inputs", c.single_photon_inputs}};
}

RunConfig config_from_json(const nlohmann::json &j, RunConfig base) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    if (j.contains("graph")) {
        const auto &g = j.at("graph");
        try {
            if (g.is_string()) {
                base.graph = load_graph_spec(g.get<std::string>());
                base.graph_source = g.get<std::string>();
            } else {
                base.graph = graph_spec_from_json(g);
                base.graph_source = get_or<std::string>(j, "graph_source", "inline");
            }
        } catch (const GraphSpecError &e) {
            throw ConfigError(e.what());
        }
    }
    if (j.contains("mode")) {
        std::string mode = get_or<std::string>(j, "mode", "ideal");
        if (mode != "ideal" && mode != "physical") {
            throw ConfigError("mode must be ideal or physical, got \"" + mode + "\"");
        }
        base.mode = mode == "ideal" ? QubusModel::ideal : QubusModel::physical;
    }
    base.alpha = get_or(j, "alpha", base.alpha);
    base.theta = get_or(j, "theta", base.theta);
    if (j.contains("trials")) {
        long long trials = get_or<long long>(j, "trials", 0);
        if (trials < 1) {
            throw ConfigError("trials must be at least 1");
        }
        base.trials = static_cast<std::size_t>(trials);
    }
    base.seed = get_or(j, "seed", base.seed);
    if (j.contains("fault")) {
        base.fault = j.at("fault").is_null() ? std::nullopt : std::optional(get_or<std::string>(j, "fault", ""));
    }
    if (j.contains("checks")) {
        base.checks.clear();
        for (const std::string &name : get_or<std::vector<std::string>>(j, "checks", {})) {
            base.checks.push_back(parse_check(name));
        }
    }
    base.single_photon_inputs = get_or(j, "single_photon_inputs", base.single_photon_inputs);
    return base;
}

nlohmann::json report_to_json(const RunReport &report, bool include_timings) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult &c : report.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"details", c.details}});
    }
    nlohmann::json j{{"tool", "qweaver"},
                     {"version", report.version},
                     {"passed", report.passed},
                     {"config", report.config},
                     {"schedule", report.schedule},
                     {"checks", checks}};
    if (include_timings) {
        j["timings_ms"] = report.timings_ms;
    }
    return j;
}

RunReport report_from_json(const nlohmann::json &j) {
    RunReport r;
    try {
        r.version = j.at("version").get<std::string>();
        r.passed = j.at("passed").get<bool>();
        r.config = j.at("config");
        r.schedule = j.at("schedule");
        for (const auto &c : j.at("checks")) {
            r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("details")});
        }
        r.timings_ms = j.value("timings_ms", nlohmann::json::object());
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
    return r;
}

RunReport run(const RunConfig &config) {
    config.validate();
    RunReport report;
    report.config = config_to_json(config);
    CpParams params{config.alpha, config.theta, config.mode};

    auto t = Clock::now();
    OperationSchedule schedule = compile_schedule(config.graph, {config.single_photon_inputs});
    report.schedule = schedule_to_json(schedule);
    report.schedule["lower_bound_walks"] = trail_cover_lower_bound(config.graph);
    report.timings_ms["compile"] = elapsed_ms(t);

    if (has_check(config, Check::stabilizers) || has_check(config, Check::fidelity)) {
        t = Clock::now();
        RunRng rng = RunRng(config.seed).split(0);
        ExecutionResult exec = execute_schedule(schedule, params, rng);
        report.timings_ms["execute"] = elapsed_ms(t);
        t = Clock::now();
        for (Check c : config.checks) {
            if (c == Check::stabilizers) {
                report.checks.push_back(stabilizer_check(exec.state, config.graph));
            } else if (c == Check::fidelity) {
                report.checks.push_back(fidelity_check(exec, config.graph));
            }
        }
        report.timings_ms["verify"] = elapsed_ms(t);
    }
    if (has_check(config, Check::detection)) {
        t = Clock::now();
        report.checks.push_back(detection_check(config, params));
        report.timings_ms["detection"] = elapsed_ms(t);
    }
    report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult &c) { return c.passed; });
    return report;
}

}  // namespace qweaver
