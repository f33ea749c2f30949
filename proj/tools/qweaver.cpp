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

// qweaver: compile, simulate and check photonic graph-state schedules.
//
// Exit status: 0 all checks passed, 1 a check failed, 2 bad configuration or
// input, 3 simulation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qweaver/harness.hpp"

namespace {

using qweaver::ConfigError;

struct Flags {
    std::string graph_file;
    std::string template_name;
    std::size_t n = 0, rows = 0, cols = 0;
    std::string mode;
    std::optional<double> alpha, theta;
    std::optional<long long> trials;
    std::optional<std::uint64_t> seed;
    std::string fault;
    std::vector<std::string> checks;
    std::string out, schedule_out, config_file;
    bool single_photon_inputs = false;
};

nlohmann::json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

qweaver::GraphSpec template_graph(const Flags &f) {
    try {
        if (f.template_name == "line" || f.template_name == "wheel") {
            if (f.n == 0) {
                throw ConfigError("--template " + f.template_name + " needs --n");
            }
            return f.template_name == "line" ? qweaver::GraphSpec::line(f.n) : qweaver::GraphSpec::wheel(f.n);
        }
        if (f.template_name == "grid") {
            if (f.rows == 0 || f.cols == 0) {
                throw ConfigError("--template grid needs --rows and --cols");
            }
            return qweaver::GraphSpec::grid(f.rows, f.cols);
        }
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown template \"" + f.template_name + "\" (expected line, wheel or grid)");
}

qweaver::RunConfig resolve(const Flags &f) {
    qweaver::RunConfig config;
    nlohmann::json file = f.config_file.empty() ? nlohmann::json::object() : read_json_file(f.config_file);
    bool graph_in_file = file.contains("graph");
    config = qweaver::config_from_json(file, config);

    if (!f.graph_file.empty() && !f.template_name.empty()) {
        throw ConfigError("--graph and --template are mutually exclusive");
    }
    if (!f.graph_file.empty()) {
        try {
            config.graph = qweaver::load_graph_spec(f.graph_file);
        } catch (const qweaver::GraphSpecError &e) {
            throw ConfigError(e.what());
        }
        config.graph_source = f.graph_file;
    } else if (!f.template_name.empty()) {
        config.graph = template_graph(f);
        config.graph_source = "template";
    } else if (!graph_in_file) {
        throw ConfigError("no graph given (use --graph FILE, --template NAME or a config file)");
    }

    if (!f.mode.empty()) {
        config.mode = f.mode == "physical" ? qweaver::QubusModel::physical : qweaver::QubusModel::ideal;
    }
    if (f.alpha) config.alpha = *f.alpha;
    if (f.theta) config.theta = *f.theta;
    if (f.trials) {
        if (*f.trials < 1) {
            throw ConfigError("trials must be at least 1");
        }
        config.trials = static_cast<std::size_t>(*f.trials);
    }
    if (f.seed) {
        config.seed = *f.seed;
    } else if (!file.contains("seed")) {
        if (const char *env = std::getenv("QWEAVER_SEED")) {
            try {
                config.seed = std::stoull(env);
            } catch (const std::exception &) {
                throw ConfigError(std::string("QWEAVER_SEED is not an unsigned integer: ") + env);
            }
        }
    }
    if (!f.fault.empty()) config.fault = f.fault;
    if (!f.checks.empty()) {
        config.checks.clear();
        for (const std::string &name : f.checks) {
            config.checks.push_back(qweaver::parse_check(name));
        }
    }
    if (f.single_photon_inputs) config.single_photon_inputs = true;
    config.validate();
    return config;
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path);
    }
    out << text << '\n';
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Compile, simulate and check qubus-mediated photonic graph states"};
    app.set_version_flag("--version", qweaver::kVersion);
    Flags f;
    app.add_option("--graph", f.graph_file, "Graph JSON file");
    app.add_option("--template", f.template_name, "line, wheel or grid");
    app.add_option("--n", f.n, "Size for line / wheel templates");
    app.add_option("--rows", f.rows, "Grid rows");
    app.add_option("--cols", f.cols, "Grid columns");
    app.add_option("--mode", f.mode, "ideal or physical")->check(CLI::IsMember({"ideal", "physical"}));
    app.add_option("--alpha", f.alpha, "Qubus amplitude (default 500)");
    app.add_option("--theta", f.theta, "XPM phase per photon (default 0.01)");
    app.add_option("--trials", f.trials, "Monte Carlo trials for the detection check");
    app.add_option("--seed", f.seed, "Run seed (falls back to QWEAVER_SEED, then 0)");
    app.add_option("--fault", f.fault, "Skipped step WALK:STEP, or 'last'");
    app.add_option("--check", f.checks, "stabilizers, fidelity, detection")->delimiter(',');
    app.add_option("--out", f.out, "Write the JSON report here instead of stdout");
    app.add_option("--schedule-out", f.schedule_out, "Write the compiled schedule as JSON");
    app.add_option("--config", f.config_file, "JSON config file; flags override it");
    app.add_flag("--single-photon-inputs", f.single_photon_inputs, "Wheel: build the rim bond with a walk");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int status = app.exit(e);
        return status == 0 ? 0 : 2;
    }

    try {
        qweaver::RunConfig config = resolve(f);
        if (!f.schedule_out.empty()) {
            auto schedule = qweaver::compile_schedule(config.graph, {config.single_photon_inputs});
            write_file(f.schedule_out, qweaver::schedule_to_json(schedule).dump(2));
        }
        qweaver::RunReport report = qweaver::run(config);
        std::string text = qweaver::report_to_json(report).dump(2);
        if (f.out.empty()) {
            std::cout << text << '\n';
        } else {
            write_file(f.out, text);
            for (const auto &c : report.checks) {
                std::cout << c.name << ": " << (c.passed ? "pass" : "FAIL") << '\n';
            }
        }
        return report.passed ? 0 : 1;
    } catch (const ConfigError &e) {
        std::cerr << "qweaver: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "qweaver: simulation error: " << e.what() << '\n';
        return 3;
    }
}
