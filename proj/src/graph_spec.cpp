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

#include "qweaver/graph_spec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qweaver {

namespace {

std::size_t require_size(const nlohmann::json &j, const char *key, const std::string &where) {
    if (!j.contains(key)) {
        throw GraphSpecError(where + ": missing \"" + key + "\"");
    }
    const auto &v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw GraphSpecError(where + ": \"" + key + "\" must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

const char *to_string(GraphTemplate t) {
    switch (t) {
        case GraphTemplate::custom:
            return "custom";
        case GraphTemplate::line:
            return "line";
        case GraphTemplate::wheel:
            return "wheel";
        case GraphTemplate::grid:
            return "grid";
    }
    return "?";
}

GraphSpec GraphSpec::custom(std::size_t n_vertices, std::vector<Edge> edges) {
    for (auto &[a, b] : edges) {
        if (a == b) {
            throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
        }
        if (a >= n_vertices || b >= n_vertices) {
            throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                        ") references a vertex outside 0.." + std::to_string(n_vertices));
        }
        if (a > b) {
            std::swap(a, b);
        }
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw std::invalid_argument("graph lists an edge twice");
    }
    GraphSpec spec;
    spec.n_vertices = n_vertices;
    spec.edges = std::move(edges);
    return spec;
}

GraphSpec GraphSpec::line(std::size_t n) {
    if (n < 1) {
        throw std::invalid_argument("line needs at least one vertex");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; i++) {
        edges.emplace_back(i, i + 1);
    }
    GraphSpec spec = custom(n, std::move(edges));
    spec.kind = GraphTemplate::line;
    spec.n = n;
    return spec;
}

GraphSpec GraphSpec::wheel(std::size_t n) {
    if (n < 3) {
        throw std::invalid_argument("wheel needs a rim of at least three vertices");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; i++) {
        edges.emplace_back(i, (i + 1) % n);
        edges.emplace_back(i, n);
    }
    GraphSpec spec = custom(n + 1, std::move(edges));
    spec.kind = GraphTemplate::wheel;
    spec.n = n;
    return spec;
}

GraphSpec GraphSpec::grid(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("grid needs at least one row and one column");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < rows; i++) {
        for (std::size_t j = 0; j < cols; j++) {
            std::size_t v = i * cols + j;
            if (j + 1 < cols) {
                edges.emplace_back(v, v + 1);
            }
            if (i + 1 < rows) {
                edges.emplace_back(v, v + cols);
            }
        }
    }
    GraphSpec spec = custom(rows * cols, std::move(edges));
    spec.kind = GraphTemplate::grid;
    spec.rows = rows;
    spec.cols = cols;
    return spec;
}

std::vector<std::vector<std::size_t>> GraphSpec::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(n_vertices);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto &row : adj) {
        std::sort(row.begin(), row.end());
    }
    return adj;
}

std::string GraphSpec::describe() const {
    switch (kind) {
        case GraphTemplate::line:
            return "line(" + std::to_string(n) + ")";
        case GraphTemplate::wheel:
            return "wheel(" + std::to_string(n) + ")";
        case GraphTemplate::grid:
            return "grid(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
        case GraphTemplate::custom:
            break;
    }
    return "custom(" + std::to_string(n_vertices) + " vertices, " + std::to_string(edges.size()) + " edges)";
}

GraphSpec graph_spec_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw GraphSpecError("graph spec must be a JSON object");
    }
    try {
        if (j.contains("template")) {
            if (!j.at("template").is_string()) {
                throw GraphSpecError("/template: must be a string");
            }
            std::string name = j.at("template").get<std::string>();
            if (name == "line") {
                return GraphSpec::line(require_size(j, "n", "/"));
            }
            if (name == "wheel") {
                return GraphSpec::wheel(require_size(j, "n", "/"));
            }
            if (name == "grid") {
                return GraphSpec::grid(require_size(j, "rows", "/"), require_size(j, "cols", "/"));
            }
            throw GraphSpecError("/template: unknown template \"" + name + "\"");
        }
        std::size_t n = require_size(j, "vertices", "/");
        std::vector<Edge> edges;
        if (j.contains("edges")) {
            const auto &list = j.at("edges");
            if (!list.is_array()) {
                throw GraphSpecError("/edges: must be an array");
            }
            for (std::size_t k = 0; k < list.size(); k++) {
                const auto &e = list[k];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
                    throw GraphSpecError("/edges/" + std::to_string(k) + ": expected [a, b] with vertex indices");
                }
                edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
            }
        }
        return GraphSpec::custom(n, std::move(edges));
    } catch (const std::invalid_argument &e) {
        throw GraphSpecError(e.what());
    }
}

GraphSpec parse_graph_spec(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        // byte offsets are 1-based and point just past the offending character
        std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
        std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
        throw GraphSpecError("graph spec parse error at line " + std::to_string(line) + ": " + e.what());
    }
    return graph_spec_from_json(j);
}

GraphSpec load_graph_spec(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw GraphSpecError("cannot open graph file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_graph_spec(buffer.str());
    } catch (const GraphSpecError &e) {
        throw GraphSpecError(path + ": " + e.what());
    }
}

nlohmann::json graph_spec_to_json(const GraphSpec &spec) {
    nlohmann::json j;
    switch (spec.kind) {
        case GraphTemplate::line:
        case GraphTemplate::wheel:
            j["template"] = to_string(spec.kind);
            j["n"] = spec.n;
            break;
        case GraphTemplate::grid:
            j["template"] = "grid";
            j["rows"] = spec.rows;
            j["cols"] = spec.cols;
            break;
        case GraphTemplate::custom:
            break;
    }
    j["vertices"] = spec.n_vertices;
    j["edges"] = nlohmann::json::array();
    for (auto [a, b] : spec.edges) {
        j["edges"].push_back({a, b});
    }
    return j;
}

}  // namespace qweaver
