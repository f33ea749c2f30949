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

#include "qweaver/schedule.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace qweaver {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void join(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

// Components that own at least one edge, each as its sorted vertex list.
std::vector<std::vector<std::size_t>> edge_components(std::size_t n, const std::vector<Edge> &edges) {
    DisjointSets sets(n);
    std::vector<bool> touched(n, false);
    for (auto [a, b] : edges) {
        sets.join(a, b);
        touched[a] = touched[b] = true;
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < n; v++) {
        if (touched[v]) {
            groups[sets.find(v)].push_back(v);
        }
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto &[root, members] : groups) {
        out.push_back(std::move(members));
    }
    return out;
}

std::vector<std::size_t> degrees(std::size_t n, const std::vector<Edge> &edges) {
    std::vector<std::size_t> deg(n, 0);
    for (auto [a, b] : edges) {
        deg[a]++;
        deg[b]++;
    }
    return deg;
}

Edge ordered(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

void tally_cost(OperationSchedule &s) {
    ScheduleCost c;
    for (const Stage &stage : s.stages) {
        for (const Block &block : stage.initial_blocks) {
            c.block_bond_count += block.empty() ? 0 : block.size() - 1;
        }
        for (const ScheduledWalk &w : stage.walks) {
            c.walk_count++;
            c.ancilla_count++;
            c.cp_gate_count += w.photons.size();
        }
    }
    c.entangling_steps = c.cp_gate_count + c.block_bond_count;
    c.comparison_entangling_steps = s.cost.comparison_entangling_steps;
    s.cost = c;
}

Block singles_except(std::size_t n, const std::vector<Block> &blocks) {
    std::vector<bool> used(n, false);
    for (const Block &b : blocks) {
        for (std::size_t v : b) {
            used[v] = true;
        }
    }
    Block rest;
    for (std::size_t v = 0; v < n; v++) {
        if (!used[v]) {
            rest.push_back(v);
        }
    }
    return rest;
}

void append_singles(std::vector<Block> &blocks, std::size_t n) {
    for (std::size_t v : singles_except(n, blocks)) {
        blocks.push_back({v});
    }
}

OperationSchedule wheel_schedule(const GraphSpec &spec, const CompileOptions &options) {
    const std::size_t n = spec.n;
    OperationSchedule s;
    s.n_vertices = n + 1;
    Stage stage;
    Walk rim(n);
    std::iota(rim.begin(), rim.end(), 0);
    if (options.single_photon_inputs) {
        s.variant = "wheel_single_photon";
        stage.walks.push_back({Walk{n - 1, 0}, AncillaDisposition::remove, std::nullopt});
    } else {
        s.variant = "wheel_rim_retain";
        stage.initial_blocks.push_back({0, n - 1});
    }
    append_singles(stage.initial_blocks, n);
    stage.walks.push_back({rim, AncillaDisposition::retain, n});
    s.stages.push_back(std::move(stage));
    s.cost.comparison_entangling_steps = 2 * n;
    tally_cost(s);
    return s;
}

Walk row_snake(std::size_t rows, std::size_t cols, bool from_bottom, bool from_right) {
    Walk w;
    for (std::size_t k = 0; k < rows; k++) {
        std::size_t i = from_bottom ? rows - 1 - k : k;
        bool leftward = (k % 2 == 0) == from_right;
        for (std::size_t t = 0; t < cols; t++) {
            w.push_back(i * cols + (leftward ? cols - 1 - t : t));
        }
    }
    return w;
}

Walk column_snake(std::size_t rows, std::size_t cols, bool from_bottom, bool from_right) {
    Walk w;
    for (std::size_t k = 0; k < cols; k++) {
        std::size_t j = from_right ? cols - 1 - k : k;
        bool upward = (k % 2 == 0) == from_bottom;
        for (std::size_t t = 0; t < rows; t++) {
            w.push_back((upward ? rows - 1 - t : t) * cols + j);
        }
    }
    return w;
}

std::vector<Edge> walk_edges(const Walk &w) {
    std::vector<Edge> out;
    for (std::size_t i = 0; i + 1 < w.size(); i++) {
        out.push_back(ordered(w[i], w[i + 1]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Splits an edge set into vertex-disjoint simple paths, or returns nothing if
// some vertex has degree > 2 or there is a cycle.
std::optional<std::vector<Block>> as_paths(std::size_t n, const std::vector<Edge> &edges) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> seen(n, false);
    std::vector<Block> paths;
    std::size_t covered = 0;
    for (std::size_t v = 0; v < n; v++) {
        if (seen[v] || adj[v].size() != 1) {
            if (adj[v].size() > 2) {
                return std::nullopt;
            }
            continue;
        }
        Block path{v};
        seen[v] = true;
        std::size_t prev = kNone, cur = v;
        while (true) {
            std::size_t next = kNone;
            for (std::size_t u : adj[cur]) {
                if (u != prev) {
                    next = u;
                }
            }
            if (next == kNone) {
                break;
            }
            path.push_back(next);
            seen[next] = true;
            prev = cur;
            cur = next;
        }
        covered += path.size() - 1;
        paths.push_back(std::move(path));
    }
    if (covered != edges.size()) {
        return std::nullopt;  // a cycle survived
    }
    return paths;
}

}  // namespace

std::vector<const ScheduledWalk *> OperationSchedule::all_walks() const {
    std::vector<const ScheduledWalk *> out;
    for (const Stage &stage : stages) {
        for (const ScheduledWalk &w : stage.walks) {
            out.push_back(&w);
        }
    }
    return out;
}

std::vector<Walk> trail_cover(std::size_t n_vertices, const std::vector<Edge> &edges) {
    // Real edges get ids 0..m-1 so that, for equal neighbors, they are taken
    // before virtual ones.
    struct Arc {
        std::size_t to, id;
    };
    std::vector<Edge> all = edges;
    std::vector<std::size_t> deg = degrees(n_vertices, edges);
    std::vector<Walk> trails;
    const std::size_t m = edges.size();

    auto components = edge_components(n_vertices, edges);
    std::vector<std::size_t> starts;
    for (const auto &comp : components) {
        std::vector<std::size_t> odd;
        for (std::size_t v : comp) {
            if (deg[v] % 2 == 1) {
                odd.push_back(v);
            }
        }
        for (std::size_t i = 0; i + 1 < odd.size(); i += 2) {
            all.emplace_back(odd[i], odd[i + 1]);
        }
        starts.push_back(odd.empty() ? comp.front() : odd.front());
    }

    std::vector<std::vector<Arc>> adj(n_vertices);
    for (std::size_t id = 0; id < all.size(); id++) {
        adj[all[id].first].push_back({all[id].second, id});
        adj[all[id].second].push_back({all[id].first, id});
    }
    for (auto &row : adj) {
        std::sort(row.begin(), row.end(), [](const Arc &x, const Arc &y) {
            return std::tie(x.to, x.id) < std::tie(y.to, y.id);
        });
    }
    std::vector<bool> used(all.size(), false);
    std::vector<std::size_t> next(n_vertices, 0);

    for (std::size_t start : starts) {
        // Iterative Hierholzer; entries are (vertex, edge used to arrive).
        std::vector<std::pair<std::size_t, std::size_t>> stack{{start, kNone}}, circuit;
        while (!stack.empty()) {
            std::size_t v = stack.back().first;
            while (next[v] < adj[v].size() && used[adj[v][next[v]].id]) {
                next[v]++;
            }
            if (next[v] < adj[v].size()) {
                const Arc &a = adj[v][next[v]];
                used[a.id] = true;
                stack.emplace_back(a.to, a.id);
            } else {
                circuit.push_back(stack.back());
                stack.pop_back();
            }
        }
        std::reverse(circuit.begin(), circuit.end());

        std::size_t steps = circuit.size() - 1;
        std::size_t cut = kNone;
        for (std::size_t i = 1; i <= steps; i++) {
            if (circuit[i].second >= m) {
                cut = i;
                break;
            }
        }
        if (cut == kNone) {
            Walk closed;
            for (const auto &c : circuit) {
                closed.push_back(c.first);
            }
            trails.push_back(std::move(closed));
            continue;
        }
        // Rotate so that the circuit starts right after a virtual edge.
        Walk current{circuit[cut].first};
        for (std::size_t k = 1; k <= steps; k++) {
            const auto &c = circuit[(cut - 1 + k) % steps + 1];
            if (c.second >= m) {
                trails.push_back(std::move(current));
                current = {c.first};
            } else {
                current.push_back(c.first);
            }
        }
    }
    return trails;
}

std::size_t trail_cover_lower_bound(const GraphSpec &spec) {
    std::vector<std::size_t> deg = degrees(spec.n_vertices, spec.edges);
    std::size_t total = 0;
    for (const auto &comp : edge_components(spec.n_vertices, spec.edges)) {
        std::size_t odd = std::count_if(comp.begin(), comp.end(), [&](std::size_t v) { return deg[v] % 2 == 1; });
        total += std::max<std::size_t>(1, odd / 2);
    }
    return total;
}

OperationSchedule compile_schedule(const GraphSpec &spec, const CompileOptions &options) {
    if (spec.kind == GraphTemplate::wheel) {
        return wheel_schedule(spec, options);
    }
    OperationSchedule s;
    s.variant = "trail_cover";
    s.n_vertices = spec.n_vertices;
    Stage stage;
    append_singles(stage.initial_blocks, spec.n_vertices);
    for (Walk &trail : trail_cover(spec.n_vertices, spec.edges)) {
        stage.walks.push_back({std::move(trail), AncillaDisposition::remove, std::nullopt});
    }
    s.stages.push_back(std::move(stage));
    tally_cost(s);
    return s;
}

OperationSchedule grid_two_pass_staging(std::size_t rows, std::size_t cols) {
    if (rows < 2 || cols < 2) {
        throw std::invalid_argument("two-pass grid staging needs at least a 2x2 grid");
    }
    const std::size_t n = rows * cols;
    struct Candidate {
        Walk first, second;
        std::vector<Block> blocks;
        std::size_t longest = 0;
    };
    std::optional<Candidate> best;
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            Walk w1 = row_snake(rows, cols, a & 2, a & 1);
            Walk w2 = column_snake(rows, cols, b & 2, b & 1);
            std::vector<Edge> e1 = walk_edges(w1), e2 = walk_edges(w2), shared;
            std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(), std::back_inserter(shared));
            auto paths = as_paths(n, shared);
            if (!paths) {
                continue;
            }
            std::size_t longest = 0;
            for (const Block &p : *paths) {
                longest = std::max(longest, p.size());
            }
            if (!best || longest < best->longest) {
                best = Candidate{std::move(w1), std::move(w2), std::move(*paths), longest};
            }
        }
    }
    if (!best) {
        throw std::logic_error("no snake pair leaves a path-shaped overlap");
    }
    OperationSchedule s;
    s.variant = "grid_two_pass";
    s.n_vertices = n;
    Stage first;
    first.initial_blocks = std::move(best->blocks);
    append_singles(first.initial_blocks, n);
    first.walks.push_back({std::move(best->first), AncillaDisposition::check, std::nullopt});
    Stage second;
    second.walks.push_back({std::move(best->second), AncillaDisposition::check, std::nullopt});
    s.stages.push_back(std::move(first));
    s.stages.push_back(std::move(second));
    tally_cost(s);
    return s;
}

std::vector<std::size_t> odd_visits(const Walk &walk) {
    std::map<std::size_t, std::size_t> count;
    for (std::size_t v : walk) {
        count[v]++;
    }
    std::vector<std::size_t> out;
    for (auto [v, c] : count) {
        if (c % 2 == 1) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<std::pair<Edge, std::size_t>> edge_multiplicities(const OperationSchedule &schedule) {
    std::map<Edge, std::size_t> count;
    for (const Stage &stage : schedule.stages) {
        for (const Block &block : stage.initial_blocks) {
            for (std::size_t i = 0; i + 1 < block.size(); i++) {
                count[ordered(block[i], block[i + 1])]++;
            }
        }
        for (const ScheduledWalk &w : stage.walks) {
            for (std::size_t i = 0; i + 1 < w.photons.size(); i++) {
                count[ordered(w.photons[i], w.photons[i + 1])]++;
            }
            if (w.disposition == AncillaDisposition::retain && w.hub_vertex) {
                for (std::size_t v : odd_visits(w.photons)) {
                    count[ordered(v, *w.hub_vertex)]++;
                }
            }
        }
    }
    return {count.begin(), count.end()};
}

std::vector<Edge> realized_edges(const OperationSchedule &schedule) {
    std::vector<Edge> out;
    for (const auto &[e, c] : edge_multiplicities(schedule)) {
        if (c % 2 == 1) {
            out.push_back(e);
        }
    }
    return out;
}

std::size_t initial_photon_count(const OperationSchedule &schedule) {
    std::size_t hubs = 0;
    for (const ScheduledWalk *w : schedule.all_walks()) {
        hubs += w->disposition == AncillaDisposition::retain ? 1 : 0;
    }
    return schedule.n_vertices - hubs;
}

nlohmann::json schedule_to_json(const OperationSchedule &schedule) {
    nlohmann::json j;
    j["variant"] = schedule.variant;
    j["n_vertices"] = schedule.n_vertices;
    j["stages"] = nlohmann::json::array();
    for (const Stage &stage : schedule.stages) {
        nlohmann::json js;
        js["initial_blocks"] = stage.initial_blocks;
        js["walks"] = nlohmann::json::array();
        for (const ScheduledWalk &w : stage.walks) {
            nlohmann::json jw{{"photons", w.photons}, {"disposition", to_string(w.disposition)}};
            if (w.hub_vertex) {
                jw["hub_vertex"] = *w.hub_vertex;
            }
            js["walks"].push_back(std::move(jw));
        }
        j["stages"].push_back(std::move(js));
    }
    const ScheduleCost &c = schedule.cost;
    j["cost"] = {{"walk_count", c.walk_count},
                 {"cp_gate_count", c.cp_gate_count},
                 {"ancilla_count", c.ancilla_count},
                 {"block_bond_count", c.block_bond_count},
                 {"entangling_steps", c.entangling_steps}};
    if (c.comparison_entangling_steps) {
        j["cost"]["comparison_entangling_steps"] = *c.comparison_entangling_steps;
    }
    return j;
}

}  // namespace qweaver
