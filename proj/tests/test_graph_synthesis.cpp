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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "oracle.hpp"
#include "qweaver/graph_synthesis.hpp"

using namespace qweaver;

namespace {

oracle::EdgeList as_edges(const std::vector<Edge> &e) { return oracle::EdgeList(e.begin(), e.end()); }

std::vector<Edge> sorted_pairs(std::vector<Edge> e) {
    for (auto &[a, b] : e)
        if (a > b) std::swap(a, b);
    std::sort(e.begin(), e.end());
    return e;
}

// Every edge used exactly once, consecutive vertices adjacent.
void check_partition(const std::vector<Walk> &walks, const std::vector<Edge> &edges) {
    std::multiset<Edge> used;
    for (const Walk &w : walks) {
        REQUIRE(w.size() >= 2);
        for (std::size_t i = 0; i + 1 < w.size(); i++) {
            used.insert({std::min(w[i], w[i + 1]), std::max(w[i], w[i + 1])});
        }
    }
    CHECK(std::vector<Edge>(used.begin(), used.end()) == sorted_pairs(edges));
}

std::vector<Edge> random_edges(std::size_t n, std::size_t m, std::mt19937_64 &rng) {
    std::set<Edge> e;
    while (e.size() < m) {
        std::size_t a = rng() % n, b = rng() % n;
        if (a != b) e.insert({std::min(a, b), std::max(a, b)});
    }
    return {e.begin(), e.end()};
}

double min_stabilizer(const PhotonicState &s, const GraphSpec &g) {
    std::vector<double> k = stabilizer_expectations(s, g);
    return *std::min_element(k.begin(), k.end());
}

ExecutionResult execute(const GraphSpec &g, std::uint64_t seed, CompileOptions options = {}) {
    RunRng rng(seed);
    return execute_schedule(compile_schedule(g, options), CpParams{}, rng);
}

}  // namespace

TEST_CASE("templates") {
    GraphSpec l = GraphSpec::line(4);
    CHECK(l.edges == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    GraphSpec w = GraphSpec::wheel(4);
    CHECK(w.n_vertices == 5);
    CHECK(w.edges == std::vector<Edge>{{0, 1}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    GraphSpec g = GraphSpec::grid(2, 3);
    CHECK(g.edges == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}, {1, 4}, {2, 5}, {3, 4}, {4, 5}});
    CHECK(g.describe() == "grid(2x3)");
    CHECK_THROWS_AS(GraphSpec::wheel(2), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::line(0), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::grid(0, 3), std::invalid_argument);
}

TEST_CASE("custom graphs are validated and normalized") {
    GraphSpec g = GraphSpec::custom(3, {{2, 1}, {0, 1}});
    CHECK(g.edges == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(g.adjacency()[1] == std::vector<std::size_t>{0, 2});
    CHECK_THROWS_AS(GraphSpec::custom(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::custom(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::custom(3, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("graph JSON: both forms and round trip") {
    GraphSpec a = parse_graph_spec(R"({"vertices": 4, "edges": [[0, 1], [3, 1]]})");
    CHECK(a.n_vertices == 4);
    CHECK(a.edges == std::vector<Edge>{{0, 1}, {1, 3}});
    GraphSpec b = parse_graph_spec(R"({"template": "grid", "rows": 3, "cols": 2})");
    CHECK(b.kind == GraphTemplate::grid);
    CHECK(b.edges == GraphSpec::grid(3, 2).edges);
    for (const GraphSpec &g : {a, b, GraphSpec::wheel(5), GraphSpec::line(3)}) {
        GraphSpec back = graph_spec_from_json(graph_spec_to_json(g));
        CHECK(back.n_vertices == g.n_vertices);
        CHECK(back.edges == g.edges);
        CHECK(back.kind == g.kind);
    }
}

TEST_CASE("graph JSON errors point at the problem") {
    auto message = [](const char *text) {
        try {
            parse_graph_spec(text);
        } catch (const GraphSpecError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("{\n  \"vertices\": 3,\n  \"edges\": [[0, 1],, [1, 2]]\n}").find("line 3") != std::string::npos);
    CHECK(message(R"({"vertices": 3, "edges": [[0, 1], [1, 2], [2]]})").find("/edges/2") != std::string::npos);
    CHECK(message(R"({"vertices": 3, "edges": [[0, 0]]})").find("self-loop") != std::string::npos);
    CHECK(message(R"({"template": "torus", "n": 3})").find("unknown template") != std::string::npos);
    CHECK(message(R"({"edges": []})").find("vertices") != std::string::npos);
    CHECK(message("[1, 2]").find("object") != std::string::npos);
    CHECK_THROWS_AS(load_graph_spec("/nonexistent/graph.json"), GraphSpecError);
}

TEST_CASE("graph files load from disk") {
    std::string path = "qweaver_test_graph.json";
    {
        std::ofstream out(path);
        out << R"({"template": "wheel", "n": 6})";
    }
    GraphSpec g = load_graph_spec(path);
    std::remove(path.c_str());
    CHECK(g.edges == GraphSpec::wheel(6).edges);
}

TEST_CASE("trail cover is a minimal edge partition on small graphs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; trial++) {
        std::size_t n = 3 + trial % 4;
        std::size_t max_m = std::min<std::size_t>(8, n * (n - 1) / 2);
        std::vector<Edge> edges = random_edges(n, 1 + rng() % max_m, rng);
        std::vector<Walk> walks = trail_cover(n, edges);
        check_partition(walks, edges);
        CHECK(walks.size() == oracle::min_trail_partition(as_edges(edges)));
        CHECK(walks.size() == trail_cover_lower_bound(GraphSpec::custom(n, edges)));
    }
}

TEST_CASE("trail cover of the 5x5 grid needs six walks") {
    GraphSpec g = GraphSpec::grid(5, 5);
    std::vector<Walk> walks = trail_cover(g.n_vertices, g.edges);
    check_partition(walks, g.edges);
    // Each odd-degree vertex ends exactly one trail.
    CHECK(walks.size() == oracle::odd_degree_count(25, as_edges(g.edges)) / 2);
    CHECK(walks.size() == 6);
}

TEST_CASE("compiled schedules cover each edge exactly once") {
    for (const GraphSpec &g :
         {GraphSpec::line(1), GraphSpec::line(7), GraphSpec::grid(3, 3), GraphSpec::grid(2, 4),
          GraphSpec::custom(6, {{0, 1}, {2, 3}, {3, 4}, {4, 2}})}) {
        OperationSchedule s = compile_schedule(g);
        CHECK(s.variant == "trail_cover");
        CHECK(realized_edges(s) == g.edges);
        for (auto [e, m] : edge_multiplicities(s)) CHECK(m == 1);
        CHECK(s.cost.walk_count == trail_cover_lower_bound(g));
        CHECK(initial_photon_count(s) == g.n_vertices);
    }
}

TEST_CASE("wheel schedule: one walk, n CP gates, fewer entangling steps than 2n") {
    for (std::size_t n = 3; n <= 12; n++) {
        OperationSchedule s = compile_schedule(GraphSpec::wheel(n));
        CHECK(s.variant == "wheel_rim_retain");
        CHECK(s.cost.walk_count == 1);
        CHECK(s.cost.cp_gate_count == n);
        CHECK(s.cost.entangling_steps < 2 * n);
        CHECK(s.cost.comparison_entangling_steps == 2 * n);
        CHECK(realized_edges(s) == GraphSpec::wheel(n).edges);
        REQUIRE(s.all_walks().size() == 1);
        CHECK(s.all_walks()[0]->disposition == AncillaDisposition::retain);
        CHECK(s.all_walks()[0]->hub_vertex == n);
        CHECK(initial_photon_count(s) == n);

        OperationSchedule single = compile_schedule(GraphSpec::wheel(n), {true});
        CHECK(single.variant == "wheel_single_photon");
        CHECK(single.cost.walk_count == 2);
        CHECK(single.cost.cp_gate_count == n + 2);
        CHECK(realized_edges(single) == GraphSpec::wheel(n).edges);
        for (const Block &b : single.stages[0].initial_blocks) CHECK(b.size() == 1);
    }
}

TEST_CASE("two-pass grid staging") {
    for (std::size_t r = 2; r <= 5; r++) {
        for (std::size_t c = 2; c <= 5; c++) {
            OperationSchedule s = grid_two_pass_staging(r, c);
            CHECK(s.variant == "grid_two_pass");
            CHECK(realized_edges(s) == GraphSpec::grid(r, c).edges);
            auto walks = s.all_walks();
            REQUIRE(walks.size() == 2);
            for (const ScheduledWalk *w : walks) {
                CHECK(w->disposition == AncillaDisposition::check);
                // Each pass visits every photon once.
                Walk sorted = w->photons;
                std::sort(sorted.begin(), sorted.end());
                Walk all(r * c);
                for (std::size_t i = 0; i < all.size(); i++) all[i] = i;
                CHECK(sorted == all);
                CHECK(odd_visits(w->photons).size() == r * c);
            }
        }
    }
    OperationSchedule s = grid_two_pass_staging(3, 3);
    auto walks = s.all_walks();
    CHECK(walks[0]->photons == Walk{0, 1, 2, 5, 4, 3, 6, 7, 8});
    CHECK(walks[1]->photons == Walk{2, 5, 8, 7, 4, 1, 0, 3, 6});
    CHECK_THROWS_AS(grid_two_pass_staging(1, 4), std::invalid_argument);
}

TEST_CASE("odd visits") {
    CHECK(odd_visits({0, 1, 0, 2}) == std::vector<std::size_t>{1, 2});
    CHECK(odd_visits({3, 1, 2}) == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("schedule JSON carries walks and cost") {
    nlohmann::json j = schedule_to_json(compile_schedule(GraphSpec::wheel(5)));
    CHECK(j["variant"] == "wheel_rim_retain");
    CHECK(j["cost"]["walk_count"] == 1);
    CHECK(j["cost"]["comparison_entangling_steps"] == 10);
    CHECK(j["stages"][0]["walks"][0]["disposition"] == "retain");
    CHECK(j["stages"][0]["walks"][0]["hub_vertex"] == 5);
}

TEST_CASE("initial blocks") {
    // (|0⟩|+⟩ + |1⟩|−⟩)/√2 written out.
    oracle::Amplitudes line2{{0, 0.5}, {oracle::pol_bit(1), 0.5}, {oracle::pol_bit(0), 0.5},
                             {oracle::pol_bit(0) | oracle::pol_bit(1), -0.5}};
    CHECK(oracle::max_abs_diff(oracle::amplitudes(build_initial_blocks("line2")), line2) < 1e-15);
    // |+⟩|0⟩|+⟩ + |−⟩|1⟩|−⟩ over √2: the three-photon block, middle photon bonded to both.
    oracle::Amplitudes line3;
    for (int x = 0; x < 8; x++) {
        int a = x & 1, m = (x >> 1) & 1, b = (x >> 2) & 1;
        double sign = m ? ((a ? -1 : 1) * (b ? -1 : 1)) : 1;
        std::uint64_t label = (a ? oracle::pol_bit(0) : 0) | (m ? oracle::pol_bit(1) : 0) | (b ? oracle::pol_bit(2) : 0);
        line3[label] = sign / std::sqrt(8.0);
    }
    CHECK(oracle::max_abs_diff(oracle::amplitudes(build_initial_blocks("line3")), line3) < 1e-15);
    CHECK(oracle::amplitudes(build_initial_blocks("plus")).size() == 2);
    CHECK_THROWS_AS(build_initial_blocks("line4"), std::invalid_argument);
    CHECK_THROWS_AS(prepare_blocks(3, {{0, 1}, {1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(prepare_blocks(3, {{0, 3}}), std::invalid_argument);
}

TEST_CASE("lines up to ten photons") {
    for (std::size_t n = 1; n <= 10; n++) {
        GraphSpec g = GraphSpec::line(n);
        ExecutionResult r = execute(g, n);
        CHECK(min_stabilizer(r.state, g) >= 1 - 1e-9);
        CHECK(oracle::fidelity(oracle::amplitudes(r.state), oracle::graph_state(n, as_edges(g.edges))) >= 1 - 1e-9);
    }
}

TEST_CASE("wheels from three to nine rim photons") {
    for (std::size_t n = 3; n <= 9; n++) {
        GraphSpec g = GraphSpec::wheel(n);
        for (bool single : {false, true}) {
            ExecutionResult r = execute(g, n, {single});
            CHECK(r.state.photon_count() == n + 1);
            CHECK(min_stabilizer(r.state, g) >= 1 - 1e-9);
            oracle::Amplitudes target = oracle::graph_state(n + 1, as_edges(g.edges));
            CHECK(oracle::fidelity(oracle::amplitudes(r.state), target) >= 1 - 1e-9);
            LocalFrame frame = find_local_frame(r.state, graph_state_oracle(g));
            CHECK(frame.fidelity_after >= 1 - 1e-9);
            CHECK(std::all_of(frame.ops.begin(), frame.ops.end(), [](LocalClifford c) { return c == LocalClifford::I; }));
        }
    }
}

TEST_CASE("3x3 and 4x4 grids") {
    for (auto [rows, cols] : {std::pair{3, 3}, std::pair{4, 4}}) {
        GraphSpec g = GraphSpec::grid(rows, cols);
        ExecutionResult r = execute(g, 7);
        CHECK(min_stabilizer(r.state, g) >= 1 - 1e-9);
        CHECK(oracle::fidelity(oracle::amplitudes(r.state), oracle::graph_state(g.n_vertices, as_edges(g.edges))) >=
              1 - 1e-9);
    }
}

TEST_CASE("property: random graphs come out exact") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 25; trial++) {
        std::size_t n = 3 + trial % 5;
        std::size_t m = 1 + rng() % std::min<std::size_t>(10, n * (n - 1) / 2);
        GraphSpec g = GraphSpec::custom(n, random_edges(n, m, rng));
        ExecutionResult r = execute(g, trial);
        CHECK(min_stabilizer(r.state, g) >= 1 - 1e-9);
        CHECK(oracle::fidelity(oracle::amplitudes(r.state), oracle::graph_state(n, as_edges(g.edges))) >= 1 - 1e-9);
        CHECK(r.walks.size() == trail_cover_lower_bound(g));
    }
}

TEST_CASE("execution is reproducible from the seed") {
    GraphSpec g = GraphSpec::grid(2, 3);
    ExecutionResult a = execute(g, 5), b = execute(g, 5);
    REQUIRE(a.walks.size() == b.walks.size());
    for (std::size_t i = 0; i < a.walks.size(); i++) {
        CHECK(a.walks[i].photon_numbers == b.walks[i].photon_numbers);
        CHECK(a.walks[i].detection == b.walks[i].detection);
    }
}

TEST_CASE("execution rejects what it cannot run") {
    RunRng rng(1);
    CHECK_THROWS_AS(execute_schedule(grid_two_pass_staging(2, 2), CpParams{}, rng), std::invalid_argument);
    CHECK_THROWS_AS(execute_schedule(compile_schedule(GraphSpec::line(kMaxExecutableVertices + 1)), CpParams{}, rng),
                    std::length_error);
    OperationSchedule bad = compile_schedule(GraphSpec::wheel(4));
    bad.stages[0].walks[0].hub_vertex = 2;
    CHECK_THROWS_AS(execute_schedule(bad, CpParams{}, rng), std::invalid_argument);
}

TEST_CASE("stabilizer expectations") {
    GraphSpec g = GraphSpec::line(3);
    PhotonicState s = graph_state_oracle(g);
    for (double k : stabilizer_expectations(s, g)) CHECK(k == doctest::Approx(1.0));
    // Z on the middle photon anticommutes with K_1 only.
    std::vector<double> z = stabilizer_expectations(apply_local_unitary(s, 1, gates::kPauliZ), g);
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(z[1] == doctest::Approx(-1.0));
    CHECK(z[2] == doctest::Approx(1.0));
    // A product |+++⟩ has ⟨K⟩ = 0 for every vertex with neighbours.
    for (double k : stabilizer_expectations(prepare_blocks(3, {}), g)) CHECK(std::abs(k) < 1e-12);

    CHECK_THROWS_WITH_AS(stabilizer_expectations(beam_splitter(s, 0), g), "unmerged paths", std::invalid_argument);
    PhotonicState live = s;
    live.add_register({1, 0});
    CHECK_THROWS_WITH_AS(stabilizer_expectations(live, g), "live qubus register", std::invalid_argument);
    CHECK_THROWS_AS(stabilizer_expectations(s, GraphSpec::line(4)), std::invalid_argument);
}

TEST_CASE("local frame search undoes single-photon Cliffords") {
    GraphSpec g = GraphSpec::grid(2, 2);
    PhotonicState target = graph_state_oracle(g);
    PhotonicState off = apply_local_unitary(target, 1, gates::kHadamard);
    off = apply_local_unitary(std::move(off), 3, gates::kPauliZ);
    LocalFrame frame = find_local_frame(off, target);
    CHECK(frame.exhaustive);
    CHECK(frame.fidelity_before < 0.9);
    CHECK(frame.fidelity_after >= 1 - 1e-12);
    CHECK(fidelity(apply_local_frame(off, frame.ops), target) >= 1 - 1e-12);
    CHECK(std::string(to_string(LocalClifford::S)) == "S");

    // Above six photons the search is greedy but still finds a single flip.
    GraphSpec big = GraphSpec::line(8);
    PhotonicState t8 = graph_state_oracle(big);
    LocalFrame f8 = find_local_frame(apply_local_unitary(t8, 5, gates::kPauliX), t8);
    CHECK_FALSE(f8.exhaustive);
    CHECK(f8.fidelity_after >= 1 - 1e-12);
}
