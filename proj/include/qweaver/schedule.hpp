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

#ifndef QWEAVER_SCHEDULE_HPP
#define QWEAVER_SCHEDULE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qweaver/ccz_engine.hpp"
#include "qweaver/graph_spec.hpp"

namespace qweaver {

struct ScheduledWalk {
    Walk photons;
    AncillaDisposition disposition = AncillaDisposition::remove;
    /// Vertex the ancilla becomes (retain only). It must equal the photon
    /// count at the time the walk starts.
    std::optional<std::size_t> hub_vertex;
};

/// A linear chain of vertices prepared before any walk runs. A one-vertex
/// block is a plain |+⟩ photon.
using Block = std::vector<std::size_t>;

struct Stage {
    std::vector<Block> initial_blocks;
    std::vector<ScheduledWalk> walks;
};

struct ScheduleCost {
    std::size_t walk_count = 0;
    std::size_t cp_gate_count = 0;
    std::size_t ancilla_count = 0;
    std::size_t block_bond_count = 0;
    /// cp_gate_count + block_bond_count.
    std::size_t entangling_steps = 0;
    /// Entangling steps a pairwise-comparison construction would need
    /// (wheel only: two per spoke).
    std::optional<std::size_t> comparison_entangling_steps;
};

struct OperationSchedule {
    std::string variant;
    std::size_t n_vertices = 0;
    std::vector<Stage> stages;
    ScheduleCost cost;

    std::vector<const ScheduledWalk *> all_walks() const;
};

struct CompileOptions {
    /// Wheel only: start from single photons. The rim-closing bond is then
    /// made by a two-photon removal walk instead of a prebuilt block.
    bool single_photon_inputs = false;
};

/// Edge-disjoint trails covering every edge, as few as possible per
/// connected component. Odd vertices are paired in index order with virtual
/// edges, an Eulerian circuit is taken (lowest neighbor first) and cut at
/// the virtual edges.
std::vector<Walk> trail_cover(std::size_t n_vertices, const std::vector<Edge> &edges);

/// max(1, odd/2) summed over components that have edges.
std::size_t trail_cover_lower_bound(const GraphSpec &spec);

OperationSchedule compile_schedule(const GraphSpec &spec, const CompileOptions &options = {});

/// Two passes of parity-check walks over a grid. Pass one snakes along the
/// rows and pass two along the columns; both visit every vertex once. Bonds
/// the two snakes share would cancel, so they are prebuilt as linear blocks.
/// Needs rows, cols >= 2.
OperationSchedule grid_two_pass_staging(std::size_t rows, std::size_t cols);

/// Multiplicity of each vertex pair over blocks, walk steps and hub spokes.
/// Entry (a, b) with a < b.
std::vector<std::pair<Edge, std::size_t>> edge_multiplicities(const OperationSchedule &schedule);

/// Pairs of odd multiplicity: the edge set the schedule produces.
std::vector<Edge> realized_edges(const OperationSchedule &schedule);

/// Vertices a walk touches an odd number of times.
std::vector<std::size_t> odd_visits(const Walk &walk);

/// Photons present before the first walk (vertices minus retained hubs).
std::size_t initial_photon_count(const OperationSchedule &schedule);

nlohmann::json schedule_to_json(const OperationSchedule &schedule);

}  // namespace qweaver

#endif
