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

#ifndef QWEAVER_GRAPH_SYNTHESIS_HPP
#define QWEAVER_GRAPH_SYNTHESIS_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qweaver/schedule.hpp"

namespace qweaver {

/// "plus" (one |+⟩ photon), "line2" or "line3". Bonds are made with oracle
/// CZs; throws std::invalid_argument for anything else.
PhotonicState build_initial_blocks(std::string_view kind);

/// |+⟩ on photons 0..n_photons-1, then a CZ along every block chain.
PhotonicState prepare_blocks(std::size_t n_photons, const std::vector<Block> &blocks);

/// |+⟩ per vertex and a CZ per edge.
PhotonicState graph_state_oracle(const GraphSpec &spec);

/// Largest vertex count execute_schedule and the two-pass protocol accept.
/// A graph state on n vertices has 2^n branches, and each CP gate briefly
/// doubles that and attaches two qubus amplitudes to every branch.
inline constexpr std::size_t kMaxExecutableVertices = 20;

struct WalkLog {
    Walk photons;
    AncillaDisposition disposition = AncillaDisposition::remove;
    std::vector<std::uint64_t> photon_numbers;
    std::size_t feed_forward_flips = 0;
    std::optional<ModeLabel> detection;  // remove only
    std::vector<std::size_t> corrected_photons;
    double max_herald_infidelity = 0;
};

struct ExecutionResult {
    PhotonicState state;
    std::vector<WalkLog> walks;
};

/// Prepares the first stage's blocks and runs every walk in order. Throws
/// std::invalid_argument for check walks, which belong to the two-pass
/// protocol.
ExecutionResult execute_schedule(const OperationSchedule &schedule, const CpParams &params, RunRng &rng);

/// ⟨K_a⟩ = ⟨X_a ∏_{b~a} Z_b⟩ for every vertex. Throws
/// std::invalid_argument("unmerged paths") if any photon still has weight on
/// P2 or a qubus register is live.
std::vector<double> stabilizer_expectations(const PhotonicState &state, const GraphSpec &spec);

enum class LocalClifford { I, H, Z, X, S };

const char *to_string(LocalClifford op);

struct LocalFrame {
    std::vector<LocalClifford> ops;  // per photon, applied to the state
    double fidelity_before = 0;
    double fidelity_after = 0;
    bool exhaustive = false;
};

/// Searches single-photon gates from {I, H, Z, X, S} that bring `state`
/// closest to `target`. Identity is tried first; up to six photons every
/// combination is checked, beyond that a greedy per-photon sweep is used.
LocalFrame find_local_frame(const PhotonicState &state, const PhotonicState &target, double tolerance = 1e-9);

PhotonicState apply_local_frame(PhotonicState state, const std::vector<LocalClifford> &ops);

}  // namespace qweaver

#endif
