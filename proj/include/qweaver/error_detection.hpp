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

#ifndef QWEAVER_ERROR_DETECTION_HPP
#define QWEAVER_ERROR_DETECTION_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qweaver/graph_synthesis.hpp"

namespace qweaver {

/// A missed entangling step: step `skipped_step` of check walk `walk_id`
/// (0 or 1) is left out entirely.
struct FaultSpec {
    std::size_t walk_id = 0;
    std::size_t skipped_step = 0;

    friend bool operator==(const FaultSpec &, const FaultSpec &) = default;
};

/// Parses "WALK:STEP".
FaultSpec parse_fault(const std::string &text);
std::string to_string(const FaultSpec &fault);

/// The last step of the second walk.
FaultSpec last_step_fault(const OperationSchedule &staging);

struct TwoPassResult {
    /// Graph photons 0..n-1, then the two merged check ancillas.
    PhotonicState state;
    std::size_t a1 = 0;
    std::size_t a2 = 0;
    std::array<Walk, 2> walks;
    /// Planned odd-visit sets; the parity each ancilla is meant to hold.
    std::array<std::vector<std::size_t>, 2> visit_sets;
};

/// Builds the staging's blocks and runs both check walks, each ancilla merged
/// onto one path with the last photon it actually visited as control.
TwoPassResult two_pass_walk(const OperationSchedule &staging, const CpParams &params,
                            const std::optional<FaultSpec> &fault, RunRng &rng);

struct ComparisonOutcome {
    bool coincidence = false;
    bool flagged_error = false;
    /// True for a |−⟩ result, (a1, a2). Only meaningful on coincidence.
    std::pair<bool, bool> x_basis_minus{false, false};
    /// Net σ_z applied per graph photon.
    std::vector<bool> corrections;
    double coincidence_probability = 0;
};

/// Weight of branches whose two ancilla polarizations differ, relative to
/// the whole state.
double detection_probability(const PhotonicState &state, std::size_t a1, std::size_t a2);

/// PBS comparison of the two ancillas. Equal polarizations send one photon
/// to each port (coincidence); unequal ones send both to the same port, which
/// ends the run with flagged_error and an empty state. On coincidence each
/// ancilla is read in the X basis, a2 first, and a |−⟩ result puts σ_z on
/// every photon in that ancilla's visit set. Both ancillas are removed.
std::pair<ComparisonOutcome, PhotonicState> compare_ancillas(const TwoPassResult &walked, RunRng &rng);

/// Same, with the coincidence decision and X outcomes fixed by the caller.
/// Throws if the forced branch has zero probability.
std::pair<ComparisonOutcome, PhotonicState> compare_ancillas(const TwoPassResult &walked, bool coincidence,
                                                             std::pair<bool, bool> x_minus);

/// |+⟩ per vertex, the staging's blocks, and oracle CZs along both walks:
/// the fault-free output on the graph photons.
PhotonicState two_pass_oracle(const OperationSchedule &staging);

struct MonteCarloOptions {
    /// Re-run the walks for every trial instead of reusing one pre-comparison
    /// state. In ideal mode the walks are outcome independent, so reuse is
    /// exact; in physical mode reuse keeps one herald realization.
    bool resimulate = false;
};

struct MonteCarloResult {
    double analytic_p = 0;
    double flag_rate = 0;
    double ci95 = 0;
    std::size_t trials = 0;
    std::size_t flags = 0;
    std::vector<bool> flag_sequence;
};

/// Trial t draws from RunRng(seed).split(t).
MonteCarloResult monte_carlo_detection(const OperationSchedule &staging, const CpParams &params,
                                       const std::optional<FaultSpec> &fault, std::size_t trials,
                                       std::uint64_t seed, const MonteCarloOptions &options = {});

}  // namespace qweaver

#endif
