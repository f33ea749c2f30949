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

#ifndef QWEAVER_CCZ_ENGINE_HPP
#define QWEAVER_CCZ_ENGINE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qweaver/cp_gate.hpp"

namespace qweaver {

/// Photons visited by an ancilla, in order. The same photon may appear more
/// than once but never twice in a row.
using Walk = std::vector<std::size_t>;

enum class AncillaDisposition {
    remove,  // interfered, detected, feed-forward σ_z
    retain,  // merged and rotated into a hub qubit
    check,   // merged and kept for a parity comparison
};

const char *to_string(AncillaDisposition d);

struct WalkStep {
    std::size_t photon = 0;
    std::size_t step_ordinal = 0;
};

enum class WalkEvent { beam_splitter, cp_gate, bit_flip };

using WalkObserver = std::function<void(const WalkStep &, WalkEvent, const PhotonicState &)>;

struct WalkOptions {
    /// Fault injection: this step (BS, CP and bit flip) is left out entirely.
    std::optional<std::size_t> skipped_step;
    WalkObserver observer;
};

struct WalkResult {
    PhotonicState state;
    std::vector<std::uint64_t> photon_numbers;  // one per executed CP gate
    std::size_t feed_forward_flips = 0;
    double max_herald_infidelity = 0;
    /// Photon whose polarization the ancilla's path now mirrors.
    std::optional<std::size_t> last_executed;
};

/// Appends a fresh ancilla photon |H⟩ on P1 and returns its index.
std::size_t add_ancilla(PhotonicState &state);

/// Runs the ancilla through (BS, CP with the visited photon as control, bit
/// flip on P2) for each step. Afterwards every consecutive pair of the walk
/// carries a CZ and the ancilla polarization holds the parity of the V's seen,
/// with its path mirroring the last photon.
///
/// An n > 0 herald on any step after the first also flips σ_z on the previous
/// photon: the beam splitter in front of that step leaves the ancilla's P2
/// component with sign (-1)^{x_prev}, which the path swap would otherwise
/// carry into the state.
WalkResult ccz_walk(PhotonicState state, std::span<const std::size_t> walk, std::size_t ancilla,
                    const CpParams &params, RunRng &rng, const WalkOptions &options = {});

/// Outcome index used by the correction table: polarization + 2 * path.
inline std::size_t outcome_index(ModeLabel m) {
    return static_cast<std::size_t>(m.polarization) + 2 * static_cast<std::size_t>(m.path);
}

/// σ_z pattern (per walk position) that restores the pure CZ chain after each
/// of the four ancilla detection outcomes.
struct RemovalCorrections {
    std::array<std::vector<bool>, 4> flips;
};

/// Finds the pattern for walks of length k by running the walk on
/// computational-basis probes and comparing each probe's sign with the CZ
/// chain. Expensive; use removal_corrections() for the cached table.
RemovalCorrections derive_removal_corrections(std::size_t k);
const RemovalCorrections &removal_corrections(std::size_t k);

struct RemovalResult {
    MeasurementRecord record;
    PhotonicState state;
    std::vector<std::size_t> flipped_photons;
};

/// One more BS, a Hadamard on each path, detection of the ancilla, then the
/// σ_z feed-forward for the observed outcome.
RemovalResult remove_ancilla(PhotonicState state, std::size_t ancilla, std::span<const std::size_t> walk,
                             RunRng &rng);
RemovalResult remove_ancilla(PhotonicState state, std::size_t ancilla, std::span<const std::size_t> walk,
                             ModeLabel forced);

/// Interferes and detects the ancilla without any feed-forward.
Measured detect_ancilla(PhotonicState state, std::size_t ancilla, ModeLabel forced);

/// Merges the ancilla's paths (control = the photon its path mirrors) and puts
/// a Hadamard on it, making it a hub bonded to every photon the walk visited
/// an odd number of times.
PhotonicState retain_ancilla(PhotonicState state, std::size_t ancilla, std::size_t control);

}  // namespace qweaver

#endif
