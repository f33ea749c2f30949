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

#ifndef QWEAVER_OPTICAL_ELEMENTS_HPP
#define QWEAVER_OPTICAL_ELEMENTS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qweaver/photonic_state.hpp"
#include "qweaver/rng.hpp"

namespace qweaver {

/// How photon-number projections treat the qubus branches.
///
/// ideal: |0⟩ and |±β⟩ are taken as exactly orthogonal, so n = 0 heralds only
/// the vacuum branches and n > 0 only the displaced ones.
/// physical: exact Fock projections, including the e^{-|β|²} vacuum overlap.
enum class QubusModel { ideal, physical };

/// Which photon mode switches an XPM interaction on.
struct ModePredicate {
    DegreeOfFreedom dof = DegreeOfFreedom::polarization;
    std::uint8_t value = 0;

    bool matches(const Branch &branch, std::size_t photon) const;
};

inline ModePredicate on(Polarization p) { return {DegreeOfFreedom::polarization, static_cast<std::uint8_t>(p)}; }
inline ModePredicate on(Path p) { return {DegreeOfFreedom::path, static_cast<std::uint8_t>(p)}; }

struct XpmCoupling {
    std::size_t photon = 0;
    ModePredicate trigger;
    RegisterId register_id = 0;
    double theta = 0;
};

enum class MeasurementKind { qubus_photon_number, polarization_path };

struct MeasurementRecord {
    MeasurementKind kind = MeasurementKind::qubus_photon_number;
    std::uint64_t photon_number = 0;  // qubus_photon_number only
    ModeLabel mode{};                 // polarization_path only
    double probability = 0;
    std::string warning;
};

struct Measured {
    MeasurementRecord record;
    PhotonicState state;
};

/// Path beam splitter: P1 -> (P1 + P2)/√2, P2 -> (P1 - P2)/√2, on either
/// polarization.
PhotonicState beam_splitter(PhotonicState state, std::size_t photon);

/// Polarization X on the branches where the photon travels path P2.
PhotonicState bit_flip_on_path2(PhotonicState state, std::size_t photon);

/// γ *= e^{iθ} on every branch satisfying the trigger.
PhotonicState xpm(PhotonicState state, const XpmCoupling &coupling);

/// γ *= e^{iφ} on every branch.
PhotonicState qubus_phase(PhotonicState state, RegisterId id, double phi);

/// 50:50 qubus beam splitter: (γa, γb) -> ((γa - γb)/√2, (γa + γb)/√2).
PhotonicState qubus_bs(PhotonicState state, RegisterId a, RegisterId b);

/// ⌈m + 8√m⌉ + 2 for the largest mean photon number m on the register.
std::uint64_t photon_number_cutoff(double max_mean_photon_number);

/// ⟨n|γ⟩ under the given model, including the phase e^{in·arg γ}.
Complex fock_projection(Complex gamma, std::uint64_t n, QubusModel model, double vacuum_tolerance);

struct PhotonNumberDistribution {
    std::vector<double> probabilities;  // index n
    double unaccounted = 0;
    std::string warning;
};

/// Full outcome distribution of a photon-number measurement, enumerated up to
/// photon_number_cutoff().
PhotonNumberDistribution photon_number_distribution(const PhotonicState &state, RegisterId id, QubusModel model);

/// Unnormalized projection |n⟩⟨n| on the register; the register is removed.
PhotonicState project_photon_number(const PhotonicState &state, RegisterId id, QubusModel model, std::uint64_t n);

Measured measure_qubus_photon_number(PhotonicState state, RegisterId id, QubusModel model, RunRng &rng);
Measured measure_qubus_photon_number(PhotonicState state, RegisterId id, QubusModel model, std::uint64_t forced_n);

/// Drops a qubus register that will never be read again. When branches
/// disagree on its amplitude the register is projected onto the coherent
/// state of the heaviest branch; the weight lost that way is returned.
struct Discarded {
    PhotonicState state;
    double lost_weight = 0;
};
Discarded discard_register(PhotonicState state, RegisterId id);

enum class MeasurementBasis { HV, diag };

/// Outcomes with nonzero probability. Without include_path every branch must
/// agree on the photon's path.
std::vector<std::pair<ModeLabel, double>> photon_outcome_distribution(const PhotonicState &state, std::size_t photon,
                                                                      MeasurementBasis basis, bool include_path);

/// Projective detection of one photon, which is removed from the state.
/// In the diag basis outcome H means |+⟩ and V means |−⟩.
Measured measure_photon(PhotonicState state, std::size_t photon, MeasurementBasis basis, bool include_path,
                        RunRng &rng);
Measured measure_photon(PhotonicState state, std::size_t photon, MeasurementBasis basis, bool include_path,
                        ModeLabel forced);

}  // namespace qweaver

#endif
