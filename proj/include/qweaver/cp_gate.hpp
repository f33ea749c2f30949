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

#ifndef QWEAVER_CP_GATE_HPP
#define QWEAVER_CP_GATE_HPP

#include <cstdint>
#include <string>

#include "qweaver/optical_elements.hpp"

namespace qweaver {

struct CpParams {
    double alpha = 500.0;
    double theta = 0.01;
    QubusModel mode = QubusModel::ideal;

    /// |β|² = 2α²sin²θ, the mean photon number of the displaced branches.
    double beta_squared() const;
    /// β = i√2·α·sinθ.
    Complex beta() const;
    void validate() const;
};

struct CpResult {
    PhotonicState state;
    std::uint64_t n_outcome = 0;
    double outcome_probability = 0;
    bool correction_applied = false;
    /// Post-herald weight of the branches the outcome should have excluded.
    double herald_infidelity = 0;
    /// Weight lost when the second qubus beam is thrown away.
    double discarded_weight = 0;
    std::string warning;
};

/// State between the stages of the gate, with its two qubus registers live.
struct CpQubusStage {
    PhotonicState state;
    RegisterId first = 0;
    RegisterId second = 0;
};

// The gate is exposed stage by stage so each intermediate ket can be checked.
//
//   couple:    both beams start in |α⟩; XPM couplings
//                target P1 -> first, target P2 -> second,
//                control H -> second, control V -> first.
//   interfere: phase -θ on both beams, then the 50:50 qubus beam splitter.
//   herald:    photon-number projection on the first beam, feed-forward on
//              n > 0, second beam discarded.
CpQubusStage cp_couple(PhotonicState state, std::size_t control, std::size_t target, const CpParams &params);
CpQubusStage cp_interfere(CpQubusStage stage, const CpParams &params);
CpResult cp_herald(CpQubusStage stage, std::size_t target, const CpParams &params, RunRng &rng);
CpResult cp_herald(CpQubusStage stage, std::size_t target, const CpParams &params, std::uint64_t forced_n);

/// Feed-forward for an n > 0 herald: swap the target's paths, phase π on P2
/// when n is odd, and remove the leftover global phase e^{-inπ/2}.
PhotonicState cp_correction(PhotonicState state, std::size_t target, std::uint64_t n);

/// Controlled-path gate: routes the target onto P1 when the control is H and
/// onto P2 when it is V.
CpResult cp_apply(PhotonicState state, std::size_t control, std::size_t target, const CpParams &params, RunRng &rng);
CpResult cp_apply(PhotonicState state, std::size_t control, std::size_t target, const CpParams &params,
                  std::uint64_t forced_n);

inline constexpr double kMergeLeakTolerance = 1e-9;

/// Inverse of the CP gate on its image: moves the target back to P1 without
/// touching anything else. Branches with the target on the path opposite to
/// the one its control selects are dropped if their share of the norm is at
/// most `leak_tolerance`; a larger share throws.
PhotonicState merge_gate(PhotonicState state, std::size_t control, std::size_t target,
                         double leak_tolerance = kMergeLeakTolerance);

}  // namespace qweaver

#endif
