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

#include "qweaver/cp_gate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

namespace qweaver {

namespace {

using OutcomeSource = std::variant<RunRng *, std::uint64_t>;

// Splits the stage into the branches whose first beam is vacuum and the rest.
std::pair<PhotonicState, PhotonicState> split_vacuum(const CpQubusStage &stage) {
    std::size_t slot = stage.state.register_slot(stage.first);
    double tol = stage.state.tolerances().merge;
    PhotonicState vacuum = stage.state;
    PhotonicState displaced = stage.state;
    std::erase_if(vacuum.mutable_branches(), [&](const Branch &b) { return std::abs(b.qubus[slot]) >= tol; });
    std::erase_if(displaced.mutable_branches(), [&](const Branch &b) { return std::abs(b.qubus[slot]) < tol; });
    return {std::move(vacuum), std::move(displaced)};
}

CpResult herald(CpQubusStage stage, std::size_t target, const CpParams &params, OutcomeSource source) {
    auto [vacuum, displaced] = split_vacuum(stage);
    Measured m = std::holds_alternative<RunRng *>(source)
                     ? measure_qubus_photon_number(std::move(stage.state), stage.first, params.mode,
                                                   *std::get<RunRng *>(source))
                     : measure_qubus_photon_number(std::move(stage.state), stage.first, params.mode,
                                                   std::get<std::uint64_t>(source));
    std::uint64_t n = m.record.photon_number;

    double w_vacuum = project_photon_number(vacuum, stage.first, params.mode, n).norm_squared();
    double w_displaced = project_photon_number(displaced, stage.first, params.mode, n).norm_squared();
    double w_total = w_vacuum + w_displaced;

    CpResult result;
    result.n_outcome = n;
    result.outcome_probability = m.record.probability;
    result.warning = m.record.warning;
    result.herald_infidelity = w_total > 0 ? (n == 0 ? w_displaced : w_vacuum) / w_total : 0.0;

    PhotonicState state = std::move(m.state);
    if (n > 0) {
        state = cp_correction(std::move(state), target, n);
        result.correction_applied = true;
    }
    // The correction touches only photons, so discarding the second beam before
    // or after it makes no observable difference.
    Discarded d = discard_register(std::move(state), stage.second);
    result.discarded_weight = d.lost_weight;
    result.state = std::move(d.state);
    return result;
}

void check_pair(const PhotonicState &state, std::size_t control, std::size_t target) {
    state.check_photon(control);
    state.check_photon(target);
    if (control == target) {
        throw std::invalid_argument("CP gate control and target must differ");
    }
}

}  // namespace

double CpParams::beta_squared() const {
    double s = std::sin(theta);
    return 2.0 * alpha * alpha * s * s;
}

Complex CpParams::beta() const { return {0.0, std::sqrt(2.0) * alpha * std::sin(theta)}; }

void CpParams::validate() const {
    if (!(alpha > 0)) {
        throw std::invalid_argument("CP gate needs alpha > 0");
    }
    if (!(beta_squared() > 0) || std::sqrt(beta_squared()) < 1e-6) {
        throw std::invalid_argument("CP gate needs |beta|^2 = 2 alpha^2 sin^2 theta > 0");
    }
}

CpQubusStage cp_couple(PhotonicState state, std::size_t control, std::size_t target, const CpParams &params) {
    check_pair(state, control, target);
    params.validate();
    CpQubusStage stage;
    stage.first = state.add_register(Complex{params.alpha, 0.0});
    stage.second = state.add_register(Complex{params.alpha, 0.0});
    state = xpm(std::move(state), {target, on(Path::P1), stage.first, params.theta});
    state = xpm(std::move(state), {target, on(Path::P2), stage.second, params.theta});
    state = xpm(std::move(state), {control, on(Polarization::H), stage.second, params.theta});
    state = xpm(std::move(state), {control, on(Polarization::V), stage.first, params.theta});
    stage.state = std::move(state);
    return stage;
}

CpQubusStage cp_interfere(CpQubusStage stage, const CpParams &params) {
    stage.state = qubus_phase(std::move(stage.state), stage.first, -params.theta);
    stage.state = qubus_phase(std::move(stage.state), stage.second, -params.theta);
    stage.state = qubus_bs(std::move(stage.state), stage.first, stage.second);
    return stage;
}

CpResult cp_herald(CpQubusStage stage, std::size_t target, const CpParams &params, RunRng &rng) {
    return herald(std::move(stage), target, params, &rng);
}

CpResult cp_herald(CpQubusStage stage, std::size_t target, const CpParams &params, std::uint64_t forced_n) {
    return herald(std::move(stage), target, params, forced_n);
}

PhotonicState cp_correction(PhotonicState state, std::size_t target, std::uint64_t n) {
    state = apply_local_unitary(std::move(state), target, gates::kPauliX, DegreeOfFreedom::path);
    if (n % 2 == 1) {
        state = apply_local_unitary(std::move(state), target, gates::kPauliZ, DegreeOfFreedom::path);
    }
    // e^{inπ/2} = i^n, taken exactly.
    static const Complex kPowersOfI[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    state.scale(kPowersOfI[n % 4]);
    return state;
}

CpResult cp_apply(PhotonicState state, std::size_t control, std::size_t target, const CpParams &params, RunRng &rng) {
    return cp_herald(cp_interfere(cp_couple(std::move(state), control, target, params), params), target, params, rng);
}

CpResult cp_apply(PhotonicState state, std::size_t control, std::size_t target, const CpParams &params,
                  std::uint64_t forced_n) {
    return cp_herald(cp_interfere(cp_couple(std::move(state), control, target, params), params), target, params,
                     forced_n);
}

PhotonicState merge_gate(PhotonicState state, std::size_t control, std::size_t target, double leak_tolerance) {
    check_pair(state, control, target);
    auto off_image = [&](const Branch &b) {
        bool control_v = b.labels & polarization_bit(control);
        bool target_p2 = b.labels & path_bit(target);
        return control_v != target_p2;
    };
    std::vector<Branch> &branches = state.mutable_branches();
    if (std::any_of(branches.begin(), branches.end(), off_image)) {
        // Physical heralds leave e^{-|β|²}-sized amplitude on the wrong path.
        PhotonicState leaked = state;
        std::erase_if(leaked.mutable_branches(), [&](const Branch &b) { return !off_image(b); });
        if (leaked.norm_squared() > leak_tolerance * state.norm_squared()) {
            throw std::invalid_argument("merge precondition violated");
        }
        std::erase_if(branches, off_image);
        state.renormalize();
    }
    for (auto &b : state.mutable_branches()) {
        b.labels &= ~path_bit(target);
    }
    state.canonicalize();
    return state;
}

}  // namespace qweaver
