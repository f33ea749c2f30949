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

#include "qweaver/ccz_engine.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace qweaver {

namespace {

void notify(const WalkOptions &options, const WalkStep &step, WalkEvent event, const PhotonicState &state) {
    if (options.observer) {
        options.observer(step, event, state);
    }
}

void validate_walk(const PhotonicState &state, std::span<const std::size_t> walk, std::size_t ancilla) {
    state.check_photon(ancilla);
    if (walk.size() < 2) {
        throw std::invalid_argument("a walk needs at least two photons");
    }
    for (std::size_t i = 0; i < walk.size(); i++) {
        state.check_photon(walk[i]);
        if (walk[i] == ancilla) {
            throw std::invalid_argument("the ancilla cannot be part of its own walk");
        }
        if (i > 0 && walk[i] == walk[i - 1]) {
            throw std::invalid_argument("walk repeats photon " + std::to_string(walk[i]) + " on adjacent steps");
        }
    }
}

RemovalResult apply_removal_corrections(Measured detected, std::span<const std::size_t> walk) {
    const RemovalCorrections &table = removal_corrections(walk.size());
    const std::vector<bool> &flips = table.flips[outcome_index(detected.record.mode)];
    RemovalResult out{detected.record, std::move(detected.state), {}};
    for (std::size_t i = 0; i < walk.size(); i++) {
        if (flips[i]) {
            out.state = apply_local_unitary(std::move(out.state), walk[i], gates::kPauliZ);
            out.flipped_photons.push_back(walk[i]);
        }
    }
    return out;
}

PhotonicState interfere(PhotonicState state, std::size_t ancilla) {
    state = beam_splitter(std::move(state), ancilla);
    state = apply_local_unitary(std::move(state), ancilla, gates::kHadamard);
    return state;
}

}  // namespace

const char *to_string(AncillaDisposition d) {
    switch (d) {
        case AncillaDisposition::remove:
            return "remove";
        case AncillaDisposition::retain:
            return "retain";
        case AncillaDisposition::check:
            return "check";
    }
    return "?";
}

std::size_t add_ancilla(PhotonicState &state) { return state.add_photon(ModeLabel{Polarization::H, Path::P1}); }

WalkResult ccz_walk(PhotonicState state, std::span<const std::size_t> walk, std::size_t ancilla,
                    const CpParams &params, RunRng &rng, const WalkOptions &options) {
    validate_walk(state, walk, ancilla);
    if (options.skipped_step && *options.skipped_step >= walk.size()) {
        throw std::invalid_argument("fault references step " + std::to_string(*options.skipped_step) +
                                    " of a walk with " + std::to_string(walk.size()) + " steps");
    }
    for (const auto &b : state.branches()) {
        if (b.label(ancilla) != ModeLabel{Polarization::H, Path::P1}) {
            throw std::invalid_argument("ancilla must start as |H> on path 1");
        }
    }

    WalkResult result;
    for (std::size_t i = 0; i < walk.size(); i++) {
        if (options.skipped_step == i) {
            continue;
        }
        WalkStep step{walk[i], i};
        state = beam_splitter(std::move(state), ancilla);
        notify(options, step, WalkEvent::beam_splitter, state);

        CpResult cp = cp_apply(std::move(state), walk[i], ancilla, params, rng);
        state = std::move(cp.state);
        result.photon_numbers.push_back(cp.n_outcome);
        result.max_herald_infidelity = std::max(result.max_herald_infidelity, cp.herald_infidelity);
        if (cp.n_outcome > 0 && result.last_executed) {
            state = apply_local_unitary(std::move(state), *result.last_executed, gates::kPauliZ);
            result.feed_forward_flips++;
        }
        notify(options, step, WalkEvent::cp_gate, state);

        state = bit_flip_on_path2(std::move(state), ancilla);
        notify(options, step, WalkEvent::bit_flip, state);
        result.last_executed = walk[i];
    }
    result.state = std::move(state);
    return result;
}

RemovalCorrections derive_removal_corrections(std::size_t k) {
    if (k < 2) {
        throw std::invalid_argument("a walk needs at least two photons");
    }
    Walk walk(k);
    for (std::size_t i = 0; i < k; i++) {
        walk[i] = i;
    }
    CpParams params;
    RunRng rng(k);

    // Amplitude left on the probe's own label after walking, detecting `outcome`.
    auto probe = [&](std::size_t v_photon, ModeLabel outcome) {
        std::vector<ModeLabel> labels(k);
        if (v_photon < k) {
            labels[v_photon].polarization = Polarization::V;
        }
        PhotonicState state = new_product_state(labels);
        std::size_t ancilla = add_ancilla(state);
        WalkResult walked = ccz_walk(std::move(state), walk, ancilla, params, rng);
        Measured detected = detect_ancilla(std::move(walked.state), ancilla, outcome);
        return detected.state.amplitude_of(pack_labels(labels));
    };

    RemovalCorrections table;
    for (Path path : {Path::P1, Path::P2}) {
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            ModeLabel outcome{pol, path};
            Complex reference = probe(k, outcome);
            std::vector<bool> &flips = table.flips[outcome_index(outcome)];
            flips.assign(k, false);
            for (std::size_t i = 0; i < k; i++) {
                // A single V never picks up a CZ sign, so any sign here is the
                // detection's doing.
                Complex ratio = probe(i, outcome) / reference;
                if (std::abs(std::abs(ratio) - 1.0) > 1e-9 || std::abs(ratio.imag()) > 1e-9) {
                    throw std::logic_error("ancilla removal correction is not a sigma_z pattern");
                }
                flips[i] = ratio.real() < 0;
            }
        }
    }
    return table;
}

const RemovalCorrections &removal_corrections(std::size_t k) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<RemovalCorrections>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto &slot = cache[k];
    if (!slot) {
        slot = std::make_unique<RemovalCorrections>(derive_removal_corrections(k));
    }
    return *slot;
}

Measured detect_ancilla(PhotonicState state, std::size_t ancilla, ModeLabel forced) {
    return measure_photon(interfere(std::move(state), ancilla), ancilla, MeasurementBasis::HV, true, forced);
}

RemovalResult remove_ancilla(PhotonicState state, std::size_t ancilla, std::span<const std::size_t> walk,
                             RunRng &rng) {
    Measured detected = measure_photon(interfere(std::move(state), ancilla), ancilla, MeasurementBasis::HV, true, rng);
    return apply_removal_corrections(std::move(detected), walk);
}

RemovalResult remove_ancilla(PhotonicState state, std::size_t ancilla, std::span<const std::size_t> walk,
                             ModeLabel forced) {
    Measured detected;
    try {
        detected = detect_ancilla(std::move(state), ancilla, forced);
    } catch (const std::invalid_argument &e) {
        throw std::logic_error(std::string("ancilla removal: ") + e.what());
    }
    return apply_removal_corrections(std::move(detected), walk);
}

PhotonicState retain_ancilla(PhotonicState state, std::size_t ancilla, std::size_t control) {
    state = merge_gate(std::move(state), control, ancilla);
    return apply_local_unitary(std::move(state), ancilla, gates::kHadamard);
}

}  // namespace qweaver
