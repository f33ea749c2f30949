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

#include "qweaver/error_detection.hpp"

#include <cmath>
#include <stdexcept>

namespace qweaver {

namespace {

std::array<const ScheduledWalk *, 2> check_walks(const OperationSchedule &staging) {
    auto walks = staging.all_walks();
    if (walks.size() != 2 || walks[0]->disposition != AncillaDisposition::check ||
        walks[1]->disposition != AncillaDisposition::check) {
        throw std::invalid_argument("two-pass protocol needs a staging with exactly two check walks");
    }
    return {walks[0], walks[1]};
}

bool same_polarization(const Branch &b, std::size_t a1, std::size_t a2) {
    return b.label(a1).polarization == b.label(a2).polarization;
}

void require_merged(const PhotonicState &state, std::size_t a1, std::size_t a2) {
    if (!state.registers().empty()) {
        throw std::invalid_argument("comparison needs a state without live qubus registers");
    }
    for (const Branch &b : state.branches()) {
        if (b.label(a1).path != Path::P1 || b.label(a2).path != Path::P1) {
            throw std::invalid_argument("unmerged ancilla paths");
        }
    }
}

struct ComparisonSource {
    RunRng *rng = nullptr;
    bool coincidence = false;
    std::pair<bool, bool> x_minus{false, false};
};

std::pair<ComparisonOutcome, PhotonicState> compare(const TwoPassResult &walked, const ComparisonSource &source) {
    const std::size_t a1 = walked.a1, a2 = walked.a2;
    require_merged(walked.state, a1, a2);
    if (a2 <= a1) {
        throw std::invalid_argument("second ancilla must sit above the first");
    }
    ComparisonOutcome outcome;
    double p_flag = detection_probability(walked.state, a1, a2);
    outcome.coincidence_probability = 1.0 - p_flag;
    outcome.coincidence = source.rng ? source.rng->uniform() >= p_flag : source.coincidence;
    outcome.flagged_error = !outcome.coincidence;
    double p_chosen = outcome.coincidence ? 1.0 - p_flag : p_flag;
    if (!(p_chosen > 0)) {
        throw std::invalid_argument("forced comparison outcome has zero probability");
    }
    if (outcome.flagged_error) {
        return {std::move(outcome), PhotonicState{}};
    }

    PhotonicState state = walked.state;
    std::erase_if(state.mutable_branches(), [&](const Branch &b) { return !same_polarization(b, a1, a2); });
    state.renormalize();

    auto read = [&](std::size_t ancilla, bool forced_minus) {
        Measured m = source.rng ? measure_photon(std::move(state), ancilla, MeasurementBasis::diag, false, *source.rng)
                                : measure_photon(std::move(state), ancilla, MeasurementBasis::diag, false,
                                                 ModeLabel{forced_minus ? Polarization::V : Polarization::H, Path::P1});
        state = std::move(m.state);
        return m.record.mode.polarization == Polarization::V;
    };
    outcome.x_basis_minus.second = read(a2, source.x_minus.second);
    outcome.x_basis_minus.first = read(a1, source.x_minus.first);

    outcome.corrections.assign(state.photon_count(), false);
    for (int w = 0; w < 2; w++) {
        if (w == 0 ? outcome.x_basis_minus.first : outcome.x_basis_minus.second) {
            for (std::size_t v : walked.visit_sets[w]) {
                outcome.corrections[v] = !outcome.corrections[v];
            }
        }
    }
    for (std::size_t v = 0; v < outcome.corrections.size(); v++) {
        if (outcome.corrections[v]) {
            state = apply_local_unitary(std::move(state), v, gates::kPauliZ);
        }
    }
    return {std::move(outcome), std::move(state)};
}

}  // namespace

FaultSpec parse_fault(const std::string &text) {
    auto colon = text.find(':');
    auto number = [&](const std::string &s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("fault must look like WALK:STEP, got \"" + text + "\"");
        }
        return static_cast<std::size_t>(std::stoull(s));
    };
    if (colon == std::string::npos) {
        number("");
    }
    return FaultSpec{number(text.substr(0, colon)), number(text.substr(colon + 1))};
}

std::string to_string(const FaultSpec &fault) {
    return std::to_string(fault.walk_id) + ":" + std::to_string(fault.skipped_step);
}

FaultSpec last_step_fault(const OperationSchedule &staging) {
    auto walks = check_walks(staging);
    return FaultSpec{1, walks[1]->photons.size() - 1};
}

TwoPassResult two_pass_walk(const OperationSchedule &staging, const CpParams &params,
                            const std::optional<FaultSpec> &fault, RunRng &rng) {
    auto walks = check_walks(staging);
    if (fault) {
        if (fault->walk_id > 1) {
            throw std::invalid_argument("fault references walk " + std::to_string(fault->walk_id) +
                                        " but the protocol has walks 0 and 1");
        }
        if (fault->skipped_step >= walks[fault->walk_id]->photons.size()) {
            throw std::invalid_argument("fault references step " + std::to_string(fault->skipped_step) +
                                        " of a walk with " +
                                        std::to_string(walks[fault->walk_id]->photons.size()) + " steps");
        }
    }
    if (staging.n_vertices > kMaxExecutableVertices) {
        throw std::length_error("grid with " + std::to_string(staging.n_vertices) +
                                " vertices is too large to simulate (limit " +
                                std::to_string(kMaxExecutableVertices) + ")");
    }
    TwoPassResult out;
    out.state = prepare_blocks(staging.n_vertices, staging.stages.front().initial_blocks);
    for (std::size_t w = 0; w < 2; w++) {
        out.walks[w] = walks[w]->photons;
        out.visit_sets[w] = odd_visits(out.walks[w]);
        std::size_t ancilla = add_ancilla(out.state);
        (w == 0 ? out.a1 : out.a2) = ancilla;
        WalkOptions options;
        if (fault && fault->walk_id == w) {
            options.skipped_step = fault->skipped_step;
        }
        WalkResult walked = ccz_walk(std::move(out.state), out.walks[w], ancilla, params, rng, options);
        out.state = merge_gate(std::move(walked.state), *walked.last_executed, ancilla);
    }
    return out;
}

double detection_probability(const PhotonicState &state, std::size_t a1, std::size_t a2) {
    state.check_photon(a1);
    state.check_photon(a2);
    PhotonicState mismatched = state;
    std::erase_if(mismatched.mutable_branches(), [&](const Branch &b) { return same_polarization(b, a1, a2); });
    double total = state.norm_squared();
    return total > 0 ? mismatched.norm_squared() / total : 0.0;
}

std::pair<ComparisonOutcome, PhotonicState> compare_ancillas(const TwoPassResult &walked, RunRng &rng) {
    return compare(walked, ComparisonSource{&rng, false, {}});
}

std::pair<ComparisonOutcome, PhotonicState> compare_ancillas(const TwoPassResult &walked, bool coincidence,
                                                             std::pair<bool, bool> x_minus) {
    return compare(walked, ComparisonSource{nullptr, coincidence, x_minus});
}

PhotonicState two_pass_oracle(const OperationSchedule &staging) {
    auto walks = check_walks(staging);
    PhotonicState state = prepare_blocks(staging.n_vertices, staging.stages.front().initial_blocks);
    for (const ScheduledWalk *w : walks) {
        for (std::size_t i = 0; i + 1 < w->photons.size(); i++) {
            state = apply_cz_oracle(std::move(state), w->photons[i], w->photons[i + 1]);
        }
    }
    return state;
}

MonteCarloResult monte_carlo_detection(const OperationSchedule &staging, const CpParams &params,
                                       const std::optional<FaultSpec> &fault, std::size_t trials,
                                       std::uint64_t seed, const MonteCarloOptions &options) {
    if (trials < 1) {
        throw std::invalid_argument("monte carlo needs at least one trial");
    }
    RunRng base(seed);
    RunRng walk_rng = base.split(~std::uint64_t{0});
    TwoPassResult reference = two_pass_walk(staging, params, fault, walk_rng);

    MonteCarloResult r;
    r.trials = trials;
    r.analytic_p = detection_probability(reference.state, reference.a1, reference.a2);
    r.flag_sequence.reserve(trials);
    for (std::size_t t = 0; t < trials; t++) {
        RunRng rng = base.split(t);
        bool flagged;
        if (options.resimulate) {
            TwoPassResult walked = two_pass_walk(staging, params, fault, rng);
            flagged = compare_ancillas(walked, rng).first.flagged_error;
        } else {
            // compare_ancillas decides coincidence from the trial's first draw
            // alone; the X readouts after it cannot change the flag.
            flagged = !(rng.uniform() >= r.analytic_p);
        }
        r.flag_sequence.push_back(flagged);
        r.flags += flagged ? 1 : 0;
    }
    r.flag_rate = static_cast<double>(r.flags) / static_cast<double>(trials);
    r.ci95 = 1.96 * std::sqrt(r.flag_rate * (1.0 - r.flag_rate) / static_cast<double>(trials));
    return r;
}

}  // namespace qweaver
