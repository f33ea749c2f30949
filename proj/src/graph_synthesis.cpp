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

#include "qweaver/graph_synthesis.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace qweaver {

namespace {

constexpr LocalClifford kAllOps[] = {LocalClifford::I, LocalClifford::H, LocalClifford::Z, LocalClifford::X,
                                     LocalClifford::S};

const Matrix2 &matrix_of(LocalClifford op) {
    switch (op) {
        case LocalClifford::H:
            return gates::kHadamard;
        case LocalClifford::Z:
            return gates::kPauliZ;
        case LocalClifford::X:
            return gates::kPauliX;
        case LocalClifford::S:
            return gates::kPhaseS;
        case LocalClifford::I:
            break;
    }
    return gates::kIdentity;
}

std::uint64_t all_path_bits(std::size_t photons) {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < photons; k++) {
        mask |= path_bit(k);
    }
    return mask;
}

}  // namespace

PhotonicState prepare_blocks(std::size_t n_photons, const std::vector<Block> &blocks) {
    std::vector<bool> seen(n_photons, false);
    for (const Block &b : blocks) {
        for (std::size_t v : b) {
            if (v >= n_photons) {
                throw std::invalid_argument("block vertex " + std::to_string(v) + " has no photon");
            }
            if (seen[v]) {
                throw std::invalid_argument("vertex " + std::to_string(v) + " appears in two blocks");
            }
            seen[v] = true;
        }
    }
    std::vector<ModeLabel> labels(n_photons);
    PhotonicState state = new_product_state(labels);
    for (std::size_t k = 0; k < n_photons; k++) {
        state = apply_local_unitary(std::move(state), k, gates::kHadamard);
    }
    for (const Block &b : blocks) {
        for (std::size_t i = 0; i + 1 < b.size(); i++) {
            state = apply_cz_oracle(std::move(state), b[i], b[i + 1]);
        }
    }
    return state;
}

PhotonicState build_initial_blocks(std::string_view kind) {
    if (kind == "plus") {
        return prepare_blocks(1, {{0}});
    }
    if (kind == "line2") {
        return prepare_blocks(2, {{0, 1}});
    }
    if (kind == "line3") {
        return prepare_blocks(3, {{0, 1, 2}});
    }
    throw std::invalid_argument("unknown block kind \"" + std::string(kind) + "\"");
}

PhotonicState graph_state_oracle(const GraphSpec &spec) {
    PhotonicState state = prepare_blocks(spec.n_vertices, {});
    for (auto [a, b] : spec.edges) {
        state = apply_cz_oracle(std::move(state), a, b);
    }
    return state;
}

ExecutionResult execute_schedule(const OperationSchedule &schedule, const CpParams &params, RunRng &rng) {
    if (schedule.stages.empty()) {
        throw std::invalid_argument("schedule has no stages");
    }
    for (std::size_t s = 1; s < schedule.stages.size(); s++) {
        if (!schedule.stages[s].initial_blocks.empty()) {
            throw std::invalid_argument("only the first stage may declare initial blocks");
        }
    }
    if (schedule.n_vertices > kMaxExecutableVertices) {
        throw std::length_error("graph with " + std::to_string(schedule.n_vertices) +
                                " vertices is too large to simulate (limit " +
                                std::to_string(kMaxExecutableVertices) + ")");
    }
    ExecutionResult result;
    result.state = prepare_blocks(initial_photon_count(schedule), schedule.stages.front().initial_blocks);

    for (const ScheduledWalk *w : schedule.all_walks()) {
        if (w->disposition == AncillaDisposition::check) {
            throw std::invalid_argument("check walks need the two-pass comparison, not execute_schedule");
        }
        if (w->disposition == AncillaDisposition::retain && w->hub_vertex != result.state.photon_count()) {
            throw std::invalid_argument("retained ancilla does not land on its hub vertex");
        }
        std::size_t ancilla = add_ancilla(result.state);
        WalkResult walked = ccz_walk(std::move(result.state), w->photons, ancilla, params, rng);

        WalkLog log;
        log.photons = w->photons;
        log.disposition = w->disposition;
        log.photon_numbers = walked.photon_numbers;
        log.feed_forward_flips = walked.feed_forward_flips;
        log.max_herald_infidelity = walked.max_herald_infidelity;
        if (w->disposition == AncillaDisposition::remove) {
            RemovalResult removed = remove_ancilla(std::move(walked.state), ancilla, w->photons, rng);
            result.state = std::move(removed.state);
            log.detection = removed.record.mode;
            log.corrected_photons = std::move(removed.flipped_photons);
        } else {
            result.state = retain_ancilla(std::move(walked.state), ancilla, *walked.last_executed);
        }
        result.walks.push_back(std::move(log));
    }
    return result;
}

std::vector<double> stabilizer_expectations(const PhotonicState &state, const GraphSpec &spec) {
    if (state.photon_count() != spec.n_vertices) {
        throw std::invalid_argument("state has " + std::to_string(state.photon_count()) + " photons, graph has " +
                                    std::to_string(spec.n_vertices) + " vertices");
    }
    if (!state.registers().empty()) {
        throw std::invalid_argument("live qubus register");
    }
    const std::uint64_t paths = all_path_bits(spec.n_vertices);
    std::unordered_map<std::uint64_t, Complex> psi;
    double norm = 0;
    for (const Branch &b : state.branches()) {
        if (b.labels & paths) {
            throw std::invalid_argument("unmerged paths");
        }
        psi[b.labels] += b.amplitude;
    }
    for (const auto &[x, a] : psi) {
        norm += std::norm(a);
    }
    auto adj = spec.adjacency();
    std::vector<double> out;
    for (std::size_t v = 0; v < spec.n_vertices; v++) {
        std::uint64_t z_mask = 0;
        for (std::size_t u : adj[v]) {
            z_mask |= polarization_bit(u);
        }
        Complex sum = 0;
        for (const auto &[x, a] : psi) {
            auto it = psi.find(x ^ polarization_bit(v));
            if (it == psi.end()) {
                continue;
            }
            double sign = std::popcount(x & z_mask) % 2 ? -1.0 : 1.0;
            sum += std::conj(it->second) * sign * a;
        }
        out.push_back(norm > 0 ? sum.real() / norm : 0.0);
    }
    return out;
}

const char *to_string(LocalClifford op) {
    switch (op) {
        case LocalClifford::I:
            return "I";
        case LocalClifford::H:
            return "H";
        case LocalClifford::Z:
            return "Z";
        case LocalClifford::X:
            return "X";
        case LocalClifford::S:
            return "S";
    }
    return "?";
}

PhotonicState apply_local_frame(PhotonicState state, const std::vector<LocalClifford> &ops) {
    for (std::size_t k = 0; k < ops.size(); k++) {
        if (ops[k] != LocalClifford::I) {
            state = apply_local_unitary(std::move(state), k, matrix_of(ops[k]));
        }
    }
    return state;
}

LocalFrame find_local_frame(const PhotonicState &state, const PhotonicState &target, double tolerance) {
    const std::size_t n = state.photon_count();
    LocalFrame frame;
    frame.ops.assign(n, LocalClifford::I);
    frame.fidelity_before = fidelity(state, target);
    frame.fidelity_after = frame.fidelity_before;
    if (frame.fidelity_before >= 1.0 - tolerance) {
        return frame;
    }
    auto score = [&](const std::vector<LocalClifford> &ops) { return fidelity(apply_local_frame(state, ops), target); };

    if (n <= 6) {
        frame.exhaustive = true;
        std::vector<LocalClifford> ops(n, LocalClifford::I);
        std::vector<std::size_t> digits(n, 0);
        while (true) {
            std::size_t k = 0;
            while (k < n && ++digits[k] == 5) {
                digits[k++] = 0;
            }
            if (k == n) {
                break;
            }
            for (std::size_t i = 0; i < n; i++) {
                ops[i] = kAllOps[digits[i]];
            }
            double f = score(ops);
            if (f > frame.fidelity_after + 1e-15) {
                frame.fidelity_after = f;
                frame.ops = ops;
                if (f >= 1.0 - tolerance) {
                    break;
                }
            }
        }
        return frame;
    }

    for (int sweep = 0; sweep < 4 && frame.fidelity_after < 1.0 - tolerance; sweep++) {
        bool improved = false;
        for (std::size_t k = 0; k < n; k++) {
            std::vector<LocalClifford> ops = frame.ops;
            for (LocalClifford op : kAllOps) {
                ops[k] = op;
                double f = score(ops);
                if (f > frame.fidelity_after + 1e-15) {
                    frame.fidelity_after = f;
                    frame.ops = ops;
                    improved = true;
                }
            }
        }
        if (!improved) {
            break;
        }
    }
    return frame;
}

}  // namespace qweaver
