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

#include "qweaver/optical_elements.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qweaver {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Outcomes below this are treated as impossible when forced.
constexpr double kImpossible = 1e-300;

double max_mean_photon_number(const PhotonicState &state, std::size_t slot) {
    double m = 0;
    for (const auto &b : state.branches()) {
        m = std::max(m, std::norm(b.qubus[slot]));
    }
    return m;
}

Measured finish_photon_measurement(PhotonicState state, std::size_t photon, ModeLabel outcome, bool include_path) {
    std::uint64_t mask = polarization_bit(photon) | (include_path ? path_bit(photon) : 0);
    Branch probe;
    probe.set_label(photon, outcome);
    std::uint64_t want = probe.labels & mask;
    std::erase_if(state.mutable_branches(), [&](const Branch &b) { return (b.labels & mask) != want; });
    double p = state.norm_squared();
    if (!(p > kImpossible)) {
        throw std::invalid_argument("photon outcome " + to_string(outcome) + " has zero probability");
    }
    state.remove_photon(photon);
    state.renormalize();
    MeasurementRecord rec;
    rec.kind = MeasurementKind::polarization_path;
    rec.mode = outcome;
    rec.probability = p;
    return {rec, std::move(state)};
}

void check_path_resolved(const PhotonicState &state, std::size_t photon) {
    auto branches = state.branches();
    if (branches.empty()) {
        return;
    }
    bool first = branches.front().labels & path_bit(photon);
    for (const auto &b : branches) {
        if (static_cast<bool>(b.labels & path_bit(photon)) != first) {
            throw std::invalid_argument("photon " + std::to_string(photon) +
                                        " occupies both paths; its path must be measured too");
        }
    }
}

}  // namespace

bool ModePredicate::matches(const Branch &branch, std::size_t photon) const {
    std::uint64_t bit = dof == DegreeOfFreedom::polarization ? polarization_bit(photon) : path_bit(photon);
    return static_cast<std::uint8_t>((branch.labels & bit) ? 1 : 0) == value;
}

PhotonicState beam_splitter(PhotonicState state, std::size_t photon) {
    static const Matrix2 kBeamSplitter{{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}};
    return apply_local_unitary(std::move(state), photon, kBeamSplitter, DegreeOfFreedom::path);
}

PhotonicState bit_flip_on_path2(PhotonicState state, std::size_t photon) {
    state.check_photon(photon);
    for (auto &b : state.mutable_branches()) {
        if (b.labels & path_bit(photon)) {
            b.labels ^= polarization_bit(photon);
        }
    }
    state.canonicalize();
    return state;
}

PhotonicState xpm(PhotonicState state, const XpmCoupling &coupling) {
    state.check_photon(coupling.photon);
    std::size_t slot = state.register_slot(coupling.register_id);
    Complex phase = std::polar(1.0, coupling.theta);
    for (auto &b : state.mutable_branches()) {
        if (coupling.trigger.matches(b, coupling.photon)) {
            b.qubus[slot] *= phase;
        }
    }
    return state;
}

PhotonicState qubus_phase(PhotonicState state, RegisterId id, double phi) {
    std::size_t slot = state.register_slot(id);
    Complex phase = std::polar(1.0, phi);
    for (auto &b : state.mutable_branches()) {
        b.qubus[slot] *= phase;
    }
    return state;
}

PhotonicState qubus_bs(PhotonicState state, RegisterId a, RegisterId b) {
    if (a == b) {
        throw std::invalid_argument("qubus beam splitter needs two distinct registers");
    }
    std::size_t sa = state.register_slot(a);
    std::size_t sb = state.register_slot(b);
    for (auto &br : state.mutable_branches()) {
        Complex ga = br.qubus[sa];
        Complex gb = br.qubus[sb];
        br.qubus[sa] = (ga - gb) * kInvSqrt2;
        br.qubus[sb] = (ga + gb) * kInvSqrt2;
    }
    return state;
}

std::uint64_t photon_number_cutoff(double m) {
    return static_cast<std::uint64_t>(std::ceil(m + 8.0 * std::sqrt(m))) + 2;
}

Complex fock_projection(Complex gamma, std::uint64_t n, QubusModel model, double vacuum_tolerance) {
    double mag2 = std::norm(gamma);
    if (std::sqrt(mag2) < vacuum_tolerance) {
        return n == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    }
    if (model == QubusModel::ideal && n == 0) {
        return {0.0, 0.0};
    }
    double nd = static_cast<double>(n);
    double log_mag = -0.5 * mag2 + nd * 0.5 * std::log(mag2) - 0.5 * std::lgamma(nd + 1.0);
    if (model == QubusModel::ideal) {
        log_mag -= 0.5 * std::log(-std::expm1(-mag2));
    }
    return std::polar(std::exp(log_mag), nd * std::arg(gamma));
}

PhotonicState project_photon_number(const PhotonicState &state, RegisterId id, QubusModel model, std::uint64_t n) {
    std::size_t slot = state.register_slot(id);
    PhotonicState out = state;
    double vac = state.tolerances().merge;
    for (auto &b : out.mutable_branches()) {
        b.amplitude *= fock_projection(b.qubus[slot], n, model, vac);
    }
    out.remove_register(id);
    return out;
}

PhotonNumberDistribution photon_number_distribution(const PhotonicState &state, RegisterId id, QubusModel model) {
    std::size_t slot = state.register_slot(id);
    std::uint64_t n_max = photon_number_cutoff(max_mean_photon_number(state, slot));
    PhotonNumberDistribution dist;
    double total = 0;

    // The measured register usually takes only a handful of distinct values.
    // Grouping branches by that value, p(n) = Σ_gh f_n(γ_g)* f_n(γ_h) G_gh with
    // G the Gram matrix of the groups over everything else.
    std::map<std::pair<double, double>, std::size_t> group_of;
    std::vector<Complex> gammas;
    std::vector<std::size_t> group(state.branches().size());
    for (std::size_t i = 0; i < state.branches().size(); i++) {
        Complex g = state.branches()[i].qubus[slot];
        auto [it, fresh] = group_of.try_emplace({g.real(), g.imag()}, gammas.size());
        if (fresh) gammas.push_back(g);
        group[i] = it->second;
    }
    if (gammas.size() > 16) {
        for (std::uint64_t n = 0; n <= n_max; n++) {
            double p = project_photon_number(state, id, model, n).norm_squared();
            dist.probabilities.push_back(p);
            total += p;
        }
    } else {
        const std::size_t k = gammas.size();
        std::vector<Complex> gram(k * k);
        auto branches = state.branches();
        const std::size_t n_registers = state.registers().size();
        for (std::size_t begin = 0; begin < branches.size();) {
            std::size_t end = begin + 1;
            while (end < branches.size() && branches[end].labels == branches[begin].labels) end++;
            for (std::size_t i = begin; i < end; i++) {
                for (std::size_t j = i; j < end; j++) {
                    Complex overlap = std::conj(branches[i].amplitude) * branches[j].amplitude;
                    for (std::size_t r = 0; r < n_registers; r++) {
                        if (r != slot) overlap *= coherent_overlap(branches[i].qubus[r], branches[j].qubus[r]);
                    }
                    gram[group[i] * k + group[j]] += overlap;
                    if (j != i) gram[group[j] * k + group[i]] += std::conj(overlap);
                }
            }
            begin = end;
        }
        double vac = state.tolerances().merge;
        std::vector<Complex> f(k);
        for (std::uint64_t n = 0; n <= n_max; n++) {
            for (std::size_t g = 0; g < k; g++) f[g] = fock_projection(gammas[g], n, model, vac);
            Complex p = 0;
            for (std::size_t g = 0; g < k; g++) {
                for (std::size_t h = 0; h < k; h++) p += std::conj(f[g]) * f[h] * gram[g * k + h];
            }
            dist.probabilities.push_back(std::max(0.0, p.real()));
            total += dist.probabilities.back();
        }
    }
    dist.unaccounted = std::max(0.0, state.norm_squared() - total);
    if (dist.unaccounted > 1e-9) {
        dist.warning = "photon-number cutoff " + std::to_string(n_max) + " leaves " +
                       std::to_string(dist.unaccounted) + " probability unaccounted";
    }
    return dist;
}

Measured measure_qubus_photon_number(PhotonicState state, RegisterId id, QubusModel model, std::uint64_t forced_n) {
    PhotonicState projected = project_photon_number(state, id, model, forced_n);
    double p = projected.norm_squared();
    if (!(p > kImpossible)) {
        throw std::invalid_argument("photon number " + std::to_string(forced_n) + " has zero probability");
    }
    projected.renormalize();
    MeasurementRecord rec;
    rec.kind = MeasurementKind::qubus_photon_number;
    rec.photon_number = forced_n;
    rec.probability = p;
    return {rec, std::move(projected)};
}

Measured measure_qubus_photon_number(PhotonicState state, RegisterId id, QubusModel model, RunRng &rng) {
    PhotonNumberDistribution dist = photon_number_distribution(state, id, model);
    double u = rng.uniform();
    double acc = 0;
    std::uint64_t chosen = dist.probabilities.size();
    std::uint64_t last_possible = 0;
    for (std::uint64_t n = 0; n < dist.probabilities.size(); n++) {
        if (dist.probabilities[n] > kImpossible) {
            last_possible = n;
        }
        acc += dist.probabilities[n];
        if (u < acc && chosen == dist.probabilities.size()) {
            chosen = n;
        }
    }
    std::string warning = dist.warning;
    if (chosen == dist.probabilities.size()) {
        // u fell into the mass beyond the cutoff (or rounding at the top end).
        chosen = last_possible;
        if (warning.empty() && dist.unaccounted > 1e-9) {
            warning = "sample landed beyond the photon-number cutoff";
        }
    }
    Measured out = measure_qubus_photon_number(std::move(state), id, model, chosen);
    out.record.warning = warning;
    return out;
}

Discarded discard_register(PhotonicState state, RegisterId id) {
    std::size_t slot = state.register_slot(id);
    auto branches = state.branches();
    if (branches.empty()) {
        state.remove_register(id);
        return {std::move(state), 0.0};
    }
    double tol = state.tolerances().merge;
    const Branch *heaviest = &branches.front();
    bool uniform = true;
    for (const auto &b : branches) {
        if (std::abs(b.qubus[slot] - branches.front().qubus[slot]) >= tol) {
            uniform = false;
        }
        if (std::norm(b.amplitude) > std::norm(heaviest->amplitude)) {
            heaviest = &b;
        }
    }
    if (uniform) {
        state.remove_register(id);
        return {std::move(state), 0.0};
    }
    Complex reference = heaviest->qubus[slot];
    double before = state.norm_squared();
    for (auto &b : state.mutable_branches()) {
        b.amplitude *= coherent_overlap(reference, b.qubus[slot]);
    }
    state.remove_register(id);
    double after = state.norm_squared();
    state.renormalize();
    return {std::move(state), std::max(0.0, 1.0 - after / before)};
}

std::vector<std::pair<ModeLabel, double>> photon_outcome_distribution(const PhotonicState &state, std::size_t photon,
                                                                      MeasurementBasis basis, bool include_path) {
    state.check_photon(photon);
    if (!include_path) {
        check_path_resolved(state, photon);
    }
    PhotonicState rotated = basis == MeasurementBasis::diag ? apply_local_unitary(state, photon, gates::kHadamard)
                                                            : state;
    std::vector<std::pair<ModeLabel, double>> out;
    for (Path path : {Path::P1, Path::P2}) {
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            ModeLabel label{pol, path};
            std::uint64_t mask = polarization_bit(photon) | (include_path ? path_bit(photon) : 0);
            Branch probe;
            probe.set_label(photon, label);
            PhotonicState part = rotated;
            std::erase_if(part.mutable_branches(),
                          [&](const Branch &b) { return (b.labels & mask) != (probe.labels & mask); });
            double p = part.norm_squared();
            if (p > kImpossible) {
                out.emplace_back(label, p);
            }
        }
        if (!include_path) {
            break;
        }
    }
    return out;
}

Measured measure_photon(PhotonicState state, std::size_t photon, MeasurementBasis basis, bool include_path,
                        ModeLabel forced) {
    state.check_photon(photon);
    if (!include_path) {
        check_path_resolved(state, photon);
        forced.path = Path::P1;
    }
    if (basis == MeasurementBasis::diag) {
        state = apply_local_unitary(std::move(state), photon, gates::kHadamard);
    }
    return finish_photon_measurement(std::move(state), photon, forced, include_path);
}

Measured measure_photon(PhotonicState state, std::size_t photon, MeasurementBasis basis, bool include_path,
                        RunRng &rng) {
    auto outcomes = photon_outcome_distribution(state, photon, basis, include_path);
    double u = rng.uniform();
    double acc = 0;
    ModeLabel chosen = outcomes.back().first;
    for (const auto &[label, p] : outcomes) {
        acc += p;
        if (u < acc) {
            chosen = label;
            break;
        }
    }
    return measure_photon(std::move(state), photon, basis, include_path, chosen);
}

}  // namespace qweaver
