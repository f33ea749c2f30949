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

#include "qweaver/photonic_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qweaver {

namespace {

bool same_qubus(const std::vector<Complex> &a, const std::vector<Complex> &b, double tol) {
    for (std::size_t k = 0; k < a.size(); k++) {
        if (std::abs(a[k].real() - b[k].real()) >= tol || std::abs(a[k].imag() - b[k].imag()) >= tol) {
            return false;
        }
    }
    return true;
}

// [begin, end) of the run of branches sharing labels with branches[begin].
std::size_t run_end(const std::vector<Branch> &branches, std::size_t begin) {
    std::size_t end = begin + 1;
    while (end < branches.size() && branches[end].labels == branches[begin].labels) {
        end++;
    }
    return end;
}

}  // namespace

std::string to_string(ModeLabel label) {
    std::string out = label.polarization == Polarization::H ? "H" : "V";
    out += label.path == Path::P1 ? "1" : "2";
    return out;
}

ModeLabel Branch::label(std::size_t photon) const {
    return ModeLabel{
        (labels & polarization_bit(photon)) ? Polarization::V : Polarization::H,
        (labels & path_bit(photon)) ? Path::P2 : Path::P1,
    };
}

void Branch::set_label(std::size_t photon, ModeLabel label) {
    labels &= ~(polarization_bit(photon) | path_bit(photon));
    if (label.polarization == Polarization::V) {
        labels |= polarization_bit(photon);
    }
    if (label.path == Path::P2) {
        labels |= path_bit(photon);
    }
}

bool PhotonicState::has_register(RegisterId id) const {
    return std::find(registers_.begin(), registers_.end(), id) != registers_.end();
}

std::size_t PhotonicState::register_slot(RegisterId id) const {
    auto it = std::find(registers_.begin(), registers_.end(), id);
    if (it == registers_.end()) {
        throw std::invalid_argument("qubus register " + std::to_string(id) + " is not live");
    }
    return static_cast<std::size_t>(it - registers_.begin());
}

void PhotonicState::check_photon(std::size_t photon) const {
    if (photon >= photon_count_) {
        throw std::out_of_range("photon index " + std::to_string(photon) + " out of range (" +
                                std::to_string(photon_count_) + " photons)");
    }
}

std::size_t PhotonicState::add_photon(ModeLabel label) {
    if (photon_count_ >= kMaxPhotons) {
        throw std::length_error("too many photons");
    }
    std::size_t index = photon_count_++;
    for (auto &b : branches_) {
        b.set_label(index, label);
    }
    return index;
}

void PhotonicState::remove_photon(std::size_t photon) {
    check_photon(photon);
    std::uint64_t low = polarization_bit(photon) - 1;
    for (auto &b : branches_) {
        std::uint64_t high = photon + 1 < 32 ? (b.labels >> (2 * (photon + 1))) << (2 * photon) : 0;
        b.labels = (b.labels & low) | high;
    }
    photon_count_--;
    canonicalize();
}

RegisterId PhotonicState::add_register(Complex gamma) {
    RegisterId id = next_register_++;
    registers_.push_back(id);
    for (auto &b : branches_) {
        b.qubus.push_back(gamma);
    }
    return id;
}

void PhotonicState::remove_register(RegisterId id) {
    std::size_t slot = register_slot(id);
    registers_.erase(registers_.begin() + static_cast<std::ptrdiff_t>(slot));
    for (auto &b : branches_) {
        b.qubus.erase(b.qubus.begin() + static_cast<std::ptrdiff_t>(slot));
    }
    canonicalize();
}

void PhotonicState::canonicalize() {
    std::stable_sort(branches_.begin(), branches_.end(),
                     [](const Branch &a, const Branch &b) { return a.labels < b.labels; });
    std::vector<Branch> out;
    out.reserve(branches_.size());
    for (std::size_t begin = 0; begin < branches_.size();) {
        std::size_t end = run_end(branches_, begin);
        std::size_t first_out = out.size();
        for (std::size_t k = begin; k < end; k++) {
            bool merged = false;
            for (std::size_t j = first_out; j < out.size(); j++) {
                if (same_qubus(out[j].qubus, branches_[k].qubus, tol_.merge)) {
                    out[j].amplitude += branches_[k].amplitude;
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                out.push_back(std::move(branches_[k]));
            }
        }
        begin = end;
    }
    std::erase_if(out, [&](const Branch &b) { return std::abs(b.amplitude) < tol_.prune; });
    branches_ = std::move(out);
}

double PhotonicState::norm_squared() const {
    double total = 0;
    for (std::size_t begin = 0; begin < branches_.size();) {
        std::size_t end = run_end(branches_, begin);
        for (std::size_t i = begin; i < end; i++) {
            total += std::norm(branches_[i].amplitude);
            for (std::size_t j = i + 1; j < end; j++) {
                Complex overlap = std::conj(branches_[i].amplitude) * branches_[j].amplitude;
                for (std::size_t r = 0; r < registers_.size(); r++) {
                    overlap *= coherent_overlap(branches_[i].qubus[r], branches_[j].qubus[r]);
                }
                total += 2 * overlap.real();
            }
        }
        begin = end;
    }
    return total;
}

void PhotonicState::renormalize() {
    double n2 = norm_squared();
    if (!(n2 > 0)) {
        throw std::runtime_error("cannot renormalize a zero state");
    }
    scale(Complex{1.0 / std::sqrt(n2), 0.0});
}

void PhotonicState::scale(Complex factor) {
    for (auto &b : branches_) {
        b.amplitude *= factor;
    }
}

Complex PhotonicState::amplitude_of(std::uint64_t labels) const {
    Complex total{0.0, 0.0};
    for (const auto &b : branches_) {
        if (b.labels == labels) {
            total += b.amplitude;
        }
    }
    return total;
}

namespace gates {
namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}
const Matrix2 kIdentity{{{1.0, 0.0}, {0.0, 1.0}}};
const Matrix2 kHadamard{{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}};
const Matrix2 kPauliX{{{0.0, 1.0}, {1.0, 0.0}}};
const Matrix2 kPauliZ{{{1.0, 0.0}, {0.0, -1.0}}};
const Matrix2 kPhaseS{{{1.0, 0.0}, {0.0, Complex{0.0, 1.0}}}};
}  // namespace gates

Complex coherent_overlap(Complex a, Complex b) {
    return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

std::uint64_t pack_labels(std::span<const ModeLabel> assignments) {
    Branch b;
    for (std::size_t k = 0; k < assignments.size(); k++) {
        b.set_label(k, assignments[k]);
    }
    return b.labels;
}

PhotonicState new_product_state(std::span<const ModeLabel> assignments) {
    if (assignments.empty()) {
        throw std::invalid_argument("no photons");
    }
    if (assignments.size() > PhotonicState::kMaxPhotons) {
        throw std::length_error("too many photons");
    }
    PhotonicState state;
    state.photon_count_ = assignments.size();
    state.branches_.push_back(Branch{pack_labels(assignments), {}, Complex{1.0, 0.0}});
    return state;
}

PhotonicState apply_local_unitary(PhotonicState state, std::size_t photon, const Matrix2 &m, DegreeOfFreedom dof) {
    state.check_photon(photon);
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            Complex entry = std::conj(m[0][r]) * m[0][c] + std::conj(m[1][r]) * m[1][c];
            Complex expected = r == c ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (std::abs(entry - expected) > state.tolerances().unitarity) {
                throw std::invalid_argument("matrix is not unitary");
            }
        }
    }
    std::uint64_t bit = dof == DegreeOfFreedom::polarization ? polarization_bit(photon) : path_bit(photon);
    auto &branches = state.mutable_branches();
    std::vector<Branch> out;
    out.reserve(branches.size() * 2);
    for (auto &b : branches) {
        int in = (b.labels & bit) ? 1 : 0;
        for (int o = 0; o < 2; o++) {
            Complex coeff = m[o][in];
            if (coeff == Complex{0.0, 0.0}) {
                continue;
            }
            Branch nb{o ? (b.labels | bit) : (b.labels & ~bit), b.qubus, b.amplitude * coeff};
            out.push_back(std::move(nb));
        }
    }
    branches = std::move(out);
    state.canonicalize();
    return state;
}

PhotonicState apply_global_phase(PhotonicState state, double phi) {
    state.scale(std::polar(1.0, phi));
    return state;
}

Complex inner_product(const PhotonicState &a, const PhotonicState &b) {
    if (a.photon_count() != b.photon_count()) {
        throw std::invalid_argument("inner product of states with mismatched photon counts");
    }
    if (!a.registers().empty() || !b.registers().empty()) {
        throw std::invalid_argument("inner product requires states without live qubus registers");
    }
    // Branches are canonical: sorted by label with at most one branch per label.
    auto ia = a.branches().begin();
    auto ib = b.branches().begin();
    Complex total{0.0, 0.0};
    while (ia != a.branches().end() && ib != b.branches().end()) {
        if (ia->labels < ib->labels) {
            ++ia;
        } else if (ib->labels < ia->labels) {
            ++ib;
        } else {
            total += std::conj(ia->amplitude) * ib->amplitude;
            ++ia;
            ++ib;
        }
    }
    return total;
}

double fidelity(const PhotonicState &a, const PhotonicState &b) { return std::norm(inner_product(a, b)); }

PhotonicState apply_cz_oracle(PhotonicState state, std::size_t p, std::size_t q) {
    state.check_photon(p);
    state.check_photon(q);
    if (p == q) {
        throw std::invalid_argument("controlled-Z needs two distinct photons");
    }
    std::uint64_t both = polarization_bit(p) | polarization_bit(q);
    for (auto &b : state.mutable_branches()) {
        if ((b.labels & both) == both) {
            b.amplitude = -b.amplitude;
        }
    }
    return state;
}

}  // namespace qweaver
