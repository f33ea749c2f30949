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

#ifndef QWEAVER_PHOTONIC_STATE_HPP
#define QWEAVER_PHOTONIC_STATE_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qweaver {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { H = 0, V = 1 };
enum class Path : std::uint8_t { P1 = 0, P2 = 1 };
enum class DegreeOfFreedom : std::uint8_t { polarization, path };

/// One photon's basis assignment. Photons that were never split across
/// paths sit on P1.
struct ModeLabel {
    Polarization polarization = Polarization::H;
    Path path = Path::P1;

    friend bool operator==(const ModeLabel &, const ModeLabel &) = default;
};

std::string to_string(ModeLabel label);

using RegisterId = int;

/// Two bits per photon inside Branch::labels.
constexpr std::uint64_t polarization_bit(std::size_t photon) { return std::uint64_t{1} << (2 * photon); }
constexpr std::uint64_t path_bit(std::size_t photon) { return std::uint64_t{1} << (2 * photon + 1); }

/// One term of the superposition: a joint photon label, the coherent amplitude
/// of every live qubus register (same order as PhotonicState::registers()) and
/// the complex coefficient.
struct Branch {
    std::uint64_t labels = 0;
    std::vector<Complex> qubus;
    Complex amplitude{0.0, 0.0};

    ModeLabel label(std::size_t photon) const;
    void set_label(std::size_t photon, ModeLabel label);
};

struct Tolerances {
    /// Componentwise |Δγ| below which two qubus amplitudes count as identical.
    double merge = 1e-9;
    /// Branches whose |amplitude| drops below this are discarded.
    double prune = 1e-15;
    /// Max deviation of U†U from the identity accepted by apply_local_unitary.
    double unitarity = 1e-12;
    /// Norm deviation tolerated before an operation reports a broken state.
    double norm = 1e-10;
};

/// Sparse pure state of indexed single photons (polarization ⊗ path each)
/// together with any number of qubus coherent-state registers.
///
/// Photon indices are positional: removing photon k shifts every photon above
/// k down by one. At most kMaxPhotons photons can be live at once.
class PhotonicState {
   public:
    static constexpr std::size_t kMaxPhotons = 32;

    PhotonicState() = default;

    std::size_t photon_count() const { return photon_count_; }
    std::span<const Branch> branches() const { return branches_; }
    std::span<const RegisterId> registers() const { return registers_; }
    const Tolerances &tolerances() const { return tol_; }
    void set_tolerances(const Tolerances &tol) { tol_ = tol; }

    bool has_register(RegisterId id) const;
    /// Position of a live register inside Branch::qubus. Throws for dead ids.
    std::size_t register_slot(RegisterId id) const;

    /// Appends a photon in `label` to every branch and returns its index.
    std::size_t add_photon(ModeLabel label);
    /// Drops photon `photon` from the label set. The caller is responsible for
    /// having projected it onto a definite label first.
    void remove_photon(std::size_t photon);
    /// Allocates a qubus register in coherent state |gamma⟩ on every branch.
    RegisterId add_register(Complex gamma);
    /// Drops the register column. The caller must have removed any coherence
    /// carried by it.
    void remove_register(RegisterId id);

    std::vector<Branch> &mutable_branches() { return branches_; }

    /// Sorts branches, merges duplicates (identical labels and qubus amplitudes
    /// within Tolerances::merge) and prunes vanishing terms.
    void canonicalize();

    /// Exact ⟨ψ|ψ⟩ including coherent-state overlaps between branches that
    /// share photon labels.
    double norm_squared() const;
    void renormalize();
    void scale(Complex factor);

    /// Sum of amplitudes of branches carrying exactly `labels` (ignores qubus).
    Complex amplitude_of(std::uint64_t labels) const;

    void check_photon(std::size_t photon) const;

    friend PhotonicState new_product_state(std::span<const ModeLabel> assignments);

   private:
    std::size_t photon_count_ = 0;
    std::vector<RegisterId> registers_;
    RegisterId next_register_ = 1;
    std::vector<Branch> branches_;
    Tolerances tol_;
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

namespace gates {
extern const Matrix2 kIdentity;
extern const Matrix2 kHadamard;
extern const Matrix2 kPauliX;
extern const Matrix2 kPauliZ;
extern const Matrix2 kPhaseS;
}  // namespace gates

/// ⟨a|b⟩ for coherent states.
Complex coherent_overlap(Complex a, Complex b);

/// Packs a list of per-photon assignments into a branch label.
std::uint64_t pack_labels(std::span<const ModeLabel> assignments);

PhotonicState new_product_state(std::span<const ModeLabel> assignments);
PhotonicState apply_local_unitary(PhotonicState state, std::size_t photon, const Matrix2 &matrix,
                                  DegreeOfFreedom dof = DegreeOfFreedom::polarization);
PhotonicState apply_global_phase(PhotonicState state, double phi);

/// ⟨a|b⟩. Both states must have the same photon count and no live registers.
Complex inner_product(const PhotonicState &a, const PhotonicState &b);
/// |⟨a|b⟩|²; global phases never matter here.
double fidelity(const PhotonicState &a, const PhotonicState &b);

/// Reference controlled-Z on polarization: flips the sign of branches where
/// both photons are V. Used as the brute-force oracle for the optical gates.
PhotonicState apply_cz_oracle(PhotonicState state, std::size_t p, std::size_t q);

}  // namespace qweaver

#endif
