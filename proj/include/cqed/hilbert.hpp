// hilbert.hpp: Composite space of two Λ atoms and one truncated cavity mode.
//
// Factor order is (atom 1, atom 2, cavity) with atom 1 the slowest index and
// the cavity Fock number the fastest. Level order inside an atom is
// (|0>, |1>, |e>). Everything that needs a basis index goes through
// SpaceLayout; nothing else computes offsets by hand.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

namespace cqed {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using Density = Eigen::MatrixXcd;
using Index = Eigen::Index;

enum class Level : int { g0 = 0, g1 = 1, e = 2 };

inline constexpr int kLevelsPerAtom = 3;
inline constexpr int kTwoAtomDim = kLevelsPerAtom * kLevelsPerAtom;

char level_char(Level l);
Level level_from_char(char c);

// One basis ket |ij;n>.
struct BasisLabel {
    Level atom1{Level::g0};
    Level atom2{Level::g0};
    int photons{0};

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

// Parses "|01;0>" or "01;0". Throws std::invalid_argument on malformed input.
BasisLabel parse_basis_label(std::string_view text);
std::string format_basis_label(const BasisLabel& label);

class SpaceLayout {
public:
    // n_max >= 1; throws std::invalid_argument otherwise.
    explicit SpaceLayout(int n_max);

    int n_max() const noexcept { return n_max_; }
    int fock_dim() const noexcept { return n_max_ + 1; }
    Index total_dim() const noexcept { return static_cast<Index>(kTwoAtomDim) * fock_dim(); }

    Index index(const BasisLabel& label) const;
    Index index(Level a1, Level a2, int n) const { return index(BasisLabel{a1, a2, n}); }
    BasisLabel label(Index idx) const;

    // Index of |ij> in the 9-dim two-atom space.
    static Index atom_pair_index(Level a1, Level a2) noexcept {
        return static_cast<Index>(a1) * kLevelsPerAtom + static_cast<Index>(a2);
    }

    friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;

private:
    int n_max_;
};

SpaceLayout build_space(int n_max);

// I ⊗ |j><m| ⊗ I embedded on atom 1 or 2.
Operator atomic_op(const SpaceLayout& layout, int atom, Level j, Level m);
Operator cavity_annihilator(const SpaceLayout& layout);
Operator identity_op(const SpaceLayout& layout);

Ket basis_ket(const SpaceLayout& layout, const BasisLabel& label);
// 9-dim two-atom ket |ij>.
Ket atom_pair_ket(Level a1, Level a2);

class QuantumState {
public:
    enum class Kind { ket, density };

    static QuantumState from_ket(Ket psi);
    static QuantumState from_density(Density rho);

    Kind kind() const noexcept { return std::holds_alternative<Ket>(data_) ? Kind::ket : Kind::density; }
    Index dim() const noexcept;
    const Ket& ket() const;
    const Density& density_matrix() const;
    // |ψ><ψ| for kets, the stored matrix otherwise.
    Density to_density() const;

private:
    explicit QuantumState(std::variant<Ket, Density> d) : data_(std::move(d)) {}
    std::variant<Ket, Density> data_;
};

struct DensityCheck {
    double hermiticity_residue{0.0};
    double trace_error{0.0};
    double min_eigenvalue{0.0};
};

DensityCheck check_density(const Density& rho);

// Reduced two-atom density matrix (9×9).
Density partial_trace_cavity(const QuantumState& state, const SpaceLayout& layout);
Density partial_trace_cavity(const Density& rho, const SpaceLayout& layout);

double hermiticity_residue(const Operator& op);

}  // namespace cqed
