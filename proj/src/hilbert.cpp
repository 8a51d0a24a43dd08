#include "cqed/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace cqed {

namespace {

constexpr double kKetNormTol = 1e-9;
constexpr double kDensityHermTol = 1e-10;
constexpr double kDensityTraceTol = 1e-8;
constexpr double kDensityEigTol = 1e-8;

void require_atom(int atom) {
    if (atom != 1 && atom != 2) {
        throw std::invalid_argument("atomic_op: atom index must be 1 or 2, got " + std::to_string(atom));
    }
}

}  // namespace

char level_char(Level l) {
    switch (l) {
    case Level::g0: return '0';
    case Level::g1: return '1';
    case Level::e: return 'e';
    }
    return '?';
}

Level level_from_char(char c) {
    switch (c) {
    case '0': return Level::g0;
    case '1': return Level::g1;
    case 'e': return Level::e;
    default: throw std::invalid_argument(std::string("unknown atomic level '") + c + "'");
    }
}

BasisLabel parse_basis_label(std::string_view text) {
    if (!text.empty() && text.front() == '|') text.remove_prefix(1);
    if (!text.empty() && text.back() == '>') text.remove_suffix(1);
    const auto semi = text.find(';');
    if (semi != 2 || text.size() < 4) {
        throw std::invalid_argument("malformed basis label '" + std::string(text) + "' (expected |ij;n>)");
    }
    BasisLabel out;
    out.atom1 = level_from_char(text[0]);
    out.atom2 = level_from_char(text[1]);
    const std::string digits(text.substr(3));
    std::size_t used = 0;
    int n = -1;
    try {
        n = std::stoi(digits, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != digits.size() || n < 0) {
        throw std::invalid_argument("malformed photon number in basis label '" + std::string(text) + "'");
    }
    out.photons = n;
    return out;
}

std::string format_basis_label(const BasisLabel& label) {
    std::string s = "|";
    s += level_char(label.atom1);
    s += level_char(label.atom2);
    s += ';';
    s += std::to_string(label.photons);
    s += '>';
    return s;
}

SpaceLayout::SpaceLayout(int n_max) : n_max_(n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("build_space: n_max must be >= 1 to represent |11;1>");
    }
}

Index SpaceLayout::index(const BasisLabel& label) const {
    if (label.photons < 0 || label.photons > n_max_) {
        throw std::out_of_range("photon number " + std::to_string(label.photons) + " outside truncation");
    }
    return atom_pair_index(label.atom1, label.atom2) * fock_dim() + label.photons;
}

BasisLabel SpaceLayout::label(Index idx) const {
    if (idx < 0 || idx >= total_dim()) {
        throw std::out_of_range("basis index outside layout");
    }
    const auto pair = idx / fock_dim();
    return BasisLabel{static_cast<Level>(pair / kLevelsPerAtom), static_cast<Level>(pair % kLevelsPerAtom),
                      static_cast<int>(idx % fock_dim())};
}

SpaceLayout build_space(int n_max) { return SpaceLayout(n_max); }

Operator atomic_op(const SpaceLayout& layout, int atom, Level j, Level m) {
    require_atom(atom);
    const Index dim = layout.total_dim();
    Operator op = Operator::Zero(dim, dim);
    for (Index col = 0; col < dim; ++col) {
        const BasisLabel in = layout.label(col);
        const Level current = atom == 1 ? in.atom1 : in.atom2;
        if (current != m) continue;
        BasisLabel out = in;
        (atom == 1 ? out.atom1 : out.atom2) = j;
        op(layout.index(out), col) = 1.0;
    }
    return op;
}

Operator cavity_annihilator(const SpaceLayout& layout) {
    const Index dim = layout.total_dim();
    Operator a = Operator::Zero(dim, dim);
    for (Index col = 0; col < dim; ++col) {
        const BasisLabel in = layout.label(col);
        if (in.photons == 0) continue;
        BasisLabel out = in;
        out.photons -= 1;
        a(layout.index(out), col) = std::sqrt(static_cast<double>(in.photons));
    }
    return a;
}

Operator identity_op(const SpaceLayout& layout) {
    return Operator::Identity(layout.total_dim(), layout.total_dim());
}

Ket basis_ket(const SpaceLayout& layout, const BasisLabel& label) {
    Ket psi = Ket::Zero(layout.total_dim());
    psi(layout.index(label)) = 1.0;
    return psi;
}

Ket atom_pair_ket(Level a1, Level a2) {
    Ket psi = Ket::Zero(kTwoAtomDim);
    psi(SpaceLayout::atom_pair_index(a1, a2)) = 1.0;
    return psi;
}

QuantumState QuantumState::from_ket(Ket psi) {
    const double n = psi.norm();
    if (std::abs(n - 1.0) > kKetNormTol) {
        throw std::invalid_argument("ket is not normalized (norm " + std::to_string(n) + ")");
    }
    return QuantumState(std::move(psi));
}

QuantumState QuantumState::from_density(Density rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
    const DensityCheck c = check_density(rho);
    if (c.hermiticity_residue > kDensityHermTol) throw std::invalid_argument("density matrix is not Hermitian");
    if (c.trace_error > kDensityTraceTol) throw std::invalid_argument("density matrix trace differs from 1");
    if (c.min_eigenvalue < -kDensityEigTol) throw std::invalid_argument("density matrix is not positive");
    return QuantumState(std::move(rho));
}

Index QuantumState::dim() const noexcept {
    return std::visit([](const auto& d) { return d.rows(); }, data_);
}

const Ket& QuantumState::ket() const {
    if (kind() != Kind::ket) throw std::logic_error("QuantumState holds a density matrix");
    return std::get<Ket>(data_);
}

const Density& QuantumState::density_matrix() const {
    if (kind() != Kind::density) throw std::logic_error("QuantumState holds a ket");
    return std::get<Density>(data_);
}

Density QuantumState::to_density() const {
    if (kind() == Kind::ket) {
        const Ket& psi = std::get<Ket>(data_);
        return psi * psi.adjoint();
    }
    return std::get<Density>(data_);
}

double hermiticity_residue(const Operator& op) {
    if (op.size() == 0) return 0.0;
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

DensityCheck check_density(const Density& rho) {
    DensityCheck c;
    c.hermiticity_residue = hermiticity_residue(rho);
    c.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
    const Density herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Density> es(herm, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

Density partial_trace_cavity(const Density& rho, const SpaceLayout& layout) {
    if (rho.rows() != layout.total_dim() || rho.cols() != layout.total_dim()) {
        throw std::invalid_argument("partial_trace_cavity: state dimension " + std::to_string(rho.rows()) +
                                    " does not match layout dimension " + std::to_string(layout.total_dim()));
    }
    const Index f = layout.fock_dim();
    Density out = Density::Zero(kTwoAtomDim, kTwoAtomDim);
    for (Index a = 0; a < kTwoAtomDim; ++a) {
        for (Index b = 0; b < kTwoAtomDim; ++b) {
            cplx s = 0.0;
            for (Index n = 0; n < f; ++n) s += rho(a * f + n, b * f + n);
            out(a, b) = s;
        }
    }
    return out;
}

Density partial_trace_cavity(const QuantumState& state, const SpaceLayout& layout) {
    return partial_trace_cavity(state.to_density(), layout);
}

}  // namespace cqed
