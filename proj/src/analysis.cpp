#include "cqed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cqed {

namespace {

constexpr double kFidelityHermTol = 1e-10;
constexpr double kImagResidueTol = 1e-10;

TargetState pair_target(TargetLabel label, cplx coeff10) {
    Ket psi = Ket::Zero(kTwoAtomDim);
    psi(SpaceLayout::atom_pair_index(Level::g0, Level::g1)) = (1.0 / std::numbers::sqrt2);
    psi(SpaceLayout::atom_pair_index(Level::g1, Level::g0)) = coeff10 * (1.0 / std::numbers::sqrt2);
    return {label, std::move(psi)};
}

double log_ratio(const PulsePair& p, double t) {
    return std::log(std::abs(p.value(1, t))) - std::log(std::abs(p.value(2, t)));
}

}  // namespace

std::string TargetState::name() const {
    switch (label) {
    case TargetLabel::epr_minus_i: return "epr_minus_i";
    case TargetLabel::bell_plus: return "bell_plus";
    case TargetLabel::custom: return "custom";
    }
    return "?";
}

TargetState epr_minus_i() { return pair_target(TargetLabel::epr_minus_i, cplx(0.0, -1.0)); }

TargetState bell_plus() { return pair_target(TargetLabel::bell_plus, cplx(1.0, 0.0)); }

TargetState custom_target(Ket ket) {
    if (ket.size() != kTwoAtomDim) throw std::invalid_argument("custom target must be a 9-dim two-atom ket");
    if (std::abs(ket.norm() - 1.0) > 1e-9) throw std::invalid_argument("custom target must be normalized");
    return {TargetLabel::custom, std::move(ket)};
}

TargetState parse_target(std::string_view name) {
    if (name == "bell_plus") return bell_plus();
    if (name == "epr_minus_i") return epr_minus_i();
    throw std::invalid_argument("unknown target state '" + std::string(name) + "'");
}

Ket analytic_raman_state(double theta_rate, double t) {
    if (theta_rate < 0.0) throw std::invalid_argument("Raman rate must be non-negative");
    Ket psi(2);
    psi(0) = std::cos(theta_rate * t);
    psi(1) = cplx(0.0, -std::sin(theta_rate * t));
    return psi;
}

DarkState dark_state(double omega1, double omega2) {
    const double a1 = std::abs(omega1);
    const double a2 = std::abs(omega2);
    if (a1 == 0.0 && a2 == 0.0) throw std::domain_error("dark_state: mixing angle undefined when both pulses vanish");
    const double theta = std::atan2(a1, a2);
    Ket d = Ket::Zero(3);
    d(0) = std::cos(theta);
    d(1) = std::sin(theta);
    return {std::move(d), MixingAngle{theta}};
}

DarkState dark_state(const PulsePair& pulses, double t) { return dark_state(pulses.value(1, t), pulses.value(2, t)); }

double fidelity(const Density& rho_atoms, const TargetState& target) {
    if (rho_atoms.rows() != kTwoAtomDim || rho_atoms.cols() != kTwoAtomDim) {
        throw std::invalid_argument("fidelity: expected a 9x9 two-atom density matrix");
    }
    if (hermiticity_residue(rho_atoms) > kFidelityHermTol) {
        throw std::invalid_argument("fidelity: density matrix is not Hermitian");
    }
    const cplx f = target.ket.dot(rho_atoms * target.ket);
    if (std::abs(f.imag()) > kImagResidueTol) throw std::runtime_error("fidelity: non-negligible imaginary part");
    return f.real();
}

double success_rate(const Density& rho_full, const SpaceLayout& layout, const TargetState& target) {
    if (rho_full.rows() != layout.total_dim() || rho_full.cols() != layout.total_dim()) {
        throw std::invalid_argument("success_rate: state dimension does not match layout");
    }
    cplx acc = 0.0;
    for (int n = 0; n <= layout.n_max(); ++n) {
        for (int a = 0; a < kTwoAtomDim; ++a) {
            const cplx ca = std::conj(target.ket(a));
            if (ca == 0.0) continue;
            const Level a1 = static_cast<Level>(a / kLevelsPerAtom);
            const Level a2 = static_cast<Level>(a % kLevelsPerAtom);
            for (int b = 0; b < kTwoAtomDim; ++b) {
                const cplx cb = target.ket(b);
                if (cb == 0.0) continue;
                const Level b1 = static_cast<Level>(b / kLevelsPerAtom);
                const Level b2 = static_cast<Level>(b % kLevelsPerAtom);
                acc += ca * rho_full(layout.index(a1, a2, n), layout.index(b1, b2, n)) * cb;
            }
        }
    }
    if (std::abs(acc.imag()) > kImagResidueTol) throw std::runtime_error("success_rate: non-negligible imaginary part");
    return acc.real();
}

double equal_rabi_time(const PulsePair& pulses) {
    if (pulses.atom1.shape != PulseShape::gaussian || pulses.atom2.shape != PulseShape::gaussian) {
        throw std::invalid_argument("equal_rabi_time: requires gaussian pulses");
    }
    if (pulses.atom1.center == pulses.atom2.center) {
        throw std::invalid_argument("equal_rabi_time: pulse centers must be distinct");
    }
    if (pulses.atom1.peak == 0.0 || pulses.atom2.peak == 0.0) {
        throw std::domain_error("equal_rabi_time: a pulse with zero amplitude never crosses");
    }
    double lo = std::min(pulses.atom1.center, pulses.atom2.center);
    double hi = std::max(pulses.atom1.center, pulses.atom2.center);
    double f_lo = log_ratio(pulses, lo);
    const double f_hi = log_ratio(pulses, hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw std::domain_error("equal_rabi_time: no crossing of |Omega1| and |Omega2| between the pulse centers");
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = log_ratio(pulses, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double adiabaticity_ratio(const PulsePair& pulses, const SystemParams& params, std::span<const double> grid) {
    double worst = 0.0;
    for (double t : grid) {
        const double w1 = pulses.value(1, t);
        const double w2 = pulses.value(2, t);
        const double norm2 = w1 * w1 + w2 * w2;
        if (norm2 == 0.0) continue;
        // θ = atan2(|Ω₁|, |Ω₂|)  ⇒  θ' = (|Ω₂|·|Ω₁|' − |Ω₁|·|Ω₂|') / (Ω₁² + Ω₂²)
        const double d1 = std::copysign(1.0, w1) * pulse_derivative(pulses.atom1, t);
        const double d2 = std::copysign(1.0, w2) * pulse_derivative(pulses.atom2, t);
        const double theta_dot = (std::abs(w2) * d1 - std::abs(w1) * d2) / norm2;
        const double coupling = params.g / std::abs(params.delta) * std::sqrt(norm2);
        worst = std::max(worst, std::abs(theta_dot) / coupling);
    }
    return worst;
}

}  // namespace cqed
