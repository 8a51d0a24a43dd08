// analysis.hpp: Closed-form references and protocol metrics.

#pragma once

#include "cqed/hilbert.hpp"
#include "cqed/model.hpp"

#include <span>
#include <string>
#include <string_view>

namespace cqed {

enum class TargetLabel { epr_minus_i, bell_plus, custom };

struct TargetState {
    TargetLabel label{TargetLabel::bell_plus};
    Ket ket;  // 9-dim two-atom ket

    std::string name() const;
};

// (|01> − i|10>)/√2
TargetState epr_minus_i();
// (|01> + |10>)/√2
TargetState bell_plus();
// Any normalized 9-dim ket.
TargetState custom_target(Ket ket);
TargetState parse_target(std::string_view name);

// cos(Θt)|01;0> − i sin(Θt)|10;0>, as a 2-vector over {|01;0>, |10;0>}.
Ket analytic_raman_state(double theta_rate, double t);

struct MixingAngle {
    double theta{0.0};  // radians in [0, π/2]
};

struct DarkState {
    Ket ket;  // over {|01;0>, |10;0>, |11;1>}
    MixingAngle angle;
};

DarkState dark_state(double omega1, double omega2);
DarkState dark_state(const PulsePair& pulses, double t);

// ⟨ψ|ρ_a|ψ⟩ for a 9×9 two-atom density matrix.
double fidelity(const Density& rho_atoms, const TargetState& target);

// Tr[ρ (|ψ><ψ| ⊗ I_cavity)] on the full space.
double success_rate(const Density& rho_full, const SpaceLayout& layout, const TargetState& target);

// Time between the two pulse centers at which |Ω₁(t)| = |Ω₂(t)|.
double equal_rabi_time(const PulsePair& pulses);

// max over the grid of |dθ/dt| / ((g/|Δ|)·sqrt(Ω₁² + Ω₂²)).
double adiabaticity_ratio(const PulsePair& pulses, const SystemParams& params, std::span<const double> grid);

}  // namespace cqed
