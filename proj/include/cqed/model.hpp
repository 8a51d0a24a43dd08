// model.hpp: Physical parameters, pulse envelopes and the Hamiltonian hierarchy
// (full dispersive Λ model down to the two-level Raman model), plus the
// Lindblad collapse operators for cavity and spontaneous-emission loss.
//
// Units: every rate is in units of g and every time in units of 1/g.

#pragma once

#include "cqed/hilbert.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

struct SystemParams {
    double g{1.0};
    double delta{20.0};
    double kappa{0.0};       // cavity field decay; collapse operator √(2κ)·a
    double gamma_atom{0.0};  // total excited-state population decay Γ
    int m{2};                // level-shift integer of the engineered |0> shift
    double xi{1.0};          // Ω₁ = −ξΩ₂ (STIRAP configuration)
    int n_max{2};
};

// Throws std::invalid_argument on a violated invariant.
void validate(const SystemParams& p);

enum class PulseShape { gaussian, constant };

struct PulseEnvelope {
    double peak{0.0};
    double center{0.0};
    double width{1.0};
    PulseShape shape{PulseShape::gaussian};

    static PulseEnvelope gaussian(double peak, double center, double width) {
        return {peak, center, width, PulseShape::gaussian};
    }
    static PulseEnvelope constant(double peak) { return {peak, 0.0, 1.0, PulseShape::constant}; }

    friend bool operator==(const PulseEnvelope&, const PulseEnvelope&) = default;
};

void validate(const PulseEnvelope& p);
double pulse_value(const PulseEnvelope& p, double t);
double pulse_derivative(const PulseEnvelope& p, double t);

struct PulsePair {
    PulseEnvelope atom1;
    PulseEnvelope atom2;

    double value(int atom, double t) const { return pulse_value(atom == 1 ? atom1 : atom2, t); }
    friend bool operator==(const PulsePair&, const PulsePair&) = default;
};

// Ω₁ peak given, Ω₂ peak = −Ω₁/ξ.
PulsePair stirap_pulse_pair(double omega1_peak, double xi, double center1, double width1, double center2,
                            double width2);

enum class ModelVariant { Full1, EffectiveRaman2, LambdaSubspace3, TwoLevelRaman4, Stirap7 };
enum class Frame { rotating_constant, interaction_oscillatory };

std::string_view to_string(ModelVariant v);
std::string_view to_string(Frame f);
ModelVariant parse_model_variant(std::string_view s);
Frame parse_frame(std::string_view s);

struct ModelSelector {
    ModelVariant variant{ModelVariant::Full1};
    Frame frame{Frame::rotating_constant};

    friend bool operator==(const ModelSelector&, const ModelSelector&) = default;
};

// Basis of the space the selected model acts on, expressed as |ij;n> labels.
// Reduced models: {|01;0>, |10;0>, |11;1>} (3) or {|01;0>, |10;0>} (2).
std::vector<BasisLabel> model_basis(const ModelSelector& sel, const SpaceLayout& layout);

struct HamiltonianTerm {
    Operator op;
    std::function<cplx(double)> coeff;
};

// H(t) = Σ_k coeff_k(t) · op_k. The sum is Hermitian; individual terms need not be.
class Hamiltonian {
public:
    Hamiltonian(Index dim, std::vector<HamiltonianTerm> terms);
    static Hamiltonian constant(Operator op);

    Index dim() const noexcept { return dim_; }
    const std::vector<HamiltonianTerm>& terms() const noexcept { return terms_; }
    Operator at(double t) const;

private:
    Index dim_;
    std::vector<HamiltonianTerm> terms_;
};

// Test hook: the sign in front of the |10;0>↔|11;1> coupling of the on-resonance
// STIRAP Hamiltonian. Flipping it to +1 breaks the dark state.
struct BuildOptions {
    double stirap_omega2_sign{-1.0};
};

Hamiltonian make_full_hamiltonian(const SystemParams& p, const PulsePair& pulses, const SpaceLayout& layout,
                                  Frame frame = Frame::rotating_constant);
Hamiltonian make_effective_raman_hamiltonian(const SystemParams& p, const PulsePair& pulses,
                                             const SpaceLayout& layout);
Hamiltonian make_lambda_subspace_hamiltonian(const SystemParams& p, const PulsePair& pulses, int coupling_sign = +1);
Hamiltonian make_two_level_raman_hamiltonian(const SystemParams& p, const PulsePair& pulses);
Hamiltonian make_stirap_hamiltonian(const SystemParams& p, const PulsePair& pulses, BuildOptions opts = {});

Hamiltonian make_hamiltonian(const ModelSelector& sel, const SystemParams& p, const PulsePair& pulses,
                             const SpaceLayout& layout, BuildOptions opts = {});

Operator hamiltonian_full(const SystemParams& p, const PulsePair& pulses, double t, const SpaceLayout& layout,
                          Frame frame = Frame::rotating_constant);
Operator hamiltonian_effective_raman(const SystemParams& p, const PulsePair& pulses, double t,
                                     const SpaceLayout& layout);
Operator hamiltonian_lambda_subspace(const SystemParams& p, const PulsePair& pulses, double t,
                                     int coupling_sign = +1);
Operator hamiltonian_two_level_raman(const SystemParams& p, const PulsePair& pulses);
Operator hamiltonian_stirap(const SystemParams& p, const PulsePair& pulses, double t, BuildOptions opts = {});

// Θ = |Ω₁Ω₂| / (2Δ)
double raman_rate(double omega1, double omega2, double delta);

// Engineered shift on |0> of one atom: (g²m − Ω²)/Δ.
double level_shift(const SystemParams& p, double omega);

// Dispersive-regime and Raman-hierarchy diagnostics; empty when all hold.
std::vector<std::string> regime_warnings(const SystemParams& p, const PulsePair& pulses,
                                         ModelVariant variant = ModelVariant::Full1);

struct Dissipators {
    std::vector<Operator> collapse_ops;
    std::vector<std::string> names;
};

Dissipators build_dissipators(const SystemParams& p, const SpaceLayout& layout);

}  // namespace cqed
