#include "cqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cqed {

namespace {

using std::abs;

constexpr double kDispersiveFactor = 10.0;

HamiltonianTerm constant_term(Operator op) {
    return {std::move(op), [](double) { return cplx(1.0, 0.0); }};
}

HamiltonianTerm real_term(Operator op, std::function<double(double)> f) {
    return {std::move(op), [f = std::move(f)](double t) { return cplx(f(t), 0.0); }};
}

Operator reduced_op(Index dim, std::initializer_list<std::tuple<Index, Index, double>> entries) {
    Operator op = Operator::Zero(dim, dim);
    for (const auto& [r, c, v] : entries) op(r, c) += v;
    return op;
}

// Basis positions inside the three-state Λ subspace.
constexpr Index kL01 = 0;
constexpr Index kL10 = 1;
constexpr Index kL11 = 2;

}  // namespace

void validate(const SystemParams& p) {
    if (!(p.g > 0.0) || !std::isfinite(p.g)) throw std::invalid_argument("g must be positive and finite");
    if (p.delta == 0.0 || !std::isfinite(p.delta)) throw std::invalid_argument("delta must be nonzero and finite");
    if (p.kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
    if (p.gamma_atom < 0.0) throw std::invalid_argument("gamma_atom must be non-negative");
    if (p.m < 0) throw std::invalid_argument("m must be non-negative");
    if (p.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
}

void validate(const PulseEnvelope& p) {
    if (p.shape == PulseShape::gaussian && !(p.width > 0.0)) {
        throw std::invalid_argument("gaussian pulse width must be positive");
    }
}

double pulse_value(const PulseEnvelope& p, double t) {
    if (p.shape == PulseShape::constant) return p.peak;
    const double x = (t - p.center) / p.width;
    return p.peak * std::exp(-x * x);
}

double pulse_derivative(const PulseEnvelope& p, double t) {
    if (p.shape == PulseShape::constant) return 0.0;
    const double x = (t - p.center) / p.width;
    return -2.0 * x / p.width * p.peak * std::exp(-x * x);
}

PulsePair stirap_pulse_pair(double omega1_peak, double xi, double center1, double width1, double center2,
                            double width2) {
    if (xi == 0.0) throw std::invalid_argument("xi must be nonzero");
    return {PulseEnvelope::gaussian(omega1_peak, center1, width1),
            PulseEnvelope::gaussian(-omega1_peak / xi, center2, width2)};
}

std::string_view to_string(ModelVariant v) {
    switch (v) {
    case ModelVariant::Full1: return "Full1";
    case ModelVariant::EffectiveRaman2: return "EffectiveRaman2";
    case ModelVariant::LambdaSubspace3: return "LambdaSubspace3";
    case ModelVariant::TwoLevelRaman4: return "TwoLevelRaman4";
    case ModelVariant::Stirap7: return "Stirap7";
    }
    return "?";
}

std::string_view to_string(Frame f) {
    return f == Frame::rotating_constant ? "rotating_constant" : "interaction_oscillatory";
}

ModelVariant parse_model_variant(std::string_view s) {
    for (auto v : {ModelVariant::Full1, ModelVariant::EffectiveRaman2, ModelVariant::LambdaSubspace3,
                   ModelVariant::TwoLevelRaman4, ModelVariant::Stirap7}) {
        if (to_string(v) == s) return v;
    }
    throw std::invalid_argument("unknown model variant '" + std::string(s) + "'");
}

Frame parse_frame(std::string_view s) {
    if (s == "rotating_constant") return Frame::rotating_constant;
    if (s == "interaction_oscillatory") return Frame::interaction_oscillatory;
    throw std::invalid_argument("unknown frame '" + std::string(s) + "'");
}

std::vector<BasisLabel> model_basis(const ModelSelector& sel, const SpaceLayout& layout) {
    const BasisLabel b01{Level::g0, Level::g1, 0};
    const BasisLabel b10{Level::g1, Level::g0, 0};
    const BasisLabel b11{Level::g1, Level::g1, 1};
    switch (sel.variant) {
    case ModelVariant::LambdaSubspace3:
    case ModelVariant::Stirap7: return {b01, b10, b11};
    case ModelVariant::TwoLevelRaman4: return {b01, b10};
    case ModelVariant::Full1:
    case ModelVariant::EffectiveRaman2: break;
    }
    std::vector<BasisLabel> out;
    out.reserve(static_cast<std::size_t>(layout.total_dim()));
    for (Index i = 0; i < layout.total_dim(); ++i) out.push_back(layout.label(i));
    return out;
}

Hamiltonian::Hamiltonian(Index dim, std::vector<HamiltonianTerm> terms) : dim_(dim), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.op.rows() != dim_ || t.op.cols() != dim_) {
            throw std::invalid_argument("Hamiltonian term dimension mismatch");
        }
    }
}

Hamiltonian Hamiltonian::constant(Operator op) {
    const Index dim = op.rows();
    std::vector<HamiltonianTerm> terms;
    terms.push_back(constant_term(std::move(op)));
    return Hamiltonian(dim, std::move(terms));
}

Operator Hamiltonian::at(double t) const {
    Operator h = Operator::Zero(dim_, dim_);
    for (const auto& term : terms_) h += term.coeff(t) * term.op;
    return h;
}

double raman_rate(double omega1, double omega2, double delta) { return abs(omega1 * omega2) / (2.0 * abs(delta)); }

double level_shift(const SystemParams& p, double omega) { return (p.g * p.g * p.m - omega * omega) / p.delta; }

Hamiltonian make_full_hamiltonian(const SystemParams& p, const PulsePair& pulses, const SpaceLayout& layout,
                                  Frame frame) {
    validate(p);
    validate(pulses.atom1);
    validate(pulses.atom2);
    const Operator a = cavity_annihilator(layout);
    const Index dim = layout.total_dim();

    // The excited level sits at −Δ in the rotating frame; this is the sign for
    // which eliminating |e> yields the +|Ω|²/Δ and +g²/Δ·a†a shifts that the
    // engineered (g²m − Ω²)/Δ shift is built to cancel.
    Operator constant = Operator::Zero(dim, dim);
    std::vector<HamiltonianTerm> terms;
    for (int atom : {1, 2}) {
        const Operator s_ee = atomic_op(layout, atom, Level::e, Level::e);
        const Operator s_e0 = atomic_op(layout, atom, Level::e, Level::g0);
        const Operator s_e1 = atomic_op(layout, atom, Level::e, Level::g1);
        const Operator s_00 = atomic_op(layout, atom, Level::g0, Level::g0);
        const Operator cav = p.g * (a * s_e1);

        constant += (p.g * p.g * p.m / p.delta) * s_00;
        terms.push_back(real_term(s_00, [pulses, atom, d = p.delta](double t) {
            const double w = pulses.value(atom, t);
            return -w * w / d;
        }));

        if (frame == Frame::rotating_constant) {
            constant += -p.delta * s_ee + cav + Operator(cav.adjoint());
            terms.push_back(real_term(s_e0 + Operator(s_e0.adjoint()),
                                      [pulses, atom](double t) { return pulses.value(atom, t); }));
        } else {
            const double d = p.delta;
            terms.push_back({s_e0, [pulses, atom, d](double t) {
                                 return pulses.value(atom, t) * std::exp(cplx(0.0, -d * t));
                             }});
            terms.push_back({s_e0.adjoint(), [pulses, atom, d](double t) {
                                 return pulses.value(atom, t) * std::exp(cplx(0.0, d * t));
                             }});
            terms.push_back({cav, [d](double t) { return std::exp(cplx(0.0, -d * t)); }});
            terms.push_back({cav.adjoint(), [d](double t) { return std::exp(cplx(0.0, d * t)); }});
        }
    }
    terms.insert(terms.begin(), constant_term(std::move(constant)));
    return Hamiltonian(dim, std::move(terms));
}

Hamiltonian make_effective_raman_hamiltonian(const SystemParams& p, const PulsePair& pulses,
                                             const SpaceLayout& layout) {
    validate(p);
    const Operator a = cavity_annihilator(layout);
    const Operator n_op = a.adjoint() * a;
    const Index dim = layout.total_dim();
    const double g2d = p.g * p.g / p.delta;

    Operator constant = Operator::Zero(dim, dim);
    std::vector<HamiltonianTerm> terms;
    for (int atom : {1, 2}) {
        const Operator s_11 = atomic_op(layout, atom, Level::g1, Level::g1);
        const Operator s_00 = atomic_op(layout, atom, Level::g0, Level::g0);
        const Operator s_10 = atomic_op(layout, atom, Level::g1, Level::g0);
        constant += g2d * (n_op * s_11) + (g2d * p.m) * s_00;
        const Operator raman = a.adjoint() * s_10;
        terms.push_back(real_term(raman + Operator(raman.adjoint()), [pulses, atom, gd = p.g / p.delta](double t) {
            return gd * pulses.value(atom, t);
        }));
    }
    terms.insert(terms.begin(), constant_term(std::move(constant)));
    return Hamiltonian(dim, std::move(terms));
}

Hamiltonian make_lambda_subspace_hamiltonian(const SystemParams& p, const PulsePair& pulses, int coupling_sign) {
    validate(p);
    if (coupling_sign != 1 && coupling_sign != -1) throw std::invalid_argument("coupling_sign must be ±1");
    const double g2d = p.g * p.g / p.delta;
    const double gd = p.g / p.delta;
    std::vector<HamiltonianTerm> terms;
    terms.push_back(constant_term(
        reduced_op(3, {{kL01, kL01, p.m * g2d}, {kL10, kL10, p.m * g2d}, {kL11, kL11, 2.0 * g2d}})));
    terms.push_back(real_term(reduced_op(3, {{kL01, kL11, 1.0}, {kL11, kL01, 1.0}}),
                              [pulses, gd](double t) { return gd * pulses.value(1, t); }));
    terms.push_back(real_term(reduced_op(3, {{kL10, kL11, 1.0}, {kL11, kL10, 1.0}}),
                              [pulses, gd, coupling_sign](double t) { return coupling_sign * gd * pulses.value(2, t); }));
    return Hamiltonian(3, std::move(terms));
}

Hamiltonian make_two_level_raman_hamiltonian(const SystemParams& p, const PulsePair& pulses) {
    validate(p);
    if (p.m != 0) throw std::invalid_argument("two-level Raman model requires m = 0, got m = " + std::to_string(p.m));
    if (pulses.atom1.shape != PulseShape::constant || pulses.atom2.shape != PulseShape::constant) {
        throw std::invalid_argument("two-level Raman model requires constant pulses");
    }
    const double theta = raman_rate(pulses.atom1.peak, pulses.atom2.peak, p.delta);
    return Hamiltonian::constant(reduced_op(2, {{0, 1, theta}, {1, 0, theta}}));
}

Hamiltonian make_stirap_hamiltonian(const SystemParams& p, const PulsePair& pulses, BuildOptions opts) {
    validate(p);
    const double gd = p.g / p.delta;
    std::vector<HamiltonianTerm> terms;
    terms.push_back(real_term(reduced_op(3, {{kL01, kL11, 1.0}, {kL11, kL01, 1.0}}),
                              [pulses, gd](double t) { return gd * abs(pulses.value(1, t)); }));
    terms.push_back(real_term(reduced_op(3, {{kL10, kL11, 1.0}, {kL11, kL10, 1.0}}),
                              [pulses, gd, s = opts.stirap_omega2_sign](double t) {
                                  return s * gd * abs(pulses.value(2, t));
                              }));
    return Hamiltonian(3, std::move(terms));
}

Hamiltonian make_hamiltonian(const ModelSelector& sel, const SystemParams& p, const PulsePair& pulses,
                             const SpaceLayout& layout, BuildOptions opts) {
    switch (sel.variant) {
    case ModelVariant::Full1: return make_full_hamiltonian(p, pulses, layout, sel.frame);
    case ModelVariant::EffectiveRaman2: return make_effective_raman_hamiltonian(p, pulses, layout);
    case ModelVariant::LambdaSubspace3: return make_lambda_subspace_hamiltonian(p, pulses, +1);
    case ModelVariant::TwoLevelRaman4: return make_two_level_raman_hamiltonian(p, pulses);
    case ModelVariant::Stirap7: return make_stirap_hamiltonian(p, pulses, opts);
    }
    throw std::invalid_argument("unknown model variant");
}

Operator hamiltonian_full(const SystemParams& p, const PulsePair& pulses, double t, const SpaceLayout& layout,
                          Frame frame) {
    return make_full_hamiltonian(p, pulses, layout, frame).at(t);
}

Operator hamiltonian_effective_raman(const SystemParams& p, const PulsePair& pulses, double t,
                                     const SpaceLayout& layout) {
    return make_effective_raman_hamiltonian(p, pulses, layout).at(t);
}

Operator hamiltonian_lambda_subspace(const SystemParams& p, const PulsePair& pulses, double t, int coupling_sign) {
    return make_lambda_subspace_hamiltonian(p, pulses, coupling_sign).at(t);
}

Operator hamiltonian_two_level_raman(const SystemParams& p, const PulsePair& pulses) {
    return make_two_level_raman_hamiltonian(p, pulses).at(0.0);
}

Operator hamiltonian_stirap(const SystemParams& p, const PulsePair& pulses, double t, BuildOptions opts) {
    return make_stirap_hamiltonian(p, pulses, opts).at(t);
}

std::vector<std::string> regime_warnings(const SystemParams& p, const PulsePair& pulses, ModelVariant variant) {
    std::vector<std::string> out;
    const double omega = std::max(abs(pulses.atom1.peak), abs(pulses.atom2.peak));
    const double scale = std::max(omega, p.g);
    if (abs(p.delta) < kDispersiveFactor * scale) {
        std::ostringstream os;
        os << "dispersive regime not satisfied: |delta| = " << abs(p.delta) << " < " << kDispersiveFactor
           << " x max(|Omega|, g) = " << kDispersiveFactor * scale;
        out.push_back(os.str());
    }
    if (variant == ModelVariant::TwoLevelRaman4 && 2.0 * p.g < kDispersiveFactor * omega) {
        std::ostringstream os;
        os << "Raman hierarchy not satisfied: 2g^2/delta = " << 2.0 * p.g * p.g / abs(p.delta)
           << " is not >> g*Omega/delta = " << p.g * omega / abs(p.delta);
        out.push_back(os.str());
    }
    return out;
}

Dissipators build_dissipators(const SystemParams& p, const SpaceLayout& layout) {
    validate(p);
    Dissipators d;
    if (p.kappa > 0.0) {
        d.collapse_ops.push_back(std::sqrt(2.0 * p.kappa) * cavity_annihilator(layout));
        d.names.emplace_back("cavity");
    }
    if (p.gamma_atom > 0.0) {
        const double amp = std::sqrt(p.gamma_atom / 2.0);
        for (int atom : {1, 2}) {
            for (Level j : {Level::g0, Level::g1}) {
                d.collapse_ops.push_back(amp * atomic_op(layout, atom, j, Level::e));
                d.names.push_back("atom" + std::to_string(atom) + "_e_to_" + level_char(j));
            }
        }
    }
    return d;
}

}  // namespace cqed
