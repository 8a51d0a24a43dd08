#include "cqed/validate.hpp"

#include "cqed/analysis.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/model.hpp"
#include "cqed/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cqed {

namespace {

constexpr std::uint64_t kValidationSeed = 0x5EEDC0DE;

CheckResult below(std::string name, double value, double threshold, std::string what) {
    std::ostringstream os;
    os << what << " = " << value << " (limit " << threshold << ")";
    return {std::move(name), value < threshold, value, threshold, os.str()};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

const std::vector<std::string> kGroundPopulations = {"population:|01;0>", "population:|10;0>", "population:|11;1>"};

Scenario unitary_fig2() {
    Scenario s = preset("fig2");
    s.params.kappa = 0.0;
    s.params.gamma_atom = 0.0;
    s.observables = kGroundPopulations;
    s.integrator.tol_abs = 1e-10;
    s.integrator.tol_rel = 1e-10;
    return s;
}

double max_series_diff(const Trajectory& a, const Trajectory& b, const std::vector<std::string>& names) {
    double worst = 0.0;
    for (const auto& n : names) worst = std::max(worst, max_abs_diff(a.observable(n), b.observable(n)));
    return worst;
}

CheckResult builder_hermiticity() {
    const Scenario fig2 = preset("fig2");
    const SpaceLayout layout(2);
    SystemParams raman = fig2.params;
    raman.m = 0;
    const PulsePair constant{PulseEnvelope::constant(2.0), PulseEnvelope::constant(1.0)};
    double worst = 0.0;
    for (double t : {0.0, 100.0, 191.7, 250.0, 300.0, 450.0, 600.0}) {
        for (Frame f : {Frame::rotating_constant, Frame::interaction_oscillatory}) {
            worst = std::max(worst, hermiticity_residue(hamiltonian_full(fig2.params, fig2.pulses, t, layout, f)));
        }
        worst = std::max(worst, hermiticity_residue(hamiltonian_effective_raman(fig2.params, fig2.pulses, t, layout)));
        worst = std::max(worst, hermiticity_residue(hamiltonian_lambda_subspace(fig2.params, fig2.pulses, t)));
        worst = std::max(worst, hermiticity_residue(hamiltonian_stirap(fig2.params, fig2.pulses, t)));
    }
    worst = std::max(worst, hermiticity_residue(hamiltonian_two_level_raman(raman, constant)));
    return below("hermiticity.hamiltonians", worst, 1e-12, "max ||H - H^dag||");
}

CheckResult index_bijection() {
    int failures = 0;
    for (int n_max = 1; n_max <= 4; ++n_max) {
        const SpaceLayout layout(n_max);
        for (Index i = 0; i < layout.total_dim(); ++i) {
            if (layout.index(layout.label(i)) != i) ++failures;
            if (parse_basis_label(format_basis_label(layout.label(i))) != layout.label(i)) ++failures;
        }
    }
    return {"hilbert.index_bijection", failures == 0, double(failures), 0.0,
            std::to_string(failures) + " index/label round-trip failures"};
}

CheckResult factor_commutation() {
    const SpaceLayout layout(2);
    const Operator a = cavity_annihilator(layout);
    double worst = 0.0;
    for (Level j : {Level::g0, Level::g1, Level::e}) {
        for (Level m : {Level::g0, Level::g1, Level::e}) {
            const Operator s1 = atomic_op(layout, 1, j, m);
            const Operator s2 = atomic_op(layout, 2, m, j);
            worst = std::max(worst, (s1 * s2 - s2 * s1).norm());
            worst = std::max(worst, (s1 * a - a * s1).norm());
            worst = std::max(worst, (s2 * a - a * s2).norm());
        }
    }
    return below("hilbert.factor_commutation", worst, 1e-12, "max commutator norm across factors");
}

CheckResult partial_trace_properties() {
    std::mt19937_64 rng(kValidationSeed);
    std::normal_distribution<double> n01;
    const SpaceLayout layout(2);
    auto random_density = [&](Index d) {
        Operator m(d, d);
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j) m(i, j) = cplx(n01(rng), n01(rng));
        Density rho = m * m.adjoint();
        return Density(rho / rho.trace().real());
    };
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const Density ra = random_density(kTwoAtomDim);
        const Density rc = random_density(layout.fock_dim());
        Density full(layout.total_dim(), layout.total_dim());
        for (Index i = 0; i < kTwoAtomDim; ++i)
            for (Index j = 0; j < kTwoAtomDim; ++j)
                full.block(i * layout.fock_dim(), j * layout.fock_dim(), layout.fock_dim(), layout.fock_dim()) =
                    ra(i, j) * rc;
        const Density reduced = partial_trace_cavity(full, layout);
        worst = std::max(worst, (reduced - ra).norm());
        worst = std::max(worst, std::abs(reduced.trace() - full.trace()));
        worst = std::max(worst, hermiticity_residue(reduced));
    }
    return below("hilbert.partial_trace", worst, 1e-12, "max deviation on product states");
}

// The 3-dim model is the restriction of the effective Raman model to the
// single-excitation ground manifold.
CheckResult effective_models_nest() {
    const Scenario fig2 = preset("fig2");
    const SpaceLayout layout(2);
    const std::vector<BasisLabel> basis = model_basis({ModelVariant::LambdaSubspace3, Frame::rotating_constant}, layout);
    double worst = 0.0;
    for (double t : {0.0, 150.0, 191.7, 300.0, 420.0}) {
        const Operator h2 = hamiltonian_effective_raman(fig2.params, fig2.pulses, t, layout);
        const Operator h3 = hamiltonian_lambda_subspace(fig2.params, fig2.pulses, t);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j)
                worst = std::max(worst, std::abs(h2(layout.index(basis[i]), layout.index(basis[j])) -
                                                 h3(Index(i), Index(j))));
    }
    return below("model.raman_restricts_to_lambda", worst, 1e-12, "max element mismatch");
}

// With m = 2 the diagonal of the 3-dim model is a multiple of the identity,
// leaving the on-resonance STIRAP Hamiltonian.
CheckResult stirap_matches_lambda() {
    const Scenario fig2 = preset("fig2");
    const double shift = 2.0 * fig2.params.g * fig2.params.g / fig2.params.delta;
    double worst = 0.0;
    for (double t : {0.0, 150.0, 191.7, 300.0, 420.0}) {
        const Operator h3 = hamiltonian_lambda_subspace(fig2.params, fig2.pulses, t);
        const Operator h7 = hamiltonian_stirap(fig2.params, fig2.pulses, t);
        worst = std::max(worst, (h3 - h7 - shift * Operator::Identity(3, 3)).norm());
    }
    return below("model.stirap_matches_lambda", worst, 1e-12, "||H3 - H7 - 2g^2/delta I||");
}

// Eliminating |11;1> from the m = 0 three-level model must reproduce the Raman rate.
CheckResult raman_rate_second_order() {
    SystemParams p;
    p.delta = 20.0;
    p.m = 0;
    // Equal amplitudes cancel the differential Stark shift, so the splitting is 2Θ.
    const double w1 = 0.2, w2 = 0.2;
    const PulsePair pulses{PulseEnvelope::constant(w1), PulseEnvelope::constant(w2)};
    Eigen::SelfAdjointEigenSolver<Operator> es(hamiltonian_lambda_subspace(p, pulses, 0.0));
    const auto& ev = es.eigenvalues();
    const double splitting = ev(1) - ev(0);
    const double theta = raman_rate(w1, w2, p.delta);
    const double rel = std::abs(splitting / 2.0 - theta) / theta;
    return below("model.raman_rate_second_order", rel, 0.05, "relative error of the eliminated coupling");
}

CheckResult dark_state_nullity(bool inject) {
    const Scenario fig2 = preset("fig2");
    BuildOptions opts;
    if (inject) opts.stirap_omega2_sign = +1.0;
    std::mt19937_64 rng(kValidationSeed + 1);
    std::uniform_real_distribution<double> amp(0.01, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double w1 = amp(rng);
        const double w2 = -amp(rng);
        const PulsePair pulses{PulseEnvelope::constant(w1), PulseEnvelope::constant(w2)};
        const Operator h = hamiltonian_stirap(fig2.params, pulses, 0.0, opts);
        worst = std::max(worst, (h * dark_state(w1, w2).ket).norm());
    }
    return below("model.dark_state_nullity", worst, 1e-12, "max ||H7 D||");
}

CheckResult raman_oracle() {
    std::mt19937_64 rng(kValidationSeed + 2);
    std::uniform_real_distribution<double> theta_dist(0.01, 0.2), t_dist(0.0, 200.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double theta = theta_dist(rng);
        const double t = t_dist(rng);
        Scenario s = preset("raman_eq5");
        s.params.delta = 2.0 / (2.0 * theta);  // Ω₁Ω₂ = 2
        s.integrator.t_end = std::max(t, 1e-3);
        s.integrator.record_stride = s.integrator.t_end;
        const Trajectory traj = run_scenario(s);
        const Ket& psi = traj.final_state->ket();
        worst = std::max(worst, (psi - analytic_raman_state(theta, s.integrator.t_end)).norm());
    }
    return below("oracle.raman_two_level", worst, 1e-8, "max amplitude error");
}

Trajectory decay_run(const SystemParams& p, const std::string& initial, std::vector<std::string> observables) {
    const SpaceLayout layout(p.n_max);
    const Hamiltonian h = Hamiltonian::constant(Operator::Zero(layout.total_dim(), layout.total_dim()));
    const Ket psi0 = basis_ket(layout, parse_basis_label(initial));
    IntegratorConfig cfg;
    cfg.t_end = 50.0;
    cfg.record_stride = 0.5;
    cfg.tol_abs = 1e-14;
    cfg.tol_rel = 1e-12;
    return evolve_lindblad(h, psi0 * psi0.adjoint(), build_dissipators(p, layout), cfg,
                           ObservableSet(std::move(observables), ObservableContext::full(layout)));
}

std::vector<CheckResult> lindblad_oracles() {
    std::vector<CheckResult> out;
    SystemParams cav;
    cav.kappa = 0.1;
    const Trajectory tc = decay_run(cav, "|00;1>", {"photon_number"});
    double worst = 0.0;
    for (std::size_t i = 0; i < tc.times.size(); ++i) {
        const double exact = std::exp(-2.0 * cav.kappa * tc.times[i]);
        worst = std::max(worst, std::abs(tc.series[0][i] - exact) / exact);
    }
    out.push_back(below("lindblad.cavity_decay", worst, 1e-6, "max relative error of <n> vs exp(-2 kappa t)"));

    SystemParams atom;
    atom.gamma_atom = 0.1;
    const Trajectory ta = decay_run(atom, "|e0;0>", {"population:|e0;0>", "population:|00;0>", "population:|10;0>"});
    double worst_e = 0.0, worst_branch = 0.0;
    for (std::size_t i = 0; i < ta.times.size(); ++i) {
        const double exact = std::exp(-atom.gamma_atom * ta.times[i]);
        worst_e = std::max(worst_e, std::abs(ta.series[0][i] - exact) / exact);
        const double half = 0.5 * (1.0 - exact);
        worst_branch = std::max({worst_branch, std::abs(ta.series[1][i] - half), std::abs(ta.series[2][i] - half)});
    }
    out.push_back(below("lindblad.atom_decay", worst_e, 1e-6, "max relative error of rho_ee vs exp(-Gamma t)"));
    out.push_back(below("lindblad.branching", worst_branch, 1e-6, "max deviation from equal branching"));
    return out;
}

std::vector<CheckResult> run_invariants() {
    std::vector<CheckResult> out;
    Scenario dissipative = preset("fig2");
    const Trajectory td = run_scenario(dissipative);
    const RunDiagnostics& d = td.diagnostics;
    out.push_back(below("dynamics.trace_drift", d.max_trace_drift, 1e-8, "max |Tr rho - 1| on fig2"));
    out.push_back(below("dynamics.hermiticity", d.max_hermiticity_residue, 1e-10, "max Hermiticity residue on fig2"));
    out.push_back(below("dynamics.positivity", -d.min_eigenvalue, 1e-8, "-min eigenvalue on fig2"));

    const Trajectory tu = run_scenario(unitary_fig2());
    out.push_back(below("dynamics.norm_drift", tu.diagnostics.max_norm_drift, 1e-9, "max |norm - 1| on unitary fig2"));

    Scenario wider = unitary_fig2();
    wider.params.n_max = 3;
    out.push_back(below("hilbert.truncation", max_series_diff(tu, run_scenario(wider), kGroundPopulations), 1e-6,
                        "max population change n_max 2 -> 3"));

    Scenario interaction = unitary_fig2();
    interaction.model.frame = Frame::interaction_oscillatory;
    out.push_back(below("model.frame_equivalence", max_series_diff(tu, run_scenario(interaction), kGroundPopulations),
                        1e-6, "max population difference between frames"));
    return out;
}

CheckResult effective_vs_full(double delta) {
    Scenario full = unitary_fig2();
    full.params.delta = delta;
    Scenario eff = full;
    eff.model.variant = ModelVariant::Stirap7;
    const double diff = max_series_diff(run_scenario(full), run_scenario(eff), kGroundPopulations);
    std::ostringstream name;
    name << "model.effective_vs_full(delta=" << delta << ")";
    return below(name.str(), diff, 0.05, "max ground-manifold population difference");
}

}  // namespace

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

ValidationReport run_validation(const ValidateOptions& opts) {
    ValidationReport r;
    SystemParams p = preset("fig2").params;
    p.delta = opts.delta;
    r.warnings = regime_warnings(p, preset("fig2").pulses, ModelVariant::Full1);

    r.checks.push_back(index_bijection());
    r.checks.push_back(factor_commutation());
    r.checks.push_back(partial_trace_properties());
    r.checks.push_back(builder_hermiticity());
    r.checks.push_back(effective_models_nest());
    r.checks.push_back(stirap_matches_lambda());
    r.checks.push_back(raman_rate_second_order());
    r.checks.push_back(dark_state_nullity(opts.inject_stirap_sign_flip));
    r.checks.push_back(raman_oracle());
    for (auto& c : lindblad_oracles()) r.checks.push_back(std::move(c));
    for (auto& c : run_invariants()) r.checks.push_back(std::move(c));
    r.checks.push_back(effective_vs_full(opts.delta));
    return r;
}

}  // namespace cqed
