#include "cqed/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace cqed {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::vector<std::string> default_observables() {
    return {"population:|01;0>", "population:|10;0>", "population:|11;1>", "photon_number",
            "excited_total",     "success_rate",      "fidelity"};
}

namespace {

Scenario fig2() {
    Scenario s;
    s.name = "fig2";
    s.params.g = 1.0;
    s.params.delta = 20.0;
    s.params.kappa = 0.1;
    s.params.gamma_atom = 0.1;
    s.params.m = 2;
    s.params.xi = 2.0;
    s.params.n_max = 2;
    s.pulses = stirap_pulse_pair(2.0, s.params.xi, 300.0, 125.0, 150.0, 175.0);
    s.model = {ModelVariant::Full1, Frame::rotating_constant};
    s.integrator.t_start = 0.0;
    s.integrator.t_end = 600.0;
    s.integrator.record_stride = 1.0;
    // Tighter than the integrator default so unitary runs keep norm drift below 1e-9.
    s.integrator.tol_abs = 1e-10;
    s.integrator.tol_rel = 1e-10;
    s.observables = default_observables();
    s.target = bell_plus();
    return s;
}

Scenario raman_eq5() {
    Scenario s;
    s.name = "raman_eq5";
    s.params.delta = 20.0;
    s.params.m = 0;
    s.params.xi = 2.0;
    s.pulses = {PulseEnvelope::constant(2.0), PulseEnvelope::constant(1.0)};
    s.model = {ModelVariant::TwoLevelRaman4, Frame::rotating_constant};
    const double theta = raman_rate(2.0, 1.0, 20.0);
    s.integrator.t_end = std::numbers::pi / (4.0 * theta);
    s.integrator.record_stride = s.integrator.t_end / 20.0;
    s.integrator.tol_abs = 1e-12;
    s.integrator.tol_rel = 1e-12;
    s.observables = {"population:|01;0>", "population:|10;0>", "fidelity:epr_minus_i", "success_rate"};
    s.target = epr_minus_i();
    return s;
}

Scenario cesium_experiment() {
    Scenario s;
    s.name = "cesium_experiment";
    const double g = kTwoPi * 16e6;
    s.physical_units = PhysicalUnits{g};
    s.params.g = 1.0;
    s.params.delta = 10.0;
    s.params.kappa = kTwoPi * 3.8e6 / g;
    // γ/2π = 2.6 MHz per decay channel of the two-channel sum, so Γ = 2γ.
    s.params.gamma_atom = 2.0 * kTwoPi * 2.6e6 / g;
    s.params.m = 2;
    s.params.xi = 1.0;
    s.params.n_max = 2;
    // "Ω ~ 100 MHz" read as an angular rate of 1e8 rad/s, about g.
    const double omega = 100e6 / g;
    s.pulses = stirap_pulse_pair(omega, s.params.xi, 3e-6 * g, 1.3e-6 * g, 1.5e-6 * g, 1.8e-6 * g);
    s.model = {ModelVariant::Full1, Frame::rotating_constant};
    s.integrator.t_end = 6e-6 * g;
    s.integrator.record_stride = 1.0;
    s.integrator.tol_abs = 1e-10;
    s.integrator.tol_rel = 1e-10;
    s.observables = default_observables();
    s.target = bell_plus();
    return s;
}

void run_parallel(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
    const std::size_t n_threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, count);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void merge(RunDiagnostics& into, const RunDiagnostics& d) {
    into.max_norm_drift = std::max(into.max_norm_drift, d.max_norm_drift);
    into.max_trace_drift = std::max(into.max_trace_drift, d.max_trace_drift);
    into.min_eigenvalue = std::min(into.min_eigenvalue, d.min_eigenvalue);
    into.max_hermiticity_residue = std::max(into.max_hermiticity_residue, d.max_hermiticity_residue);
    into.max_population_excursion = std::max(into.max_population_excursion, d.max_population_excursion);
    into.stats.steps += d.stats.steps;
    into.stats.rejected += d.stats.rejected;
    into.stats.rhs_evals += d.stats.rhs_evals;
}

struct Measurement {
    double success_rate;
    double fidelity;
    RunDiagnostics diagnostics;
};

// Evolves to t_measure and evaluates P and F on the final state.
Measurement measure_at(Scenario s, double t_measure) {
    s.integrator.t_end = t_measure;
    s.integrator.record_stride = t_measure - s.integrator.t_start;
    s.observables = {"success_rate", "fidelity"};
    const Trajectory traj = run_scenario(s);
    return {traj.series[0].back(), traj.series[1].back(), traj.diagnostics};
}

double nudge_peak(double peak, double delta_omega) { return peak + std::copysign(delta_omega, peak); }

}  // namespace

std::string_view to_string(SweepAxis a) {
    return a == SweepAxis::kappa_gamma_product ? "kappa_gamma_product" : "rabi_fluctuation";
}

std::string_view to_string(FluctuationMode m) {
    return m == FluctuationMode::deterministic ? "deterministic" : "sampled";
}

SweepAxis parse_sweep_axis(std::string_view s) {
    if (s == "kappa_gamma_product") return SweepAxis::kappa_gamma_product;
    if (s == "rabi_fluctuation") return SweepAxis::rabi_fluctuation;
    throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

FluctuationMode parse_fluctuation_mode(std::string_view s) {
    if (s == "deterministic") return FluctuationMode::deterministic;
    if (s == "sampled") return FluctuationMode::sampled;
    throw std::invalid_argument("unknown fluctuation mode '" + std::string(s) + "'");
}

void validate(const SweepSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        if (!(spec.grid[i] >= 0.0)) throw std::invalid_argument("sweep grid values must be non-negative");
        if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
    }
    if (spec.mode == FluctuationMode::sampled && spec.samples < 1) throw std::invalid_argument("sweep samples must be >= 1");
    if (!(spec.split_ratio > 0.0)) throw std::invalid_argument("sweep split_ratio must be positive");
}

void validate(const Scenario& s) {
    validate(s.params);
    validate(s.pulses.atom1);
    validate(s.pulses.atom2);
    validate(s.integrator);
    const SpaceLayout layout(s.params.n_max);
    initial_ket(s, layout);
    ObservableSet(s.observables, observable_context(s, layout));
    if (s.sweep) validate(*s.sweep);
    if (s.physical_units && !(s.physical_units->g_rad_per_s > 0.0)) {
        throw std::invalid_argument("physical_units.g_rad_per_s must be positive");
    }
}

std::vector<std::string> preset_names() { return {"fig2", "fig3a", "fig3b", "raman_eq5", "cesium_experiment"}; }

Scenario preset(std::string_view name) {
    if (name == "fig2") return fig2();
    if (name == "fig3a") {
        Scenario s = fig2();
        s.name = "fig3a";
        SweepSpec sweep;
        sweep.axis = SweepAxis::kappa_gamma_product;
        sweep.grid = {0.0, 1e-4, 1e-3, 1e-2, 0.05, 0.1};
        s.sweep = sweep;
        return s;
    }
    if (name == "fig3b") {
        Scenario s = fig2();
        s.name = "fig3b";
        s.params.kappa = 0.0;
        s.params.gamma_atom = 0.0;
        SweepSpec sweep;
        sweep.axis = SweepAxis::rabi_fluctuation;
        sweep.grid = {0.0, 0.02, 0.05, 0.1, 0.2, 0.3};
        s.sweep = sweep;
        return s;
    }
    if (name == "raman_eq5") return raman_eq5();
    if (name == "cesium_experiment") return cesium_experiment();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

double to_seconds(const Scenario& s, double t_in_inverse_g) {
    if (!s.physical_units) throw std::logic_error("scenario '" + s.name + "' has no physical units");
    return t_in_inverse_g * s.params.g / s.physical_units->g_rad_per_s;
}

Ket initial_ket(const Scenario& s, const SpaceLayout& layout) {
    const BasisLabel label = parse_basis_label(s.initial_state);
    const auto basis = model_basis(s.model, layout);
    const auto it = std::find(basis.begin(), basis.end(), label);
    if (it == basis.end()) {
        throw std::invalid_argument("initial state " + s.initial_state + " is outside the " +
                                    std::string(to_string(s.model.variant)) + " basis");
    }
    Ket psi = Ket::Zero(static_cast<Index>(basis.size()));
    psi(it - basis.begin()) = 1.0;
    return psi;
}

ObservableContext observable_context(const Scenario& s, const SpaceLayout& layout) {
    return ObservableContext{layout, model_basis(s.model, layout), s.target};
}

Trajectory run_scenario(const Scenario& s, BuildOptions opts) {
    validate(s);
    const SpaceLayout layout(s.params.n_max);
    const Hamiltonian h = make_hamiltonian(s.model, s.params, s.pulses, layout, opts);
    const ObservableSet obs(s.observables, observable_context(s, layout));
    const Ket psi0 = initial_ket(s, layout);
    const Dissipators diss = build_dissipators(s.params, layout);
    if (diss.collapse_ops.empty()) return evolve_schrodinger(h, psi0, s.integrator, obs);
    if (h.dim() != layout.total_dim()) {
        throw std::invalid_argument("loss channels require a model on the full space (Full1 or EffectiveRaman2)");
    }
    return evolve_lindblad(h, psi0 * psi0.adjoint(), diss, s.integrator, obs);
}

SweepResult run_sweep(const Scenario& s, const SweepSpec& spec, int workers) {
    validate(spec);
    validate(s);
    const double t_star = equal_rabi_time(s.pulses);
    if (!(t_star > s.integrator.t_start)) throw std::invalid_argument("equal-Rabi time precedes the start time");

    SweepResult result;
    result.measurement_time = t_star;
    result.rows.resize(spec.grid.size());
    std::vector<RunDiagnostics> diags(spec.grid.size());
    const double omega_scale = std::max(std::abs(s.pulses.atom1.peak), std::abs(s.pulses.atom2.peak));

    run_parallel(spec.grid.size(), workers, [&](std::size_t i) {
        const double x = spec.grid[i];
        SweepRow row{x, 0.0, 0.0};
        if (spec.axis == SweepAxis::kappa_gamma_product) {
            Scenario point = s;
            point.params.kappa = std::sqrt(x * spec.split_ratio) * s.params.g;
            point.params.gamma_atom = std::sqrt(x / spec.split_ratio) * s.params.g;
            const Measurement m = measure_at(point, t_star);
            row.success_rate = m.success_rate;
            row.fidelity = m.fidelity;
            diags[i] = m.diagnostics;
        } else if (spec.mode == FluctuationMode::deterministic) {
            Scenario point = s;
            point.pulses.atom1.peak = nudge_peak(s.pulses.atom1.peak, x * omega_scale);
            const Measurement m = measure_at(point, t_star);
            row.success_rate = m.success_rate;
            row.fidelity = m.fidelity;
            diags[i] = m.diagnostics;
        } else {
            std::mt19937_64 rng(spec.seed + 0x9E3779B97F4A7C15ull * (i + 1));
            std::uniform_real_distribution<double> u(-x, x);
            for (int k = 0; k < spec.samples; ++k) {
                Scenario point = s;
                point.pulses.atom1.peak = nudge_peak(s.pulses.atom1.peak, u(rng) * omega_scale);
                point.pulses.atom2.peak = nudge_peak(s.pulses.atom2.peak, u(rng) * omega_scale);
                const Measurement m = measure_at(point, t_star);
                row.success_rate += m.success_rate;
                row.fidelity += m.fidelity;
                merge(diags[i], m.diagnostics);
            }
            row.success_rate /= spec.samples;
            row.fidelity /= spec.samples;
        }
        result.rows[i] = row;
    });
    for (const auto& d : diags) merge(result.diagnostics, d);
    return result;
}

}  // namespace cqed
