// Acceptance runner: one PASS/FAIL line per criterion. Tolerances are pinned
// below; `--only N` runs a single criterion.

#include "cqed/analysis.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/model.hpp"
#include "cqed/scenarios.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cqed;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20080521;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double at_time(const Trajectory& tr, const std::string& name, double t) {
    const auto& series = tr.observable(name);
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        if (std::abs(tr.times[i] - t) < 1e-9) return series[i];
    throw std::runtime_error("time not recorded: " + std::to_string(t));
}

const std::vector<std::string> kGround = {"population:|01;0>", "population:|10;0>", "population:|11;1>"};

double max_series_diff(const Trajectory& a, const Trajectory& b) {
    double worst = 0.0;
    for (const auto& n : kGround) {
        const auto& x = a.observable(n);
        const auto& y = b.observable(n);
        for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

Scenario unitary_fig2(double delta = 20.0) {
    Scenario s = preset("fig2");
    s.params.kappa = 0.0;
    s.params.gamma_atom = 0.0;
    s.params.delta = delta;
    s.observables = kGround;
    return s;
}

// ---------------------------------------------------------------------------

Verdict ac1() {
    constexpr double kBound = 1e-3, kSeconds = 60.0;
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory tr = run_scenario(preset("fig2"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double excited = max_abs(tr.observable("excited_total"));
    const double photon = max_abs(tr.observable("photon_number"));
    return {excited < kBound && photon < kBound && secs <= kSeconds,
            "max excited " + fmt(excited) + ", max photon " + fmt(photon) + " (bound " + fmt(kBound) + "); runtime " +
                fmt(secs) + " s (limit " + fmt(kSeconds) + " s)"};
}

Verdict ac2() {
    const Scenario s = preset("fig2");
    const Trajectory tr = run_scenario(s);
    const double p01_start = at_time(tr, "population:|01;0>", 0.0);
    const double p01_end = at_time(tr, "population:|01;0>", 600.0);
    const double p10_end = at_time(tr, "population:|10;0>", 600.0);

    Scenario at_star = s;
    const double t_star = equal_rabi_time(s.pulses);
    at_star.integrator.t_end = t_star;
    at_star.integrator.record_stride = t_star;
    at_star.observables = {"success_rate"};
    const double p_star = run_scenario(at_star).observable("success_rate").back();

    const bool pass = p01_start >= 0.99 && p01_end <= 0.1 && p10_end >= 0.9 && p_star >= 0.95;
    return {pass, "|01;0> " + fmt(p01_start) + " -> " + fmt(p01_end) + " (need >=0.99 -> <=0.1); |10;0>(600) " +
                      fmt(p10_end) + " (need >=0.9); P(t*=" + fmt(t_star) + ") " + fmt(p_star) + " (need >=0.95)"};
}

Verdict ac3() {
    constexpr double kLossy = 0.995, kUnitary = 0.999, kTol = 0.004;
    const Scenario s = preset("fig3a");
    const SweepResult r = run_sweep(s, *s.sweep, 1);
    bool pass = true;
    std::string detail;
    for (const auto& row : r.rows) {
        if (row.axis_value == 0.0) {
            pass = pass && row.fidelity >= kUnitary - kTol;
            detail += "unitary F " + fmt(row.fidelity) + " (need >=" + fmt(kUnitary - kTol) + ")";
        } else if (row.axis_value <= 1e-3) {
            pass = pass && row.fidelity >= kLossy;
            detail += "; F(kg=" + fmt(row.axis_value) + ") " + fmt(row.fidelity) + " (need >=" + fmt(kLossy) + ")";
        }
    }
    return {pass, detail};
}

Verdict ac4() {
    constexpr double kMin = 0.90;
    Scenario s = preset("fig3b");
    SweepSpec spec = *s.sweep;
    spec.mode = FluctuationMode::deterministic;
    spec.grid = {0.1};
    const double f = run_sweep(s, spec, 1).rows[0].fidelity;
    return {f >= kMin, "F(dOmega/Omega=0.1) " + fmt(f) + " (need >=" + fmt(kMin) + ")"};
}

Verdict ac5() {
    constexpr double kTol = 1e-8;
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> theta_dist(0.01, 0.2), t_dist(0.0, 200.0);
    const double w1 = 2.0, w2 = 1.0;
    auto run = [&](double theta, double t) {
        Scenario s = preset("raman_eq5");
        s.pulses = {PulseEnvelope::constant(w1), PulseEnvelope::constant(w2)};
        s.params.delta = w1 * w2 / (2.0 * theta);
        s.integrator.t_end = std::max(t, 1e-6);
        s.integrator.record_stride = s.integrator.t_end;
        s.observables = {"fidelity:epr_minus_i"};
        return run_scenario(s);
    };
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double theta = theta_dist(rng);
        const Trajectory tr = run(theta, t_dist(rng));
        const double t = tr.times.back();
        const Ket& psi = tr.final_state->ket();
        worst = std::max(worst, std::abs(psi(0) - cplx(std::cos(theta * t), 0.0)));
        worst = std::max(worst, std::abs(psi(1) - cplx(0.0, -std::sin(theta * t))));
    }
    const double theta = 0.05;
    const double f = run(theta, std::numbers::pi / 4.0 / theta).observable("fidelity:epr_minus_i").back();
    return {worst < kTol && std::abs(f - 1.0) < kTol,
            "max amplitude error " + fmt(worst) + " over 50 pairs; |F(pi/4)-1| " + fmt(std::abs(f - 1.0)) +
                " (tol " + fmt(kTol) + ")"};
}

Verdict ac6() {
    constexpr double kTol = 0.05;
    auto discrepancy = [](double delta) {
        const Scenario full = unitary_fig2(delta);
        Scenario eff = full;
        eff.model.variant = ModelVariant::Stirap7;
        return max_series_diff(run_scenario(full), run_scenario(eff));
    };
    const double d20 = discrepancy(20.0), d40 = discrepancy(40.0);
    return {d20 < kTol && d40 < d20,
            "max population difference " + fmt(d20) + " at delta=20 (tol " + fmt(kTol) + "), " + fmt(d40) +
                " at delta=40 (must shrink)"};
}

Verdict ac7() {
    constexpr double kTol = 1e-12;
    const Scenario fig2 = preset("fig2");
    std::mt19937_64 rng(kSeed + 7);
    std::uniform_real_distribution<double> amp(1e-3, 3.0), time(0.0, 600.0);
    double worst = 0.0, leak = 0.0;
    for (int k = 0; k < 100; ++k) {
        Operator h;
        DarkState d;
        if (k % 2 == 0) {
            const double w1 = amp(rng), w2 = -amp(rng);
            const PulsePair p{PulseEnvelope::constant(w1), PulseEnvelope::constant(w2)};
            h = hamiltonian_stirap(fig2.params, p, 0.0);
            d = dark_state(w1, w2);
        } else {
            const double t = time(rng);
            h = hamiltonian_stirap(fig2.params, fig2.pulses, t);
            d = dark_state(fig2.pulses, t);
        }
        worst = std::max(worst, (h * d.ket).norm());
        leak = std::max(leak, std::abs(d.ket(2)));
    }
    return {worst < kTol && leak < kTol,
            "max ||H7 D|| " + fmt(worst) + ", max |<11;1|D>| " + fmt(leak) + " (tol " + fmt(kTol) + ")"};
}

Verdict ac8() {
    constexpr double kTol = 1e-6;
    auto decay = [](const SystemParams& p, const std::string& initial, double t_end,
                    std::vector<std::string> names) {
        const SpaceLayout layout(p.n_max);
        const Ket psi0 = basis_ket(layout, parse_basis_label(initial));
        IntegratorConfig cfg;
        cfg.t_end = t_end;
        cfg.record_stride = t_end / 100.0;
        cfg.tol_abs = 1e-14;
        cfg.tol_rel = 1e-12;
        return evolve_lindblad(Hamiltonian::constant(Operator::Zero(layout.total_dim(), layout.total_dim())),
                               psi0 * psi0.adjoint(), build_dissipators(p, layout), cfg,
                               ObservableSet(std::move(names), ObservableContext::full(layout)));
    };
    SystemParams cav;
    cav.kappa = 0.1;
    const Trajectory tc = decay(cav, "|00;1>", 5.0 / cav.kappa, {"photon_number"});
    double e_cav = 0.0;
    for (std::size_t i = 0; i < tc.times.size(); ++i) {
        const double exact = std::exp(-2.0 * cav.kappa * tc.times[i]);
        e_cav = std::max(e_cav, std::abs(tc.series[0][i] - exact) / exact);
    }
    SystemParams atom;
    atom.gamma_atom = 0.1;
    const Trajectory ta =
        decay(atom, "|e0;0>", 5.0 / atom.gamma_atom, {"population:|e0;0>", "population:|00;0>", "population:|10;0>"});
    double e_atom = 0.0, e_branch = 0.0;
    for (std::size_t i = 0; i < ta.times.size(); ++i) {
        const double exact = std::exp(-atom.gamma_atom * ta.times[i]);
        e_atom = std::max(e_atom, std::abs(ta.series[0][i] - exact) / exact);
        const double half = 0.5 * (1.0 - exact);
        e_branch = std::max({e_branch, std::abs(ta.series[1][i] - half), std::abs(ta.series[2][i] - half)});
    }
    return {e_cav < kTol && e_atom < kTol && e_branch < kTol,
            "cavity rel err " + fmt(e_cav) + ", atom rel err " + fmt(e_atom) + ", branching err " + fmt(e_branch) +
                " (tol " + fmt(kTol) + ")"};
}

Verdict ac9() {
    constexpr double kTrace = 1e-8, kNorm = 1e-9, kEig = -1e-8, kHerm = 1e-10, kPop = 1e-6;
    std::vector<std::pair<std::string, RunDiagnostics>> runs;
    for (const char* name : {"fig2", "raman_eq5", "cesium_experiment"})
        runs.emplace_back(name, run_scenario(preset(name)).diagnostics);
    for (const char* name : {"fig3a", "fig3b"}) {
        const Scenario s = preset(name);
        runs.emplace_back(name, run_sweep(s, *s.sweep, 1).diagnostics);
    }
    const Trajectory base = run_scenario(unitary_fig2());
    runs.emplace_back("fig2 unitary", base.diagnostics);

    bool pass = true;
    std::string detail;
    for (const auto& [name, d] : runs) {
        const bool ok = d.max_trace_drift < kTrace && d.max_norm_drift < kNorm && d.min_eigenvalue >= kEig &&
                        d.max_hermiticity_residue < kHerm;
        pass = pass && ok;
        if (!ok) {
            detail += name + ": trace " + fmt(d.max_trace_drift) + " norm " + fmt(d.max_norm_drift) + " eig " +
                      fmt(d.min_eigenvalue) + " herm " + fmt(d.max_hermiticity_residue) + "; ";
        }
    }
    double trace = 0, norm = 0, eig = 1, herm = 0;
    for (const auto& [name, d] : runs) {
        trace = std::max(trace, d.max_trace_drift);
        norm = std::max(norm, d.max_norm_drift);
        eig = std::min(eig, d.min_eigenvalue);
        herm = std::max(herm, d.max_hermiticity_residue);
    }
    detail += "worst over " + std::to_string(runs.size()) + " runs: trace " + fmt(trace) + " (<" + fmt(kTrace) +
              "), norm " + fmt(norm) + " (<" + fmt(kNorm) + "), min eig " + fmt(eig) + " (>=" + fmt(kEig) +
              "), herm " + fmt(herm) + " (<" + fmt(kHerm) + ")";

    Scenario frame = unitary_fig2();
    frame.model.frame = Frame::interaction_oscillatory;
    const double d_frame = max_series_diff(base, run_scenario(frame));
    Scenario wider = unitary_fig2();
    wider.params.n_max = 3;
    const double d_trunc = max_series_diff(base, run_scenario(wider));
    pass = pass && d_frame < kPop && d_trunc < kPop;
    detail += "; frame diff " + fmt(d_frame) + ", truncation diff " + fmt(d_trunc) + " (tol " + fmt(kPop) + ")";
    return {pass, detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CQED_SIM_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict ac10() {
    const fs::path dir = fs::temp_directory_path() / "cqed_acceptance_ac10";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "fig2.json") << R"({"schema_version": 1, "scenario": "fig2"})";
    std::ofstream(dir / "fig3b.json") << R"({"schema_version": 1, "scenario": "fig3b"})";
    std::ofstream(dir / "sampled.json") << R"({"schema_version": 1, "scenario": "fig3b", "seed": 7,
        "sweep": {"axis": "rabi_fluctuation", "grid": [0, 0.05, 0.1], "mode": "sampled", "samples": 4}})";

    int bad_exit = 0;
    auto cli = [&](const std::string& args) { bad_exit += run_cli(args) != 0; };
    const std::string d = dir.string();
    cli("simulate --config " + d + "/fig2.json --out " + d + "/s1");
    cli("simulate --config " + d + "/fig2.json --out " + d + "/s2");
    cli("sweep --config " + d + "/fig3b.json --workers 1 --out " + d + "/w1");
    cli("sweep --config " + d + "/fig3b.json --workers 3 --out " + d + "/w3");
    cli("sweep --config " + d + "/sampled.json --workers 1 --out " + d + "/r1");
    cli("sweep --config " + d + "/sampled.json --workers 2 --out " + d + "/r2");

    const std::string s1 = slurp(dir / "s1" / "trajectory.csv");
    const bool simulate_same = !s1.empty() && s1 == slurp(dir / "s2" / "trajectory.csv");
    const std::string w1 = slurp(dir / "w1" / "sweep.csv");
    const bool workers_same = !w1.empty() && w1 == slurp(dir / "w3" / "sweep.csv");
    const std::string r1 = slurp(dir / "r1" / "sweep.csv");
    const bool sampled_same = !r1.empty() && r1 == slurp(dir / "r2" / "sweep.csv");
    return {bad_exit == 0 && simulate_same && workers_same && sampled_same,
            std::string("simulate rerun identical: ") + (simulate_same ? "yes" : "no") +
                ", deterministic sweep workers 1 vs 3 identical: " + (workers_same ? "yes" : "no") +
                ", seeded sampled sweep workers 1 vs 2 identical: " + (sampled_same ? "yes" : "no") +
                ", failed invocations: " + std::to_string(bad_exit)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"excited-population bound", ac1}, {"STIRAP transfer", ac2},        {"fidelity headline", ac3},
        {"robustness to Rabi fluctuation", ac4}, {"Raman oracle", ac5},    {"effective-model validity", ac6},
        {"dark-state nullity", ac7},       {"Lindblad analytic decay", ac8}, {"structural invariants", ac9},
        {"determinism", ac10},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--only N]\n";
            return 2;
        }
    }
    if (only < 0 || only > int(criteria.size())) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (only != 0 && int(k) + 1 != only) continue;
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        failures += !v.pass;
        std::cout << "AC" << k + 1 << " " << (v.pass ? "PASS" : "FAIL") << " " << criteria[k].first << ": " << v.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
