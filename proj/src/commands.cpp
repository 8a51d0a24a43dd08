#include "cqed/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cqed {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Trace, norm and positivity limits reported in meta.json.
constexpr double kReportNormDrift = 1e-9;
constexpr double kReportTraceDrift = 1e-8;
constexpr double kReportMinEigenvalue = -1e-8;
constexpr double kReportHermiticity = 1e-10;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("output directory '" + dir + "' is not writable");
    return fs::path(dir);
}

// Fields not exercised by a run keep their neutral defaults and pass.
json invariant_summary(const RunDiagnostics& d) {
    json j;
    j["max_norm_drift"] = d.max_norm_drift;
    j["max_trace_drift"] = d.max_trace_drift;
    j["min_eigenvalue"] = d.min_eigenvalue;
    j["max_hermiticity_residue"] = d.max_hermiticity_residue;
    j["max_population_excursion"] = d.max_population_excursion;
    j["steps"] = d.stats.steps;
    j["rejected_steps"] = d.stats.rejected;
    j["rhs_evaluations"] = d.stats.rhs_evals;
    j["passed"] = d.max_norm_drift < kReportNormDrift && d.max_trace_drift < kReportTraceDrift &&
                  d.min_eigenvalue >= kReportMinEigenvalue && d.max_hermiticity_residue < kReportHermiticity &&
                  d.max_population_excursion < 1e-8;
    return j;
}

json implementer_choices(const RunConfig& c) {
    json j = json::array();
    j.push_back("sign convention: Omega1 > 0, Omega2 = -Omega1/xi");
    j.push_back("cavity collapse operator sqrt(2 kappa) a; atomic channels sqrt(Gamma/2) sigma_je");
    if (c.sweep) {
        if (c.sweep->axis == SweepAxis::kappa_gamma_product) {
            j.push_back("kappa*Gamma/g^2 = x split as kappa = sqrt(x r) g, Gamma = sqrt(x / r) g with r = split_ratio");
        } else if (c.sweep->mode == FluctuationMode::deterministic) {
            j.push_back("fluctuation: Omega1 peak offset by +delta * max(|Omega1|, |Omega2|)");
        } else {
            j.push_back("fluctuation: both peaks offset by independent uniform draws on [-delta, delta] * max|Omega|, "
                        "averaged over samples");
        }
        j.push_back("P and F measured at the equal-Rabi time of the unperturbed pulses");
        j.push_back("sweep grids are implementer choices");
    }
    return j;
}

json base_meta(const RunConfig& c, const std::string& command) {
    json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["command"] = command;
    meta["config"] = to_json(c);
    meta["warnings"] = regime_warnings(c.scenario.params, c.scenario.pulses, c.scenario.model.variant);
    meta["implementer_choices"] = implementer_choices(c);
    return meta;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IntegrationError& e) {
        err << "integration failure: " << e.what() << "\n";
        return kExitIntegration;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "integration failure: " << e.what() << "\n";
        return kExitIntegration;
    }
}

RunConfig load(const CommandOptions& opts) {
    if (opts.config_path.empty()) throw ConfigError("missing scenario (no --config given)");
    RunConfig c = load_run_config(opts.config_path);
    apply_overrides(c, opts);
    return c;
}

}  // namespace

void apply_overrides(RunConfig& c, const CommandOptions& opts) {
    if (opts.workers) {
        if (*opts.workers < 1) throw ConfigError("--workers must be >= 1");
        c.workers = *opts.workers;
    }
    if (opts.seed) {
        c.seed = *opts.seed;
        if (c.sweep) c.sweep->seed = *opts.seed;
    }
    if (opts.nmax) {
        c.scenario.params.n_max = *opts.nmax;
        try {
            validate(c.scenario);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("--nmax: ") + e.what());
        }
    }
}

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig c = load(opts);
        const fs::path dir = prepare_out_dir(opts.out_dir);
        for (const auto& w : regime_warnings(c.scenario.params, c.scenario.pulses, c.scenario.model.variant)) {
            err << "warning: " << w << "\n";
        }
        const Trajectory traj = run_scenario(c.scenario);

        std::ostringstream csv;
        csv << "t";
        for (const auto& n : traj.names) csv << "," << n;
        csv << "\n";
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            csv << fmt(traj.times[i]);
            for (const auto& col : traj.series) csv << "," << fmt(col[i]);
            csv << "\n";
        }

        json meta = base_meta(c, "simulate");
        meta["invariants"] = invariant_summary(traj.diagnostics);
        write_file(dir / "trajectory.csv", csv.str());
        write_file(dir / "meta.json", meta.dump(2) + "\n");
        out << "wrote " << (dir / "trajectory.csv").string() << " (" << traj.times.size() << " rows)\n";
        return int(kExitOk);
    });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig c = load(opts);
        if (!c.sweep) throw ConfigError("missing key 'sweep' (scenario defines no sweep)");
        const fs::path dir = prepare_out_dir(opts.out_dir);
        const SweepResult res = run_sweep(c.scenario, *c.sweep, c.workers);

        std::ostringstream csv;
        csv << to_string(c.sweep->axis) << ",P,F\n";
        for (const auto& row : res.rows) {
            csv << fmt(row.axis_value) << "," << fmt(row.success_rate) << "," << fmt(row.fidelity) << "\n";
        }

        json meta = base_meta(c, "sweep");
        meta["measurement_time"] = res.measurement_time;
        meta["invariants"] = invariant_summary(res.diagnostics);
        write_file(dir / "sweep.csv", csv.str());
        write_file(dir / "meta.json", meta.dump(2) + "\n");
        out << "wrote " << (dir / "sweep.csv").string() << " (" << res.rows.size() << " rows)\n";
        return int(kExitOk);
    });
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err) {
    ValidationReport report;
    try {
        report = run_validation(opts);
    } catch (const std::exception& e) {
        err << "validation aborted: " << e.what() << "\n";
        return kExitValidation;
    }
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    std::size_t failed = 0;
    for (const auto& c : report.checks) {
        out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        if (!c.passed) ++failed;
    }
    out << report.checks.size() - failed << "/" << report.checks.size() << " checks passed\n";
    return failed == 0 ? kExitOk : kExitValidation;
}

}  // namespace cqed
