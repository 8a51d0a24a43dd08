// cqed_sim: run cavity-QED entanglement scenarios, sweeps and self-checks.

#include "cqed/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Two-atom cavity QED entanglement simulator"};
    app.set_version_flag("--version", std::string(cqed::kToolVersion));
    app.require_subcommand(1);

    cqed::CommandOptions opts;
    int workers = 0;
    std::uint64_t seed = 0;
    int nmax = 0;
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON run configuration")->required();
        sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--workers", workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Seed for sampled fluctuation mode");
        sub->add_option("--nmax", nmax, "Cavity Fock truncation")->check(CLI::PositiveNumber);
    };
    CLI::App* simulate = app.add_subcommand("simulate", "Evolve one scenario and write trajectory.csv");
    add_run_flags(simulate);
    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write sweep.csv");
    add_run_flags(sweep);

    cqed::ValidateOptions vopts;
    CLI::App* validate = app.add_subcommand("validate", "Run the invariant and oracle checks");
    validate->add_option("--delta", vopts.delta, "Detuning for the effective-vs-full comparison")
        ->capture_default_str();
    validate->add_flag("--inject-fault", vopts.inject_stirap_sign_flip,
                       "Flip the sign of the second STIRAP coupling (mutation test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cqed::kExitConfig;
    }

    for (CLI::App* sub : {simulate, sweep}) {
        if (sub->count("--workers")) opts.workers = workers;
        if (sub->count("--seed")) opts.seed = seed;
        if (sub->count("--nmax")) opts.nmax = nmax;
    }

    if (*simulate) return cqed::cmd_simulate(opts, std::cout, std::cerr);
    if (*sweep) return cqed::cmd_sweep(opts, std::cout, std::cerr);
    return cqed::cmd_validate(vopts, std::cout, std::cerr);
}
