// scenarios.hpp: Named presets (figure reproductions, experimental parameter
// set) and the sweep driver behind the robustness curves.

#pragma once

#include "cqed/analysis.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

inline constexpr std::uint64_t kDefaultSeed = 20080521;

enum class SweepAxis { kappa_gamma_product, rabi_fluctuation };
enum class FluctuationMode { deterministic, sampled };

std::string_view to_string(SweepAxis a);
std::string_view to_string(FluctuationMode m);
SweepAxis parse_sweep_axis(std::string_view s);
FluctuationMode parse_fluctuation_mode(std::string_view s);

struct SweepSpec {
    SweepAxis axis{SweepAxis::kappa_gamma_product};
    std::vector<double> grid;
    FluctuationMode mode{FluctuationMode::deterministic};
    int samples{100};          // draws per grid point in sampled mode
    double split_ratio{1.0};   // κ/Γ at fixed κΓ/g²
    std::uint64_t seed{kDefaultSeed};
};

void validate(const SweepSpec& spec);

struct PhysicalUnits {
    double g_rad_per_s{0.0};
};

struct Scenario {
    std::string name;
    SystemParams params;
    PulsePair pulses;
    std::string initial_state{"|01;0>"};
    ModelSelector model;
    IntegratorConfig integrator;
    std::vector<std::string> observables;
    TargetState target{bell_plus()};
    std::optional<PhysicalUnits> physical_units;
    std::optional<SweepSpec> sweep;
};

void validate(const Scenario& s);

std::vector<std::string> preset_names();
// Populations of |01;0>, |10;0>, |11;1>, photon number, excited population, P and F.
std::vector<std::string> default_observables();
Scenario preset(std::string_view name);

// Seconds corresponding to a time in units of 1/g; requires physical units.
double to_seconds(const Scenario& s, double t_in_inverse_g);

Ket initial_ket(const Scenario& s, const SpaceLayout& layout);
ObservableContext observable_context(const Scenario& s, const SpaceLayout& layout);

// Lindblad evolution when any loss channel is active, Schrödinger otherwise.
Trajectory run_scenario(const Scenario& s, BuildOptions opts = {});

struct SweepRow {
    double axis_value{0.0};
    double success_rate{0.0};
    double fidelity{0.0};
};

struct SweepResult {
    std::vector<SweepRow> rows;
    RunDiagnostics diagnostics;  // worst case over all runs
    double measurement_time{0.0};
};

// Success rate and fidelity evaluated at the equal-Rabi time of the nominal pulses.
SweepResult run_sweep(const Scenario& s, const SweepSpec& spec, int workers = 1);

}  // namespace cqed
