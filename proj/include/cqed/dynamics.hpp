// dynamics.hpp: Schrödinger and Lindblad time evolution with trajectory recording.

#pragma once

#include "cqed/hilbert.hpp"
#include "cqed/integrators.hpp"
#include "cqed/model.hpp"
#include "cqed/observables.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

// Abort thresholds. Runs that cross them throw IntegrationError.
inline constexpr double kNormDriftAbort = 1e-6;
inline constexpr double kTraceDriftAbort = 1e-6;
inline constexpr double kNegativityAbort = -1e-6;

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunDiagnostics {
    double max_norm_drift{0.0};           // kets: max |‖ψ‖ − 1|
    double max_trace_drift{0.0};          // densities: max |Tr ρ − 1|
    double min_eigenvalue{1.0};           // densities: smallest eigenvalue seen
    double max_hermiticity_residue{0.0};  // densities: before symmetrization
    double max_population_excursion{0.0}; // distance of probability observables outside [0, 1]
    StepStats stats;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;  // series[k][i]: observable k at times[i]
    std::vector<QuantumState> states;         // filled only when keep_states is set
    std::optional<QuantumState> final_state;
    RunDiagnostics diagnostics;

    const std::vector<double>& observable(std::string_view name) const;
};

Trajectory evolve_schrodinger(const Hamiltonian& h, const Ket& psi0, const IntegratorConfig& cfg,
                              const ObservableSet& observables);

Trajectory evolve_lindblad(const Hamiltonian& h, const Density& rho0, const Dissipators& diss,
                           const IntegratorConfig& cfg, const ObservableSet& observables);

}  // namespace cqed
