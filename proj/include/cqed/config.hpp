// config.hpp: JSON run configuration (schema version 1).
//
//   {
//     "schema_version": 1,
//     "scenario": "fig2" | { inline scenario document },
//     "overrides":  { "delta": 40, "kappa": 0, ... },       // optional
//     "integrator": { "method": "rk4_fixed", "dt": 1e-3 },  // optional, partial
//     "observables": [ "photon_number", ... ],              // optional
//     "sweep": { "axis": "kappa_gamma_product", "grid": [...] },  // optional
//     "workers": 4, "seed": 20080521                        // optional
//   }
//
// Inline scenarios carrying a "physical_units" block with input_units
// "physical" give rates in rad/s and times in seconds; everything else is in
// units of g. A meta.json written by the CLI is itself a valid config.

#pragma once

#include "cqed/scenarios.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cqed {

inline constexpr int kConfigSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Scenario scenario;
    std::optional<SweepSpec> sweep;
    int workers{1};
    std::uint64_t seed{kDefaultSeed};
};

// Throws ConfigError naming the offending key.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

// Fully resolved form; parse_run_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& c);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json sweep_to_json(const SweepSpec& s);
SweepSpec sweep_from_json(const nlohmann::json& doc, std::uint64_t default_seed);

}  // namespace cqed
