// commands.hpp: The simulate / sweep / validate commands behind cqed_sim.

#pragma once

#include "cqed/config.hpp"
#include "cqed/validate.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cqed {

inline constexpr const char* kToolName = "cqed_sim";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIntegration = 2, kExitValidation = 3 };

// Command-line overrides applied on top of the config file.
struct CommandOptions {
    std::string config_path;
    std::string out_dir{"."};
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::optional<int> nmax;
};

void apply_overrides(RunConfig& c, const CommandOptions& opts);

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);

int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace cqed
