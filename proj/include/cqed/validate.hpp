// validate.hpp: Self-check suite: structural invariants of every module plus
// agreement with closed-form oracles and between model levels.

#pragma once

#include <string>
#include <vector>

namespace cqed {

struct ValidateOptions {
    double delta{20.0};                   // detuning used by the effective-vs-full comparison
    bool inject_stirap_sign_flip{false};  // mutation hook: breaks the dark state on purpose
};

struct CheckResult {
    std::string name;
    bool passed{false};
    double value{0.0};
    double threshold{0.0};
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

ValidationReport run_validation(const ValidateOptions& opts = {});

}  // namespace cqed
