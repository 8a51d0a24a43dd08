// observables.hpp: Named scalar observables recorded along a trajectory.
//
// Registered names:
//   population:|ij;n>   basis-state population
//   photon_number       <a†a>
//   excited_total       <σ¹_ee> + <σ²_ee>
//   success_rate        Tr[ρ (|ψ><ψ| ⊗ I)] against the context target
//   fidelity            <ψ|Tr_cavity ρ|ψ> against the context target
//   fidelity:<label>    same, against a named target (bell_plus, epr_minus_i)

#pragma once

#include "cqed/analysis.hpp"
#include "cqed/hilbert.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

struct ObservableContext {
    SpaceLayout layout{2};
    // Label of each basis index of the space the state lives in; a reduced
    // model's state is embedded into `layout` through these labels.
    std::vector<BasisLabel> basis;
    TargetState target{bell_plus()};

    static ObservableContext full(const SpaceLayout& layout, TargetState target = bell_plus());
};

// True for observables whose values are probabilities (bounded by [0, 1]).
bool is_probability_observable(std::string_view name);

class ObservableSet {
public:
    ObservableSet(std::vector<std::string> names, ObservableContext ctx);

    const std::vector<std::string>& names() const noexcept { return names_; }
    const ObservableContext& context() const noexcept { return ctx_; }

    std::vector<double> evaluate(const Ket& psi) const;
    std::vector<double> evaluate(const Density& rho) const;

    // Embeds a state of the context's basis into the full layout.
    Density embed(const Density& rho) const;
    Density embed(const Ket& psi) const;

private:
    using Eval = std::function<double(const Density&)>;
    std::vector<std::string> names_;
    std::vector<Eval> evals_;
    ObservableContext ctx_;
    std::vector<Index> embedding_;
};

double record_observable(const QuantumState& state, std::string_view name, const ObservableContext& ctx);

}  // namespace cqed
