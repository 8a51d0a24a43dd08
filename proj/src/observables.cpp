#include "cqed/observables.hpp"

#include <stdexcept>

namespace cqed {

namespace {

constexpr std::string_view kPopulationPrefix = "population:";
constexpr std::string_view kFidelityPrefix = "fidelity:";

}  // namespace

ObservableContext ObservableContext::full(const SpaceLayout& layout, TargetState target) {
    ObservableContext ctx{layout, {}, std::move(target)};
    ctx.basis.reserve(static_cast<std::size_t>(layout.total_dim()));
    for (Index i = 0; i < layout.total_dim(); ++i) ctx.basis.push_back(layout.label(i));
    return ctx;
}

bool is_probability_observable(std::string_view name) {
    return name.starts_with(kPopulationPrefix) || name == "success_rate" || name == "fidelity" ||
           name.starts_with(kFidelityPrefix);
}

ObservableSet::ObservableSet(std::vector<std::string> names, ObservableContext ctx)
    : names_(std::move(names)), ctx_(std::move(ctx)) {
    const SpaceLayout layout = ctx_.layout;
    embedding_.reserve(ctx_.basis.size());
    for (const auto& label : ctx_.basis) embedding_.push_back(layout.index(label));

    for (const auto& name : names_) {
        std::string_view n = name;
        if (n.starts_with(kPopulationPrefix)) {
            const BasisLabel label = parse_basis_label(n.substr(kPopulationPrefix.size()));
            if (label.photons > layout.n_max()) {
                throw std::invalid_argument("observable '" + name + "' exceeds the cavity truncation");
            }
            const Index idx = layout.index(label);
            evals_.push_back([idx](const Density& rho) { return rho(idx, idx).real(); });
        } else if (n == "photon_number") {
            evals_.push_back([layout](const Density& rho) {
                double s = 0.0;
                for (Index i = 0; i < layout.total_dim(); ++i) s += layout.label(i).photons * rho(i, i).real();
                return s;
            });
        } else if (n == "excited_total") {
            evals_.push_back([layout](const Density& rho) {
                double s = 0.0;
                for (Index i = 0; i < layout.total_dim(); ++i) {
                    const BasisLabel l = layout.label(i);
                    const int count = (l.atom1 == Level::e) + (l.atom2 == Level::e);
                    s += count * rho(i, i).real();
                }
                return s;
            });
        } else if (n == "success_rate") {
            evals_.push_back([layout, target = ctx_.target](const Density& rho) {
                return success_rate(rho, layout, target);
            });
        } else if (n == "fidelity" || n.starts_with(kFidelityPrefix)) {
            const TargetState target =
                n == "fidelity" ? ctx_.target : parse_target(n.substr(kFidelityPrefix.size()));
            evals_.push_back([layout, target](const Density& rho) {
                return fidelity(partial_trace_cavity(rho, layout), target);
            });
        } else {
            throw std::invalid_argument("unknown observable '" + name + "'");
        }
    }
}

Density ObservableSet::embed(const Density& rho) const {
    if (rho.rows() != static_cast<Index>(embedding_.size())) {
        throw std::invalid_argument("observable context basis does not match state dimension");
    }
    const Index dim = ctx_.layout.total_dim();
    if (rho.rows() == dim) {
        bool identity = true;
        for (Index i = 0; i < dim && identity; ++i) identity = embedding_[static_cast<std::size_t>(i)] == i;
        if (identity) return rho;
    }
    Density out = Density::Zero(dim, dim);
    for (std::size_t a = 0; a < embedding_.size(); ++a) {
        for (std::size_t b = 0; b < embedding_.size(); ++b) {
            out(embedding_[a], embedding_[b]) = rho(static_cast<Index>(a), static_cast<Index>(b));
        }
    }
    return out;
}

Density ObservableSet::embed(const Ket& psi) const { return embed(Density(psi * psi.adjoint())); }

std::vector<double> ObservableSet::evaluate(const Density& rho) const {
    const Density full = embed(rho);
    std::vector<double> out;
    out.reserve(evals_.size());
    for (const auto& f : evals_) out.push_back(f(full));
    return out;
}

std::vector<double> ObservableSet::evaluate(const Ket& psi) const { return evaluate(Density(psi * psi.adjoint())); }

double record_observable(const QuantumState& state, std::string_view name, const ObservableContext& ctx) {
    const ObservableSet set({std::string(name)}, ctx);
    return set.evaluate(state.to_density()).front();
}

}  // namespace cqed
