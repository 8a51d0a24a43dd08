#include "cqed/dynamics.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqed {

namespace {

using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

SparseOp to_sparse(const Operator& op) {
    return op.sparseView(0.0, 0.0);
}

// H(t) on the union sparsity pattern of its terms; values are refreshed as
// W · coeffs(t) without touching the pattern.
class SparseGenerator {
public:
    SparseGenerator(const Hamiltonian& h, const Operator& extra_constant, bool adjoint)
        : adjoint_(adjoint) {
        const Index dim = h.dim();
        std::vector<Operator> ops;
        for (const auto& term : h.terms()) {
            ops.push_back(adjoint ? Operator(term.op.adjoint()) : term.op);
            coeffs_.push_back(term.coeff);
        }
        if (extra_constant.size() != 0) {
            ops.push_back(adjoint ? Operator(extra_constant.adjoint()) : extra_constant);
            coeffs_.push_back([](double) { return cplx(1.0, 0.0); });
        }

        std::vector<Eigen::Triplet<cplx>> pattern;
        for (Index r = 0; r < dim; ++r) {
            for (Index c = 0; c < dim; ++c) {
                for (const auto& op : ops) {
                    if (op(r, c) != cplx(0.0, 0.0)) {
                        pattern.emplace_back(r, c, cplx(1.0, 0.0));
                        break;
                    }
                }
            }
        }
        matrix_.resize(dim, dim);
        matrix_.setFromTriplets(pattern.begin(), pattern.end());
        matrix_.makeCompressed();

        weights_ = Eigen::MatrixXcd::Zero(matrix_.nonZeros(), static_cast<Index>(ops.size()));
        Index p = 0;
        for (Index r = 0; r < matrix_.outerSize(); ++r) {
            for (SparseOp::InnerIterator it(matrix_, r); it; ++it, ++p) {
                for (std::size_t k = 0; k < ops.size(); ++k) weights_(p, static_cast<Index>(k)) = ops[k](it.row(), it.col());
            }
        }
        c_ = Eigen::VectorXcd::Zero(static_cast<Index>(ops.size()));
    }

    const SparseOp& at(double t) {
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const cplx c = coeffs_[k](t);
            c_(static_cast<Index>(k)) = adjoint_ ? std::conj(c) : c;
        }
        Eigen::Map<Eigen::VectorXcd>(matrix_.valuePtr(), matrix_.nonZeros()).noalias() = weights_ * c_;
        return matrix_;
    }

private:
    bool adjoint_;
    std::vector<std::function<cplx(double)>> coeffs_;
    SparseOp matrix_;
    Eigen::MatrixXcd weights_;
    Eigen::VectorXcd c_;
};

void record_values(Trajectory& traj, double t, const std::vector<double>& values) {
    traj.times.push_back(t);
    for (std::size_t k = 0; k < values.size(); ++k) {
        traj.series[k].push_back(values[k]);
        if (is_probability_observable(traj.names[k])) {
            const double excursion = std::max({0.0, -values[k], values[k] - 1.0});
            traj.diagnostics.max_population_excursion = std::max(traj.diagnostics.max_population_excursion, excursion);
        }
    }
}

Trajectory empty_trajectory(const ObservableSet& observables) {
    Trajectory traj;
    traj.names = observables.names();
    traj.series.resize(traj.names.size());
    return traj;
}

}  // namespace

void validate(const IntegratorConfig& cfg) {
    if (!(cfg.t_end > cfg.t_start)) throw std::invalid_argument("integrator: t_end must exceed t_start");
    if (!(cfg.record_stride > 0.0)) throw std::invalid_argument("integrator: record_stride must be positive");
    if (cfg.method == IntegratorMethod::rk4_fixed && !(cfg.dt > 0.0)) {
        throw std::invalid_argument("integrator: dt must be positive");
    }
    if (cfg.method == IntegratorMethod::rk45_adaptive) {
        if (!(cfg.tol_abs > 0.0 && cfg.tol_abs <= 1e-2)) throw std::invalid_argument("integrator: tol_abs must lie in (0, 1e-2]");
        if (!(cfg.tol_rel > 0.0 && cfg.tol_rel <= 1e-2)) throw std::invalid_argument("integrator: tol_rel must lie in (0, 1e-2]");
    }
}

std::vector<double> record_times(const IntegratorConfig& cfg) {
    std::vector<double> out;
    const double eps = 1e-9 * cfg.record_stride;
    for (std::size_t k = 0;; ++k) {
        const double t = cfg.t_start + static_cast<double>(k) * cfg.record_stride;
        if (t >= cfg.t_end - eps) break;
        out.push_back(t);
    }
    out.push_back(cfg.t_end);
    return out;
}

const std::vector<double>& Trajectory::observable(std::string_view name) const {
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k] == name) return series[k];
    }
    throw std::out_of_range("trajectory has no observable '" + std::string(name) + "'");
}

Trajectory evolve_schrodinger(const Hamiltonian& h, const Ket& psi0, const IntegratorConfig& cfg,
                              const ObservableSet& observables) {
    if (psi0.size() != h.dim()) throw std::invalid_argument("evolve_schrodinger: state/Hamiltonian dimension mismatch");
    const double norm0 = psi0.norm();
    if (std::abs(norm0 - 1.0) > 1e-9) throw std::invalid_argument("evolve_schrodinger: initial ket is not normalized");

    SparseGenerator gen(h, Operator(), false);
    Trajectory traj = empty_trajectory(observables);

    auto rhs = [&gen](double t, const Ket& y, Ket& dy) {
        dy.noalias() = gen.at(t) * y;
        dy *= cplx(0.0, -1.0);
    };
    auto observe = [&](double t, Ket& y) {
        const double drift = std::abs(y.norm() - norm0);
        traj.diagnostics.max_norm_drift = std::max(traj.diagnostics.max_norm_drift, drift);
        if (drift > kNormDriftAbort) {
            std::ostringstream os;
            os << "norm drift " << drift << " at t = " << t << " exceeds " << kNormDriftAbort
               << "; reduce dt (rk4_fixed) or tol_abs/tol_rel (rk45_adaptive)";
            throw IntegrationError(os.str());
        }
        record_values(traj, t, observables.evaluate(y));
        if (cfg.keep_states) traj.states.push_back(QuantumState::from_ket(y / y.norm()));
    };

    Ket psi = psi0;
    traj.diagnostics.stats = integrate(cfg, psi, rhs, observe);
    traj.final_state = QuantumState::from_ket(psi / psi.norm());
    return traj;
}

Trajectory evolve_lindblad(const Hamiltonian& h, const Density& rho0, const Dissipators& diss,
                           const IntegratorConfig& cfg, const ObservableSet& observables) {
    const Index dim = h.dim();
    if (rho0.rows() != dim || rho0.cols() != dim) {
        throw std::invalid_argument("evolve_lindblad: state/Hamiltonian dimension mismatch");
    }
    QuantumState::from_density(rho0);  // validates the density invariants

    Operator loss = Operator::Zero(dim, dim);
    std::vector<SparseOp> jumps, jumps_adj;
    for (const auto& c : diss.collapse_ops) {
        if (c.rows() != dim || c.cols() != dim) {
            throw std::invalid_argument("evolve_lindblad: collapse operator dimension mismatch");
        }
        loss += c.adjoint() * c;
        jumps.push_back(to_sparse(c));
        jumps_adj.push_back(to_sparse(c.adjoint()));
    }
    // Non-Hermitian part: H − (i/2) Σ c†c.
    const Operator nonhermitian = cplx(0.0, -0.5) * loss;
    SparseGenerator gen(h, nonhermitian, false);
    SparseGenerator gen_adj(h, nonhermitian, true);

    Trajectory traj = empty_trajectory(observables);
    Density scratch = Density::Zero(dim, dim);

    auto rhs = [&](double t, const Density& rho, Density& drho) {
        scratch.noalias() = gen.at(t) * rho;
        drho.noalias() = rho * gen_adj.at(t);
        drho = cplx(0.0, 1.0) * drho - cplx(0.0, 1.0) * scratch;
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            scratch.noalias() = jumps[k] * rho;
            drho.noalias() += scratch * jumps_adj[k];
        }
    };
    auto observe = [&](double t, Density& rho) {
        auto& d = traj.diagnostics;
        d.max_hermiticity_residue = std::max(d.max_hermiticity_residue, hermiticity_residue(rho));
        rho = (0.5 * (rho + rho.adjoint())).eval();
        const DensityCheck c = check_density(rho);
        d.max_trace_drift = std::max(d.max_trace_drift, c.trace_error);
        d.min_eigenvalue = std::min(d.min_eigenvalue, c.min_eigenvalue);
        if (c.trace_error > kTraceDriftAbort || c.min_eigenvalue < kNegativityAbort) {
            std::ostringstream os;
            os << "density matrix invariants violated at t = " << t << ": trace drift " << c.trace_error
               << ", min eigenvalue " << c.min_eigenvalue << "; reduce dt or tolerances";
            throw IntegrationError(os.str());
        }
        record_values(traj, t, observables.evaluate(rho));
        if (cfg.keep_states) traj.states.push_back(QuantumState::from_density(rho));
    };

    Density rho = rho0;
    traj.diagnostics.stats = integrate(cfg, rho, rhs, observe);
    traj.final_state = QuantumState::from_density(rho);
    return traj;
}

}  // namespace cqed
