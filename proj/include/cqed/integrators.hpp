// integrators.hpp: Fixed-step RK4 and adaptive Dormand–Prince 5(4) for
// Eigen-valued states (kets or density matrices).
//
// Both drivers stop exactly on every record time t_start + k·stride and on
// t_end, invoking the observer there. The observer may modify the state
// (the Lindblad driver symmetrizes ρ at recorded steps).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cqed {

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
    IntegratorMethod method{IntegratorMethod::rk45_adaptive};
    double dt{1e-3};
    double tol_abs{1e-9};
    double tol_rel{1e-9};
    double t_start{0.0};
    double t_end{1.0};
    double record_stride{1.0};
    bool keep_states{false};
    std::size_t max_steps{50'000'000};
};

void validate(const IntegratorConfig& cfg);

// t_start, t_start + stride, ..., then t_end (always last, never duplicated).
std::vector<double> record_times(const IntegratorConfig& cfg);

struct StepStats {
    std::size_t steps{0};
    std::size_t rejected{0};
    std::size_t rhs_evals{0};
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, double atol, double rtol) {
    const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array());
    const auto ratio = err.cwiseAbs().array() / scale;
    return std::sqrt(ratio.square().sum() / static_cast<double>(err.size()));
}

}  // namespace detail

// Rhs: void(double t, const State& y, State& dydt)
// Observer: void(double t, State& y)
template <class State, class Rhs, class Observer>
StepStats integrate_rk4(const IntegratorConfig& cfg, State& y, Rhs&& rhs, Observer&& observe) {
    StepStats stats;
    State k1 = State::Zero(y.rows(), y.cols()), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
    const auto times = record_times(cfg);
    double t = times.front();
    observe(t, y);
    for (std::size_t r = 1; r < times.size(); ++r) {
        const double target = times[r];
        const double span = target - t;
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / cfg.dt - 1e-9)));
        const double h = span / static_cast<double>(n);
        for (std::size_t s = 0; s < n; ++s) {
            const double ts = t + static_cast<double>(s) * h;
            rhs(ts, y, k1);
            tmp = y + (0.5 * h) * k1;
            rhs(ts + 0.5 * h, tmp, k2);
            tmp = y + (0.5 * h) * k2;
            rhs(ts + 0.5 * h, tmp, k3);
            tmp = y + h * k3;
            rhs(ts + h, tmp, k4);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            stats.rhs_evals += 4;
            if (++stats.steps > cfg.max_steps) throw std::runtime_error("rk4: step budget exhausted");
        }
        t = target;
        observe(t, y);
    }
    return stats;
}

template <class State, class Rhs, class Observer>
StepStats integrate_dopri5(const IntegratorConfig& cfg, State& y, Rhs&& rhs, Observer&& observe) {
    // Dormand–Prince 5(4) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    StepStats stats;
    const Eigen::Index rows = y.rows(), cols = y.cols();
    State k1 = State::Zero(rows, cols), k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1;
    State tmp = k1, y_new = k1, err = k1;

    const auto times = record_times(cfg);
    double t = times.front();
    observe(t, y);

    rhs(t, y, k1);
    ++stats.rhs_evals;
    // Initial step from the local derivative scale (Hairer, Nørsett & Wanner).
    double h;
    {
        const double d0 = detail::scaled_error(y, y, y, cfg.tol_abs, cfg.tol_rel);
        const double d1 = detail::scaled_error(k1, y, y, cfg.tol_abs, cfg.tol_rel);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, cfg.t_end - cfg.t_start);
    }

    bool fsal_valid = true;
    for (std::size_t r = 1; r < times.size(); ++r) {
        const double target = times[r];
        while (t < target) {
            const bool clipped = t + h >= target;
            const double step = clipped ? target - t : h;
            if (!fsal_valid) {
                rhs(t, y, k1);
                ++stats.rhs_evals;
                fsal_valid = true;
            }
            tmp = y + step * (a21 * k1);
            rhs(t + c2 * step, tmp, k2);
            tmp = y + step * (a31 * k1 + a32 * k2);
            rhs(t + c3 * step, tmp, k3);
            tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs(t + c4 * step, tmp, k4);
            tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs(t + c5 * step, tmp, k5);
            tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs(t + step, tmp, k6);
            y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(t + step, y_new, k7);
            stats.rhs_evals += 6;
            err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double en = detail::scaled_error(err, y, y_new, cfg.tol_abs, cfg.tol_rel);

            if (!std::isfinite(en)) throw std::runtime_error("dopri5: non-finite error estimate");
            const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            if (en <= 1.0) {
                t = clipped ? target : t + step;
                y.swap(y_new);
                k1.swap(k7);
                ++stats.steps;
                // A clipped step says nothing about the natural step size.
                if (!clipped) h = step * fac;
                else h = std::max(h, step * fac);
            } else {
                ++stats.rejected;
                h = step * std::max(fac, 0.2);
            }
            if (h < 1e-14 * std::max(1.0, std::abs(t))) throw std::runtime_error("dopri5: step size underflow");
            if (stats.steps + stats.rejected > cfg.max_steps) throw std::runtime_error("dopri5: step budget exhausted");
        }
        observe(t, y);
        // The observer may have touched y (e.g. symmetrization); refresh k1.
        fsal_valid = false;
    }
    return stats;
}

template <class State, class Rhs, class Observer>
StepStats integrate(const IntegratorConfig& cfg, State& y, Rhs&& rhs, Observer&& observe) {
    validate(cfg);
    if (cfg.method == IntegratorMethod::rk4_fixed) return integrate_rk4(cfg, y, rhs, observe);
    return integrate_dopri5(cfg, y, rhs, observe);
}

}  // namespace cqed
