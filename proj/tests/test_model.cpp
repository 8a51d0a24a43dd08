#include "doctest.h"
#include "oracle.hpp"

#include "cqed/analysis.hpp"
#include "cqed/model.hpp"
#include "cqed/scenarios.hpp"

#include <cmath>
#include <random>

using namespace cqed;

namespace {

PulsePair fig2_pulses() { return stirap_pulse_pair(2.0, 2.0, 300.0, 125.0, 150.0, 175.0); }

SystemParams fig2_params() {
    SystemParams p;
    p.delta = 20.0;
    p.kappa = 0.1;
    p.gamma_atom = 0.1;
    p.m = 2;
    p.xi = 2.0;
    return p;
}

Index idx(const SpaceLayout& l, const char* label) { return l.index(parse_basis_label(label)); }

}  // namespace

TEST_SUITE("model") {

TEST_CASE("pulse envelopes") {
    const auto p1 = PulseEnvelope::gaussian(2.0, 300.0, 125.0);
    const auto p2 = PulseEnvelope::gaussian(1.0, 150.0, 175.0);
    CHECK(pulse_value(p1, 300.0) == 2.0);
    CHECK(pulse_value(p2, 150.0 + 175.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(pulse_value(PulseEnvelope::constant(1.5), 1e6) == 1.5);

    const PulsePair fig2 = fig2_pulses();
    CHECK(std::abs(fig2.atom1.peak) == 2.0);
    CHECK(std::abs(fig2.atom2.peak) == 1.0);
    CHECK(fig2.atom1.peak == -2.0 * fig2.atom2.peak);  // Ω₁ = −ξΩ₂

    // derivative vs central difference
    for (double t : {0.0, 120.0, 300.0, 410.0}) {
        const double h = 1e-4;
        const double fd = (pulse_value(p1, t + h) - pulse_value(p1, t - h)) / (2 * h);
        CHECK(pulse_derivative(p1, t) == doctest::Approx(fd).epsilon(1e-7));
    }
    // bounded by the peak
    for (double t = -500; t < 1000; t += 7.3) CHECK(std::abs(pulse_value(p1, t)) <= 2.0);
    CHECK_THROWS_AS(validate(PulseEnvelope::gaussian(1.0, 0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    SystemParams p;
    CHECK_NOTHROW(validate(p));
    p.delta = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = {};
    p.kappa = -0.1;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = {};
    p.m = -1;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("full Hamiltonian matches the Kronecker oracle") {
    const SystemParams p = fig2_params();
    const PulsePair pulses = fig2_pulses();
    for (int n_max : {1, 2, 3}) {
        const SpaceLayout layout(n_max);
        for (double t : {0.0, 150.0, 191.7, 300.0, 550.0}) {
            const Operator h = hamiltonian_full(p, pulses, t, layout);
            const oracle::Mat ref = oracle::full_hamiltonian(p.g, p.delta, p.m, pulses.value(1, t), pulses.value(2, t),
                                                             layout.fock_dim());
            CHECK((h - ref).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("full Hamiltonian matrix elements") {
    const SpaceLayout layout(2);
    SystemParams p = fig2_params();
    const PulsePair pulses = fig2_pulses();
    const double t = 250.0;
    const Operator h = hamiltonian_full(p, pulses, t, layout);
    CHECK(h(idx(layout, "|e1;0>"), idx(layout, "|01;0>")) == cplx(pulses.value(1, t), 0.0));
    CHECK(h(idx(layout, "|1e;0>"), idx(layout, "|11;1>")) == cplx(p.g, 0.0));

    SUBCASE("pulses off, m = 0 leaves only detuning and cavity coupling") {
        p.m = 0;
        const PulsePair off{PulseEnvelope::constant(0.0), PulseEnvelope::constant(0.0)};
        const Operator h0 = hamiltonian_full(p, off, 0.0, layout);
        Operator expect = Operator::Zero(layout.total_dim(), layout.total_dim());
        const Operator a = cavity_annihilator(layout);
        for (int atom : {1, 2}) {
            expect += -p.delta * atomic_op(layout, atom, Level::e, Level::e);
            const Operator c = p.g * a * atomic_op(layout, atom, Level::e, Level::g1);
            expect += c + Operator(c.adjoint());
        }
        CHECK((h0 - expect).norm() == 0.0);
    }
}

TEST_CASE("interaction frame differs by a diagonal phase") {
    const SpaceLayout layout(2);
    const SystemParams p = fig2_params();
    const PulsePair pulses = fig2_pulses();
    for (double t : {0.0, 13.7, 191.7}) {
        const Operator hr = hamiltonian_full(p, pulses, t, layout, Frame::rotating_constant);
        const Operator hi = hamiltonian_full(p, pulses, t, layout, Frame::interaction_oscillatory);
        // The frames differ by a diagonal unitary, so off-diagonal magnitudes coincide.
        for (Index i = 0; i < hr.rows(); ++i)
            for (Index j = 0; j < hr.cols(); ++j)
                if (i != j) CHECK(std::abs(std::abs(hr(i, j)) - std::abs(hi(i, j))) < 1e-14);
        CHECK(hermiticity_residue(hi) < 1e-14);
    }
}

TEST_CASE("effective Raman Hamiltonian") {
    const SpaceLayout layout(2);
    SystemParams p = fig2_params();
    const PulsePair pulses = fig2_pulses();
    const double t = 222.0;
    const Operator h = hamiltonian_effective_raman(p, pulses, t, layout);
    CHECK(h(idx(layout, "|11;1>"), idx(layout, "|01;0>")).real() ==
          doctest::Approx(pulses.value(1, t) * p.g / p.delta).epsilon(1e-14));
    for (int atom : {1, 2}) {
        const Operator pe = atomic_op(layout, atom, Level::e, Level::e);
        CHECK((pe * h - h * pe).norm() == 0.0);  // never couples |e> in or out
    }
    p.m = 0;
    const Operator h0 = hamiltonian_effective_raman(p, pulses, t, layout);
    CHECK(h0(idx(layout, "|01;0>"), idx(layout, "|01;0>")) == cplx(0.0, 0.0));
}

TEST_CASE("Lambda-subspace Hamiltonian") {
    SystemParams p = fig2_params();
    const PulsePair pulses = fig2_pulses();
    SUBCASE("m = 2 is on resonance") {
        const Operator h = hamiltonian_lambda_subspace(p, pulses, 100.0);
        const double res = 2.0 * p.g * p.g / p.delta;
        CHECK(h(0, 0).real() == doctest::Approx(res));
        CHECK(h(1, 1).real() == doctest::Approx(res));
        CHECK(h(2, 2).real() == doctest::Approx(res));
    }
    SUBCASE("m = 0, pulses off") {
        p.m = 0;
        const PulsePair off{PulseEnvelope::constant(0.0), PulseEnvelope::constant(0.0)};
        Operator expect = Operator::Zero(3, 3);
        expect(2, 2) = 2.0 * p.g * p.g / p.delta;
        CHECK((hamiltonian_lambda_subspace(p, off, 0.0) - expect).norm() == 0.0);
    }
    SUBCASE("embeds exactly into the effective Raman model") {
        const SpaceLayout layout(2);
        const auto basis = model_basis({ModelVariant::LambdaSubspace3, Frame::rotating_constant}, layout);
        for (double t : {0.0, 191.7, 333.0}) {
            const Operator h2 = hamiltonian_effective_raman(p, pulses, t, layout);
            const Operator h3 = hamiltonian_lambda_subspace(p, pulses, t);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    CHECK(h3(Index(i), Index(j)) == h2(layout.index(basis[i]), layout.index(basis[j])));
        }
    }
    SUBCASE("on-resonance STIRAP model equals it up to a multiple of the identity") {
        for (double t : {0.0, 191.7, 333.0}) {
            const Operator d = hamiltonian_lambda_subspace(p, pulses, t) - hamiltonian_stirap(p, pulses, t);
            CHECK((d - d(0, 0) * Operator::Identity(3, 3)).norm() < 1e-15);
            CHECK(d(0, 0).real() == doctest::Approx(2.0 * p.g * p.g / p.delta));
        }
        const Operator h7 = hamiltonian_stirap(p, pulses, 200.0);
        CHECK(h7(0, 2).real() == doctest::Approx(p.g * std::abs(pulses.value(1, 200.0)) / p.delta));
        CHECK(h7(1, 2).real() == doctest::Approx(-p.g * std::abs(pulses.value(2, 200.0)) / p.delta));
    }
    CHECK_THROWS_AS(hamiltonian_lambda_subspace(p, pulses, 0.0, 0), std::invalid_argument);
}

TEST_CASE("two-level Raman Hamiltonian") {
    SystemParams p;
    p.delta = 20.0;
    p.m = 0;
    const Operator h = hamiltonian_two_level_raman(p, {PulseEnvelope::constant(2.0), PulseEnvelope::constant(1.0)});
    CHECK(h(0, 1).real() == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(h(0, 0) == cplx(0.0, 0.0));
    CHECK(h(1, 1) == cplx(0.0, 0.0));
    CHECK(hamiltonian_two_level_raman(p, {PulseEnvelope::constant(2.0), PulseEnvelope::constant(0.0)}).norm() == 0.0);
    CHECK(raman_rate(2.0, 1.0, 20.0) == raman_rate(1.0, 2.0, 20.0));

    p.m = 2;
    CHECK_THROWS_AS(hamiltonian_two_level_raman(p, {PulseEnvelope::constant(2.0), PulseEnvelope::constant(1.0)}),
                    std::invalid_argument);
    p.m = 0;
    CHECK_THROWS_AS(make_two_level_raman_hamiltonian(p, fig2_pulses()), std::invalid_argument);
}

TEST_CASE("second-order elimination reproduces the Raman rate") {
    // Equal amplitudes so that the Stark shifts of the two ground configurations coincide.
    SystemParams p;
    p.delta = 20.0;
    p.m = 0;
    for (double w : {0.05, 0.1, 0.2}) {
        const Operator h3 = hamiltonian_lambda_subspace(p, {PulseEnvelope::constant(w), PulseEnvelope::constant(w)}, 0.0);
        Eigen::SelfAdjointEigenSolver<Operator> es(h3);
        const double half_split = 0.5 * (es.eigenvalues()(1) - es.eigenvalues()(0));
        const double perturbative = (p.g * w / p.delta) * (p.g * w / p.delta) / (2.0 * p.g * p.g / p.delta);
        CHECK(perturbative == doctest::Approx(raman_rate(w, w, p.delta)).epsilon(1e-14));
        // relative correction is O((w / 2g)^2)
        CHECK(std::abs(half_split - perturbative) / perturbative < 2.0 * (w / (2 * p.g)) * (w / (2 * p.g)));
    }
}

TEST_CASE("every builder returns a Hermitian matrix") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0), tt(0.0, 600.0);
    const SpaceLayout layout(2);
    for (int k = 0; k < 20; ++k) {
        SystemParams p = fig2_params();
        p.delta = 5.0 + std::abs(u(rng)) * 10.0;
        const PulsePair pulses = stirap_pulse_pair(u(rng), 1.0 + std::abs(u(rng)), 300.0, 125.0, 150.0, 175.0);
        const double t = tt(rng);
        for (Frame f : {Frame::rotating_constant, Frame::interaction_oscillatory})
            CHECK(hermiticity_residue(hamiltonian_full(p, pulses, t, layout, f)) < 1e-12);
        CHECK(hermiticity_residue(hamiltonian_effective_raman(p, pulses, t, layout)) < 1e-12);
        CHECK(hermiticity_residue(hamiltonian_lambda_subspace(p, pulses, t)) < 1e-12);
        CHECK(hermiticity_residue(hamiltonian_stirap(p, pulses, t)) < 1e-12);
    }
}

TEST_CASE("dissipators") {
    const SpaceLayout layout(2);
    SystemParams p = fig2_params();
    const Dissipators d = build_dissipators(p, layout);
    REQUIRE(d.collapse_ops.size() == 5);
    CHECK((d.collapse_ops[0] - std::sqrt(0.2) * cavity_annihilator(layout)).norm() < 1e-15);
    // the atomic channels together deplete each |e> at total rate Γ
    Operator rate = Operator::Zero(layout.total_dim(), layout.total_dim());
    for (std::size_t k = 1; k < d.collapse_ops.size(); ++k) rate += d.collapse_ops[k].adjoint() * d.collapse_ops[k];
    const Operator pe = atomic_op(layout, 1, Level::e, Level::e) + atomic_op(layout, 2, Level::e, Level::e);
    CHECK((rate - p.gamma_atom * pe).norm() < 1e-14);
    p.gamma_atom = 0.0;
    CHECK(build_dissipators(p, layout).collapse_ops.size() == 1);
    p.kappa = 0.0;
    CHECK(build_dissipators(p, layout).collapse_ops.empty());
}

TEST_CASE("regime warnings") {
    SystemParams p = fig2_params();
    CHECK(regime_warnings(p, fig2_pulses()).empty());
    p.delta = 2.0;
    CHECK(regime_warnings(p, fig2_pulses()).size() == 1);
    SystemParams r;
    r.delta = 20.0;
    r.m = 0;
    const PulsePair strong{PulseEnvelope::constant(2.0), PulseEnvelope::constant(1.0)};
    CHECK(regime_warnings(r, strong, ModelVariant::TwoLevelRaman4).size() == 1);
}

TEST_CASE("selector names round-trip") {
    for (auto v : {ModelVariant::Full1, ModelVariant::EffectiveRaman2, ModelVariant::LambdaSubspace3,
                   ModelVariant::TwoLevelRaman4, ModelVariant::Stirap7})
        CHECK(parse_model_variant(to_string(v)) == v);
    CHECK(parse_frame(to_string(Frame::interaction_oscillatory)) == Frame::interaction_oscillatory);
    CHECK_THROWS_AS(parse_model_variant("Full9"), std::invalid_argument);
    const SpaceLayout layout(2);
    CHECK(model_basis({ModelVariant::Stirap7, Frame::rotating_constant}, layout).size() == 3);
    CHECK(model_basis({ModelVariant::TwoLevelRaman4, Frame::rotating_constant}, layout).size() == 2);
    CHECK(model_basis({ModelVariant::Full1, Frame::rotating_constant}, layout).size() == 27);
}

}  // TEST_SUITE
