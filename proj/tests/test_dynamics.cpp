// test_dynamics.cpp — Full and effective propagation, frame rotation and comparison

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "effham/dynamics.hpp"
#include "effham/effective.hpp"
#include "effham/errors.hpp"
#include "effham/scenarios.hpp"

using namespace effham;

namespace {

// H_I(t) = (lambda/2)(sigma_+ e^{i w t} + h.c.)
FrequencyDecomposition driven_qubit(double lambda, Rational w) {
    auto s = make_space({Factor::qubit()});
    return FrequencyDecomposition(s, "w", {{Complex(lambda / 2, 0.0) * qubit_op(s, 0, QubitOp::kSp), w, ""}});
}

FullPropagationOptions options(double t_final, double dt, StepRule rule = StepRule::kMagnus4) {
    FullPropagationOptions o;
    o.t_final = t_final;
    o.dt = dt;
    o.rule = rule;
    o.periodic_fast_path = false;
    return o;
}

double final_error(const Trajectory& a, const Trajectory& b) { return (a.states.back() - b.states.back()).norm(); }

} // namespace

TEST(FullPropagation, DetunedRabiFormula) {
    const double l = 0.3, w = 1.0;
    const auto d = driven_qubit(l, Rational(1));
    const auto psi0 = StateVector::basis(d.space_ptr(), "g");
    auto o = options(20.0, 0.01);
    o.sample_interval = 0.5;
    for (auto rule : {StepRule::kMagnus4, StepRule::kMidpoint}) {
        o.rule = rule;
        if (rule == StepRule::kMidpoint) o.dt = 0.001;
        const auto traj = propagate_full(d, psi0, o);
        ASSERT_EQ(traj.times.size(), 41u);
        const auto pe = traj.population(1);
        const double W = std::sqrt(l * l + w * w);
        for (std::size_t j = 0; j < traj.times.size(); ++j) {
            const double exact = l * l / (l * l + w * w) * std::pow(std::sin(W * traj.times[j] / 2), 2);
            EXPECT_NEAR(pe[j], exact, 1e-6) << traj.times[j];
        }
        EXPECT_LE(traj.max_norm_drift, kNormTolerance);
    }
}

TEST(FullPropagation, StepHalvingOrders) {
    const auto d = driven_qubit(0.8, Rational(1));
    const auto psi0 = StateVector::basis(d.space_ptr(), "g");
    const auto ref = propagate_full(d, psi0, options(10.0, 0.0025));
    const double m1 = final_error(propagate_full(d, psi0, options(10.0, 0.04)), ref);
    const double m2 = final_error(propagate_full(d, psi0, options(10.0, 0.02)), ref);
    EXPECT_GE(m1 / m2, 8.0);
    const auto ref_mid = propagate_full(d, psi0, options(10.0, 0.0025, StepRule::kMagnus4));
    const double p1 = final_error(propagate_full(d, psi0, options(10.0, 0.04, StepRule::kMidpoint)), ref_mid);
    const double p2 = final_error(propagate_full(d, psi0, options(10.0, 0.02, StepRule::kMidpoint)), ref_mid);
    EXPECT_GE(p1 / p2, 3.5);
    EXPECT_LE(p1 / p2, 4.5);
}

TEST(FullPropagation, PeriodicFastPathMatchesDirect) {
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    p.lambda_over_base = 0.1;
    p.cutoff = 7;
    const auto d = build_rabi(p);
    const auto psi0 = StateVector::basis(d.space_ptr(), "g,3");
    auto direct = options(60.0, 0.01);
    direct.sample_interval = 0.5;
    // The fast path snaps the step to the period; use one that already fits.
    direct.dt = std::numbers::pi / 300;
    direct.sample_interval = std::numbers::pi / 6;
    direct.t_final = 20 * std::numbers::pi;
    auto fast = direct;
    fast.periodic_fast_path = true;
    const auto a = propagate_full(d, psi0, direct);
    const auto b = propagate_full(d, psi0, fast);
    ASSERT_EQ(a.times.size(), b.times.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < a.times.size(); ++j) {
        EXPECT_NEAR(a.times[j], b.times[j], 1e-9);
        worst = std::max(worst, (a.states[j] - b.states[j]).norm());
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(FullPropagation, Guards) {
    const auto d = driven_qubit(0.3, Rational(2));
    const auto psi0 = StateVector::basis(d.space_ptr(), "g");
    EXPECT_THROW(propagate_full(d, psi0, options(1.0, 0.03)), StepTooLarge);
    EXPECT_NO_THROW(propagate_full(d, psi0, options(1.0, 0.025)));

    // A strongly driven mode runs into its cutoff.
    auto s = make_space({Factor::boson(3)});
    const FrequencyDecomposition pump(s, "w", {{Complex(0.5, 0.0) * boson_op(s, 0, BosonOp::kAdag), Rational(1, 10), ""}});
    EXPECT_THROW(propagate_full(pump, StateVector::basis(s, "0"), options(30.0, 0.01)), LeakageExceeded);

    EXPECT_THROW(StateVector(s, Eigen::VectorXcd::Ones(3)), InvalidArgument);
    EXPECT_THROW(StateVector::basis(s, "3"), InvalidLabel);
}

TEST(EffectivePropagation, TwoLevelRotation) {
    auto s = make_space({Factor::qubit(), Factor::boson(4)});
    const auto g3 = s->parse_label("g,3");
    const auto e0 = s->parse_label("e,0");
    const double c = 0.01;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
    m(static_cast<Eigen::Index>(e0), static_cast<Eigen::Index>(g3)) = c;
    m(static_cast<Eigen::Index>(g3), static_cast<Eigen::Index>(e0)) = c;
    const auto H = Operator::from_dense(s, m);
    const auto traj = propagate_effective(H, StateVector::basis(s, g3), 300.0, 1.0);
    const auto pe = traj.population(e0);
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        EXPECT_NEAR(pe[j], std::pow(std::sin(c * traj.times[j]), 2), 1e-12);
    }
    Eigen::MatrixXcd bad = m;
    bad(0, 1) = 1.0;
    EXPECT_THROW(propagate_effective(Operator::from_dense(s, bad), StateVector::basis(s, g3), 1.0, 0.1),
                 NonHermitianGenerator);
}

TEST(EffectivePropagation, ZeroGeneratorKeepsPopulations) {
    auto s = make_space({Factor::qubit(), Factor::boson(3)});
    const auto traj = propagate_effective(Operator::zero(s), StateVector::basis(s, "e,1"), 10.0, 0.5);
    for (const auto& psi : traj.states) EXPECT_EQ(psi, StateVector::basis(s, "e,1").amplitudes());
}

TEST(Frames, RotateAndCompare) {
    auto s = make_space({Factor::qubit(), Factor::boson(4)});
    const auto n = boson_op(s, 1, BosonOp::kN);
    const auto psi = StateVector::basis(s, "g,2");
    const auto traj = propagate_effective(Operator::zero(s), psi, 5.0, 0.5);
    const auto rotated = rotate_frame(traj, Complex(0.3, 0.0) * n);
    for (std::size_t j = 0; j < rotated.times.size(); ++j) {
        const Complex expected = std::exp(Complex(0.0, 0.6 * rotated.times[j]));
        EXPECT_NEAR(std::abs(rotated.states[j](2) - expected), 0.0, 1e-15);
    }
    EXPECT_THROW(rotate_frame(traj, boson_op(s, 1, BosonOp::kA)), InvalidArgument);

    // Identical trajectories compare perfectly; a global phase is invisible.
    const std::vector<std::size_t> obs{2};
    const auto same = compare(traj, traj, obs);
    EXPECT_EQ(same.min_fidelity, 1.0);
    EXPECT_EQ(same.observables[0].max_deviation, 0.0);
    auto phased = traj;
    for (auto& st : phased.states) st *= std::exp(Complex(0.0, 1.1));
    EXPECT_NEAR(compare(traj, phased, obs).min_fidelity, 1.0, 1e-15);
    const auto shorter = propagate_effective(Operator::zero(s), psi, 4.0, 0.5);
    EXPECT_THROW(compare(traj, shorter, obs), InvalidArgument);
}

TEST(Frames, EffectiveRabiFrequencyAgreesWithFull) {
    // Short version of the compensated three-photon run at a larger coupling.
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    p.lambda_over_base = 0.1;
    p.cutoff = 8;
    const auto comp = compensate_rabi(p);
    const auto d = build_rabi(p);
    auto H = effn(d, 2).total + effn(d, 3).total + comp.frame_generator;
    const double g = std::sqrt(6.0) * std::pow(0.1, 3) / 4;
    const double T = std::numbers::pi / g;
    FullPropagationOptions o;
    o.t_final = 1.5 * T;
    o.dt = 0.01;
    o.sample_interval = T / 100;
    const auto full = propagate_full(comp.shifted, StateVector::basis(comp.shifted.space_ptr(), "g,3"), o);
    const auto eff = rotate_frame(propagate_effective(H, StateVector::basis(d.space_ptr(), "g,3"), full.times),
                                  comp.frame_generator);
    const std::vector<std::size_t> obs{d.space().parse_label("e,0")};
    const auto report = compare(full, eff, obs);
    EXPECT_GE(report.observables[0].max_population_full, 0.85);
    EXPECT_GE(report.min_fidelity, 0.85);
}
