// test_scenarios.cpp — Built-in two-atom and three-photon Rabi scenarios

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "effham/effective.hpp"
#include "effham/errors.hpp"
#include "effham/scenarios.hpp"

using namespace effham;

TEST(Scenarios, Names) {
    EXPECT_EQ(parse_scenario_name("rabi"), ScenarioName::kRabiThreePhoton);
    EXPECT_EQ(parse_scenario_name("two_atom_one_photon"), ScenarioName::kTwoAtomOnePhoton);
    EXPECT_THROW(parse_scenario_name("three_atom"), InvalidArgument);
    EXPECT_EQ(parse_scenario_name(to_string(ScenarioName::kTwoAtomOnePhoton)), ScenarioName::kTwoAtomOnePhoton);
}

TEST(Scenarios, ParameterGuards) {
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    EXPECT_TRUE(p.validate().empty());
    p.lambda_over_base = 0.15;
    EXPECT_EQ(p.validate().size(), 1u);
    p.lambda_over_base = 0.25;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p.lambda_over_base = 0.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p.lambda_over_base = 0.05;
    p.cutoff = 6;
    EXPECT_THROW(p.validate(), InvalidArgument);
    auto q = ScenarioParams::defaults(ScenarioName::kTwoAtomOnePhoton);
    q.cutoff = 2;
    EXPECT_THROW(build_two_atom(q), InvalidArgument);
}

TEST(Scenarios, TwoAtomTerms) {
    auto p = ScenarioParams::defaults(ScenarioName::kTwoAtomOnePhoton);
    const auto d = build_two_atom(p);
    ASSERT_EQ(d.size(), 3u);
    const auto s = d.space_ptr();
    ASSERT_EQ(s->num_factors(), 3u);
    EXPECT_EQ(s->factor(2).dim, 6);
    const double l = p.lambda_over_base, c = std::cos(p.theta), sn = std::sin(p.theta);
    const auto ad = boson_op(s, 2, BosonOp::kAdag);
    const std::vector<Operator> expected{
        Complex(l * c, 0.0) * ad * (qubit_op(s, 0, QubitOp::kSm) + qubit_op(s, 1, QubitOp::kSm)),
        Complex(l * sn, 0.0) * ad * (qubit_op(s, 0, QubitOp::kSz) + qubit_op(s, 1, QubitOp::kSz)),
        Complex(l * c, 0.0) * ad * (qubit_op(s, 0, QubitOp::kSp) + qubit_op(s, 1, QubitOp::kSp)),
    };
    for (std::size_t m = 0; m < 3; ++m) {
        EXPECT_EQ(d.terms()[m].omega, Rational(static_cast<std::int64_t>(m) + 1));
        EXPECT_LE(max_abs_diff(d.terms()[m].h, expected[m]), 1e-17);
    }
    EXPECT_EQ(initial_label(p), "gg,1");
    EXPECT_EQ(target_label(p), "ee,0");
}

TEST(Scenarios, TwoAtomVanishesWithoutSzCoupling) {
    auto p = ScenarioParams::defaults(ScenarioName::kTwoAtomOnePhoton);
    p.theta = 0.0;
    const auto d = build_two_atom(p);
    EXPECT_EQ(d.size(), 2u);
    EXPECT_TRUE(effn(d, 3).total.is_zero());
}

TEST(Scenarios, RabiTerms) {
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    const auto d = build_rabi(p);
    const auto s = d.space_ptr();
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.terms()[0].omega, Rational(2));
    EXPECT_EQ(d.terms()[1].omega, Rational(4));
    const auto sp = qubit_op(s, 0, QubitOp::kSp);
    EXPECT_LE(max_abs_diff(d.terms()[0].h, Complex(0.05, 0.0) * boson_op(s, 1, BosonOp::kA) * sp), 1e-17);
    EXPECT_LE(max_abs_diff(d.terms()[1].h, Complex(0.05, 0.0) * boson_op(s, 1, BosonOp::kAdag) * sp), 1e-17);
    EXPECT_EQ(initial_label(p), "g,3");
    EXPECT_EQ(target_label(p), "e,0");
}

TEST(Scenarios, StarkCompensationByHand) {
    // <e,0|H2|e,0> = (l^2/4)(2) and <g,3|H2|g,3> = -(l^2/4)(10), so the
    // per-photon correction is (2 + 10)(l^2/4)/3 = l^2.
    for (double l : {0.02, 0.05, 0.1}) {
        auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
        p.lambda_over_base = l;
        EXPECT_NEAR(stark_compensation(p), l * l, 1e-16);
    }
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    p.lambda_over_base = 1e-6;
    EXPECT_NEAR(stark_compensation(p), 0.0, 1e-11);
    p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    p.n_initial = 2;
    EXPECT_THROW(stark_compensation(p), InvalidArgument);
    EXPECT_THROW(stark_compensation(ScenarioParams::defaults(ScenarioName::kTwoAtomOnePhoton)), InvalidArgument);
}

TEST(Scenarios, CompensatedDecompositionAndFrame) {
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    const auto comp = compensate_rabi(p);
    EXPECT_EQ(comp.delta, Rational(1, 400));
    ASSERT_EQ(comp.shifted.size(), 2u);
    EXPECT_EQ(comp.shifted.terms()[0].omega, Rational(799, 400));
    EXPECT_EQ(comp.shifted.terms()[1].omega, Rational(1601, 400));
    // Exact resonance is gone, so re-running the selection drops the third order.
    EXPECT_TRUE(effn(comp.shifted, 3).total.is_zero());
    // exp(-iDt) H_shifted(t) exp(iDt) equals the unshifted H_I(t).
    const auto d = build_rabi(p);
    const Eigen::VectorXcd D = comp.frame_generator.dense().diagonal();
    for (double t : {0.3, 7.0, 123.4}) {
        const Eigen::VectorXcd phase = (Complex(0.0, -t) * D).array().exp();
        const Eigen::MatrixXcd rotated = phase.asDiagonal() * evaluate_at(comp.shifted, t).dense() * phase.conjugate().asDiagonal();
        EXPECT_LE((rotated - evaluate_at(d, t).dense()).cwiseAbs().maxCoeff(), 1e-13) << t;
    }
}

TEST(Scenarios, HeadroomAgreesAwayFromEdge) {
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    const auto doc = scenario_document(p);
    const auto hard = effn(build_decomposition(doc), 3).total.dense();
    const auto padded = derive_effective(doc, 3, DegeneracyPolicy::kRaise, 2).total.dense();
    const int cut = p.cutoff;
    // Entries between states below the top Fock level agree.
    const auto space = build_decomposition(doc).space_ptr();
    for (std::size_t i = 0; i < space->dim(); ++i) {
        for (std::size_t j = 0; j < space->dim(); ++j) {
            if (space->level(i, 1) >= cut - 1 || space->level(j, 1) >= cut - 1) continue;
            EXPECT_EQ(hard(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                      padded(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
    EXPECT_THROW(with_fock_headroom(doc, -1), InvalidArgument);
}
