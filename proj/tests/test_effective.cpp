// test_effective.cpp — Resonance enumeration and effective generators

#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "effham/effective.hpp"
#include "effham/errors.hpp"
#include "effham/scenarios.hpp"
#include "test_support.hpp"

using namespace effham;

namespace {

struct BruteTuple {
    std::vector<std::size_t> components;
    double coefficient;
    bool degenerate;
};

// Plain nested loops over every signed sequence, classified from scratch.
std::vector<BruteTuple> brute_force(const std::vector<Rational>& nus, int order) {
    std::vector<BruteTuple> out;
    const std::size_t m = nus.size();
    std::size_t total = 1;
    for (int k = 0; k < order; ++k) total *= m;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::size_t> seq(static_cast<std::size_t>(order));
        std::size_t c = code;
        for (int k = order - 1; k >= 0; --k) {
            seq[static_cast<std::size_t>(k)] = c % m;
            c /= m;
        }
        Rational sum(0);
        for (auto i : seq) sum = sum + nus[i];
        if (!sum.is_zero()) continue;
        bool degenerate = false;
        double coef = order % 2 == 1 ? 1.0 : -1.0;
        for (int k = 1; k < order; ++k) {
            Rational tail(0);
            for (int j = k; j < order; ++j) tail = tail + nus[seq[static_cast<std::size_t>(j)]];
            if (tail.is_zero()) {
                degenerate = true;
            } else {
                coef /= tail.to_double();
            }
        }
        out.push_back({seq, coef, degenerate});
    }
    return out;
}

std::vector<Rational> signed_nus(const FrequencyDecomposition& d) {
    std::vector<Rational> nus;
    for (const auto& c : expand_signed(d)) nus.push_back(c.nu);
    return nus;
}

FrequencyDecomposition rabi(double lambda = 0.05, int cutoff = 8) {
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    p.lambda_over_base = lambda;
    p.cutoff = cutoff;
    p.n_initial = std::min(3, cutoff - 4);
    return build_rabi(p);
}

FrequencyDecomposition two_atom(double lambda = 0.05, int cutoff = 6) {
    auto p = ScenarioParams::defaults(ScenarioName::kTwoAtomOnePhoton);
    p.lambda_over_base = lambda;
    p.cutoff = cutoff;
    return build_two_atom(p);
}

FrequencyDecomposition rescaled(const FrequencyDecomposition& d, Complex amp_scale, Rational freq_scale) {
    std::vector<FrequencyTerm> terms;
    for (const auto& t : d.terms()) terms.push_back({amp_scale * t.h, t.omega * freq_scale, t.expr});
    return FrequencyDecomposition(d.space_ptr(), d.base_frequency_label(), std::move(terms));
}

void expect_matches_brute_force(const FrequencyDecomposition& d, int order) {
    const auto brute = brute_force(signed_nus(d), order);
    const auto set = enumerate_resonances(d, order);
    std::map<std::vector<std::size_t>, const BruteTuple*> kept, degenerate;
    for (const auto& b : brute) (b.degenerate ? degenerate : kept)[b.components] = &b;
    ASSERT_EQ(set.kept.size(), kept.size());
    ASSERT_EQ(set.degenerate.size(), degenerate.size());
    for (const auto& t : set.kept) {
        const auto it = kept.find(t.components);
        ASSERT_NE(it, kept.end());
        EXPECT_NEAR(t.coefficient, it->second->coefficient, 1e-15 * std::abs(it->second->coefficient));
        ASSERT_EQ(t.tail_sums.size(), static_cast<std::size_t>(order - 1));
        for (const auto& s : t.tail_sums) EXPECT_FALSE(s.is_zero());
    }
    for (const auto& t : set.degenerate) EXPECT_TRUE(degenerate.count(t.components));
}

} // namespace

TEST(Enumeration, RabiThirdOrderTuples) {
    const auto d = rabi();
    expect_matches_brute_force(d, 3);
    const auto set = enumerate_resonances(d, 3);
    // Components: 0 -> +2, 1 -> -2, 2 -> +4, 3 -> -4.
    std::set<std::vector<int>> nus;
    for (const auto& t : set.kept) {
        std::vector<int> v;
        for (const auto& n : t.nu) v.push_back(static_cast<int>(n.num()));
        nus.insert(v);
    }
    const std::set<std::vector<int>> expected{{2, 2, -4}, {2, -4, 2}, {-4, 2, 2},
                                              {-2, -2, 4}, {-2, 4, -2}, {4, -2, -2}};
    EXPECT_EQ(nus, expected);
    EXPECT_TRUE(set.degenerate.empty());
}

TEST(Enumeration, TwoAtomThirdOrderMatchesBruteForce) {
    const auto d = two_atom();
    expect_matches_brute_force(d, 3);
    const auto set = enumerate_resonances(d, 3);
    bool found = false;
    for (const auto& t : set.kept) {
        found = found || (t.nu == std::vector<Rational>{Rational(1), Rational(-3), Rational(2)});
    }
    EXPECT_TRUE(found);
}

TEST(Enumeration, RandomSetsMatchBruteForce) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = test::random_decomposition(rng, 4, 4);
        for (int order : {2, 3, 4}) {
            SCOPED_TRACE(trial * 10 + order);
            expect_matches_brute_force(d, order);
        }
    }
}

TEST(Enumeration, NoResonanceGivesZero) {
    auto s = make_space({Factor::qubit(), Factor::boson(4)});
    const auto h = boson_op(s, 1, BosonOp::kAdag) * qubit_op(s, 0, QubitOp::kSp);
    const auto h2 = boson_op(s, 1, BosonOp::kAdag) * boson_op(s, 1, BosonOp::kAdag);
    const FrequencyDecomposition d(s, "w", {{h, Rational(3), ""}, {h2, Rational(5), ""}});
    EXPECT_TRUE(enumerate_resonances(d, 3).kept.empty());
    const auto H = effn(d, 3);
    EXPECT_TRUE(H.total.is_zero());
    EXPECT_TRUE(H.ledger.empty());
    // A single term admits no zero-sum triple at all.
    const FrequencyDecomposition single(s, "w", {{h, Rational(1), ""}});
    EXPECT_TRUE(effn(single, 3).total.is_zero());
    EXPECT_TRUE(effn(single, 3).ledger.empty());
}

TEST(SecondOrder, CommutatorFormula) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = test::random_decomposition(rng);
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d.space().dim()),
                                                           static_cast<Eigen::Index>(d.space().dim()));
        for (const auto& t : d.terms()) {
            const Eigen::MatrixXcd h = t.h.dense();
            const Eigen::MatrixXcd hd = h.adjoint();
            expected += (test::naive_matmul(h, hd) - test::naive_matmul(hd, h)) / t.omega.to_double();
        }
        EXPECT_LE((eff2(d).total.dense() - expected).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE(max_abs_diff(effn(d, 2).total, eff2(d).total), 1e-12);
    }
}

TEST(SecondOrder, RabiStarkShifts) {
    const double l = 0.05;
    const auto d = rabi(l);
    const auto H = eff2(d);
    for (int n = 0; n < 7; ++n) {
        const auto g = d.space().parse_label("g," + std::to_string(n));
        const auto e = d.space().parse_label("e," + std::to_string(n));
        EXPECT_NEAR(H.total.coeff(e, e).real(), l * l / 4 * (3 * n + 2), 1e-15);
        EXPECT_NEAR(H.total.coeff(g, g).real(), -l * l / 4 * (3 * n + 1), 1e-15);
    }
}

TEST(ThirdOrder, ExplicitFamiliesMatchGenericRule) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = test::random_decomposition(rng);
        EXPECT_LE(max_abs_diff(effn(d, 3).total, eff3_explicit(d).total), 1e-12) << trial;
    }
    EXPECT_LE(max_abs_diff(effn(two_atom(), 3).total, eff3_explicit(two_atom()).total), 1e-16);
}

TEST(ThirdOrder, HermitianOnRandomInputs) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = test::random_decomposition(rng);
        EXPECT_LE(hermitian_defect(effn(d, 3).total), 1e-10) << trial;
    }
}

TEST(Generator, FourthOrderKeptTuplesStayHermitian) {
    // (+w, -w, +w, -w) has S_3 = 0, so every input is degenerate at fourth
    // order; the kept tuples alone still pair up into a hermitian sum.
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto d = test::random_decomposition(rng, 8, 3);
        EXPECT_THROW(effn(d, 4), DegenerateResonance);
        const auto H = effn(d, 4, DegeneracyPolicy::kReport);
        EXPECT_FALSE(H.degeneracy_report.empty());
        EXPECT_LE(hermitian_defect(H.total), 1e-10);
    }
}

TEST(Generator, ScaleCovariance) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = test::random_decomposition(rng);
        for (int n : {2, 3}) {
            const auto base = effn(d, n).total;
            const double c = 1.7;
            const auto amp = effn(rescaled(d, {c, 0.0}, Rational(1)), n).total;
            EXPECT_LE(max_abs_diff(amp, std::pow(c, n) * base), 1e-12);
            const Rational r(5, 2);
            const auto freq = effn(rescaled(d, {1.0, 0.0}, r), n).total;
            EXPECT_LE(max_abs_diff(freq, std::pow(r.to_double(), 1 - n) * base), 1e-12);
        }
    }
}

TEST(Generator, LedgerPairsConjugateTuples) {
    const auto d = two_atom();
    const auto H = effn(d, 3);
    ASSERT_FALSE(H.ledger.empty());
    // Tuple (c_1..c_n) pairs with the reversed sequence of partners, whose
    // contribution is the adjoint.
    std::map<std::vector<std::size_t>, const LedgerEntry*> by_components;
    for (const auto& e : H.ledger) by_components[e.tuple.components] = &e;
    auto sum = Operator::zero(d.space_ptr());
    for (const auto& e : H.ledger) {
        std::vector<std::size_t> partner(e.tuple.components.rbegin(), e.tuple.components.rend());
        for (auto& c : partner) c ^= 1u;
        const auto it = by_components.find(partner);
        ASSERT_NE(it, by_components.end());
        EXPECT_LE(max_abs_diff(it->second->contribution, dagger(e.contribution)), 1e-15);
        EXPECT_DOUBLE_EQ(it->second->tuple.coefficient, e.tuple.coefficient);
        sum += e.contribution;
    }
    EXPECT_LE(max_abs_diff(sum, H.total), 1e-15);
}

TEST(Generator, FourthOrderDegeneracy) {
    auto s = make_space({Factor::qubit(), Factor::boson(3)});
    const auto h = boson_op(s, 1, BosonOp::kA) * qubit_op(s, 0, QubitOp::kSp) + qubit_op(s, 0, QubitOp::kSz);
    const FrequencyDecomposition d(s, "w", {{h, Rational(1), ""}});
    // Order three can never be degenerate: S_2 = -nu_1 and S_3 = nu_3.
    EXPECT_TRUE(enumerate_resonances(d, 3).degenerate.empty());
    const auto set = enumerate_resonances(d, 4);
    EXPECT_EQ(set.kept.size(), 2u);
    EXPECT_EQ(set.degenerate.size(), 4u);
    EXPECT_THROW(effn(d, 4), DegenerateResonance);
    const auto reported = effn(d, 4, DegeneracyPolicy::kReport);
    EXPECT_EQ(reported.degeneracy_report.size(), 4u);
    EXPECT_LE(hermitian_defect(reported.total), 1e-14);
}

TEST(MatrixElements, RabiThreePhotonCoupling) {
    const double l = 0.05;
    const auto H = effn(rabi(l), 3);
    EXPECT_NEAR(matrix_element(H, "e,0", "g,3").real(), -l * l * l * std::sqrt(6.0) / 4, 1e-18);
    EXPECT_NEAR(matrix_element(H, "e,1", "g,4").real(), -l * l * l * std::sqrt(24.0) / 4, 1e-18);
    EXPECT_EQ(matrix_element(H, "e,1", "g,3"), Complex(0.0, 0.0));
    EXPECT_THROW(matrix_element(H, "x", "g,3"), InvalidLabel);
}

TEST(MatrixElements, TwoAtomSqrtLawWithFockHeadroom) {
    auto p = ScenarioParams::defaults(ScenarioName::kTwoAtomOnePhoton);
    const auto doc = scenario_document(p);
    const auto H = derive_effective(doc, 3, DegeneracyPolicy::kRaise, 2);
    const auto base = matrix_element(H, "ee,0", "gg,1");
    for (int n = 1; n <= 5; ++n) {
        const auto m = matrix_element(H, "ee," + std::to_string(n - 1), "gg," + std::to_string(n));
        EXPECT_NEAR((m / base).real(), std::sqrt(static_cast<double>(n)), 1e-12) << n;
    }
    // Without headroom the element touching the top Fock level is a truncation artifact.
    const auto hard = effn(build_decomposition(doc), 3);
    const auto edge = matrix_element(hard, "ee,4", "gg,5") / matrix_element(hard, "ee,0", "gg,1");
    EXPECT_GT(std::abs(edge.real() - std::sqrt(5.0)), 0.1);
}

TEST(Generator, VanishesWithCoupling) {
    const auto d = rabi(1e-9);
    EXPECT_LE(effn(d, 2).total.dense().cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_LE(effn(d, 3).total.dense().cwiseAbs().maxCoeff(), 1e-25);
}
