// test_rational_expr.cpp — Exact frequencies and the operator expression parser

#include <cmath>

#include <gtest/gtest.h>

#include "effham/errors.hpp"
#include "effham/expr_parser.hpp"
#include "effham/rational.hpp"

using namespace effham;

TEST(Rational, ReducesAndCompares) {
    const Rational a(6, -4);
    EXPECT_EQ(a.num(), -3);
    EXPECT_EQ(a.den(), 2);
    EXPECT_EQ(a.to_string(), "-3/2");
    EXPECT_EQ(Rational(4, 2).to_string(), "2");
    EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
    EXPECT_EQ(Rational(2) - Rational(2), Rational(0));
    EXPECT_TRUE((Rational(1, 3) * Rational(3)) == Rational(1));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_THROW(Rational(1, 0), InvalidArgument);
    EXPECT_THROW(Rational(1) / Rational(0), InvalidArgument);
}

TEST(Rational, Parse) {
    EXPECT_EQ(Rational::parse("3"), Rational(3));
    EXPECT_EQ(Rational::parse("-7/14"), Rational(-1, 2));
    EXPECT_EQ(Rational::parse("2.5"), Rational(5, 2));
    EXPECT_EQ(Rational::parse("1.25e-3"), Rational(1, 800));
    EXPECT_EQ(Rational::parse("1E2"), Rational(100));
    EXPECT_THROW(Rational::parse(""), InvalidArgument);
    EXPECT_THROW(Rational::parse("1/0"), InvalidArgument);
    EXPECT_THROW(Rational::parse("abc"), InvalidArgument);
    EXPECT_THROW(Rational::parse("1.0000001"), InvalidArgument);
    EXPECT_THROW(Rational::parse("2x"), InvalidArgument);
}

TEST(Rational, ApproximateAndGcd) {
    EXPECT_EQ(Rational::approximate(0.0025), Rational(1, 400));
    EXPECT_EQ(Rational::approximate(-1.5), Rational(-3, 2));
    const auto pi = Rational::approximate(M_PI, 1000);
    EXPECT_EQ(pi, Rational(355, 113));
    EXPECT_EQ(rational_gcd(Rational(2), Rational(4)), Rational(2));
    EXPECT_EQ(rational_gcd(Rational(799, 400), Rational(1601, 400)), Rational(1, 400));
    EXPECT_EQ(rational_gcd(Rational(1, 2), Rational(1, 3)), Rational(1, 6));
}

TEST(Rational, OverflowIsReported) {
    const Rational big(INT64_MAX / 2);
    EXPECT_THROW(big * Rational(4), InvalidArgument);
}

namespace {

SpacePtr rabi_space() { return make_space({Factor::qubit(), Factor::boson(5)}); }

} // namespace

TEST(Expression, LadderProducts) {
    const auto s = rabi_space();
    const std::map<std::string, Complex> params{{"lambda", {0.05, 0.0}}};
    const auto op = parse_operator_expr("lambda*a(1)*sp(0)", s, params);
    const auto expected = Complex{0.05, 0.0} * boson_op(s, 1, BosonOp::kA) * qubit_op(s, 0, QubitOp::kSp);
    EXPECT_LE(max_abs_diff(op, expected), 1e-17);
}

TEST(Expression, SumsScalarsAndFunctions) {
    const auto s = make_space({Factor::qubit(), Factor::qubit(), Factor::boson(3)});
    const std::map<std::string, Complex> params{{"lambda", {0.1, 0.0}}, {"theta", {M_PI / 3, 0.0}}};
    const auto op = parse_operator_expr("lambda*cos(theta)*adag(2)*(sm(0) + sm(1))", s, params);
    const auto ad = boson_op(s, 2, BosonOp::kAdag);
    const auto expected =
        Complex{0.1 * std::cos(M_PI / 3), 0.0} * ad * (qubit_op(s, 0, QubitOp::kSm) + qubit_op(s, 1, QubitOp::kSm));
    EXPECT_LE(max_abs_diff(op, expected), 1e-16);

    // A scalar in a sum is a multiple of the identity.
    const auto shifted = parse_operator_expr("n(2) + 2", s, {});
    EXPECT_LE(max_abs_diff(shifted, boson_op(s, 2, BosonOp::kN) + Complex{2.0, 0.0} * Operator::identity(s)), 0.0);
    const auto imag = parse_operator_expr("I*sz(0)/2 - -sqrt(4)*id", s, {});
    EXPECT_LE(max_abs_diff(imag, Complex{0.0, 0.5} * qubit_op(s, 0, QubitOp::kSz) +
                                     Complex{2.0, 0.0} * Operator::identity(s)),
              1e-16);
}

TEST(Expression, PrintReparseRoundTrip) {
    const auto s = rabi_space();
    const std::map<std::string, Complex> params{{"lambda", {0.03, 0.0}}, {"theta", {0.4, 0.0}}};
    for (const char* src : {"lambda*a(1)*sp(0)", "-lambda*(adag(1) + a(1))*sz(0)/3", "2.5e-1*n(1)*n(1) - id",
                            "sin(theta) + 1", "exp(-theta)*sm(0)*adag(1)"}) {
        SCOPED_TRACE(src);
        const auto e = Expression::parse(src);
        const auto text = e.to_string();
        const auto again = Expression::parse(text);
        EXPECT_EQ(again.to_string(), text);
        EXPECT_LE(max_abs_diff(e.evaluate(s, params), again.evaluate(s, params)), 0.0);
    }
}

TEST(Expression, Errors) {
    const auto s = rabi_space();
    const auto offset_of = [&](const char* src) -> std::size_t {
        try {
            parse_operator_expr(src, s, {{"lambda", {1.0, 0.0}}});
        } catch (const ParseError& e) {
            return e.offset();
        }
        ADD_FAILURE() << "no ParseError for " << src;
        return 0;
    };
    EXPECT_EQ(offset_of("a(1) * * sp(0)"), 7u);
    EXPECT_EQ(offset_of("lambda * foo"), 9u);
    EXPECT_EQ(offset_of("a(0)"), 0u);
    EXPECT_EQ(offset_of("sp(1)"), 0u);
    EXPECT_EQ(offset_of("a(7)"), 0u);
    EXPECT_EQ(offset_of("sp(0)/a(1)"), 5u);
    (void)offset_of("(a(1)");
    (void)offset_of("cos(a(1))");
    (void)offset_of("1/0");
    (void)offset_of("");
}
