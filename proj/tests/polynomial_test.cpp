#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "carnot/polynomial.hpp"
#include "test_util.hpp"

using namespace carnot;

namespace {

Polynomial x(int v) { return Polynomial::variable(v); }

Polynomial random_polynomial(std::mt19937_64& rng, int vars, int terms, int max_exp) {
    std::uniform_int_distribution<int> var(0, vars - 1), exp(0, max_exp);
    Polynomial p;
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (int k = 0; k < 2; ++k) m = m * Monomial::variable(var(rng), exp(rng));
        p.add_term(m, test_util::random_rational(rng));
    }
    return p;
}

}  // namespace

TEST(Polynomial, ParseAndPrint) {
    auto p = parse_polynomial("x2^3/3 + 2*x4");
    EXPECT_EQ(p, x(1).pow(3) * Rational(1, 3) + x(3) * Rational(2));
    EXPECT_EQ(parse_polynomial(p.str()), p);
    EXPECT_EQ(parse_polynomial("-1/2*x1*x3 + 5"), Polynomial(5) - Rational(1, 2) * x(0) * x(2));
    EXPECT_EQ(parse_polynomial("0"), Polynomial());
    EXPECT_EQ(Polynomial().str(), "0");
}

TEST(Polynomial, ParseRejectsGarbage) {
    EXPECT_THROW(parse_polynomial(""), InputError);
    EXPECT_THROW(parse_polynomial("x0"), InputError);
    EXPECT_THROW(parse_polynomial("x1 ? 2"), InputError);
    EXPECT_THROW(parse_polynomial("x1/0"), InputError);
}

TEST(Polynomial, Degrees) {
    auto p = parse_polynomial("x1^2*x2 + x3 - 4");
    EXPECT_EQ(p.degree(), 3);
    EXPECT_EQ(p.degree_in(0), 2);
    EXPECT_EQ(p.max_variable(), 2);
    EXPECT_TRUE(p.uses_variable(1));
    EXPECT_FALSE(p.uses_variable(3));
    EXPECT_EQ(p.constant_term(), Rational(-4));
}

TEST(Polynomial, Derivative) {
    auto p = parse_polynomial("x1^3*x2 + x2^2");
    EXPECT_EQ(p.derivative(0), parse_polynomial("3*x1^2*x2"));
    EXPECT_EQ(p.derivative(1), parse_polynomial("x1^3 + 2*x2"));
    EXPECT_TRUE(p.derivative(5).is_zero());
}

TEST(Polynomial, Evaluate) {
    auto p = parse_polynomial("x1^2 - x1*x2/2 + 1");
    std::vector<Rational> at{Rational(2), Rational(3)};
    EXPECT_EQ(p.evaluate(at), Rational(2));
}

TEST(Polynomial, SubstituteFractionClearsDenominator) {
    // p = x1*x3 - x2, x1 = x2/x3  ->  (x2/x3)*x3 - x2 = 0
    auto p = parse_polynomial("x1*x3 - x2");
    EXPECT_TRUE(p.substitute_fraction(0, x(1), x(2)).is_zero());
    auto q = parse_polynomial("x1^2 + x2");
    // (a/b)^2 + c  ->  a^2 + c b^2
    EXPECT_EQ(q.substitute_fraction(0, x(3), x(4)), x(3).pow(2) + x(1) * x(4).pow(2));
}

TEST(Polynomial, RingLawsOnRandomSamples) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        auto a = random_polynomial(rng, 4, 4, 3), b = random_polynomial(rng, 4, 4, 3), c = random_polynomial(rng, 4, 3, 2);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * b, b * a);
        // Leibniz rule for each partial derivative
        for (int v = 0; v < 4; ++v) EXPECT_EQ((a * b).derivative(v), a.derivative(v) * b + a * b.derivative(v));
        // evaluation is a ring homomorphism
        std::vector<Rational> pt;
        for (int v = 0; v < 4; ++v) pt.push_back(test_util::random_rational(rng));
        EXPECT_EQ((a * b + c).evaluate(pt), a.evaluate(pt) * b.evaluate(pt) + c.evaluate(pt));
    }
}

TEST(Polynomial, ComposeAgreesWithEvaluation) {
    std::mt19937_64 rng(11);
    auto p = random_polynomial(rng, 3, 5, 3);
    std::vector<Polynomial> images{x(0) + x(1), x(1) * x(2), Polynomial(2)};
    auto composed = p.compose([&](int v) { return images[static_cast<std::size_t>(v)]; });
    std::vector<Rational> pt{Rational(1, 2), Rational(-3), Rational(2, 3)};
    std::vector<Rational> inner;
    for (const auto& im : images) inner.push_back(im.evaluate(pt));
    EXPECT_EQ(composed.evaluate(pt), p.evaluate(inner));
}
