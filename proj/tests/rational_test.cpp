#include <gtest/gtest.h>

#include "carnot/rational.hpp"

using carnot::Rational;

TEST(Rational, StoredInLowestTerms) {
    Rational r(6, -4);
    EXPECT_EQ(r.str(), "-3/2");
    EXPECT_EQ(r.denominator(), 2);
    EXPECT_EQ(Rational(10, 5).str(), "2");
}

TEST(Rational, ExactArithmetic) {
    Rational a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_EQ(Rational(2, 3).pow(3), Rational(8, 27));
    EXPECT_EQ(Rational(2, 3).pow(-2), Rational(9, 4));
}

TEST(Rational, DivisionByZeroThrows) {
    EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
    EXPECT_THROW(Rational(0).inverse(), std::domain_error);
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ParseAndFormat) {
    EXPECT_EQ(Rational::parse("-4/6"), Rational(-2, 3));
    EXPECT_EQ(Rational::parse("7"), Rational(7));
    EXPECT_EQ(Rational::parse("+7/2").str(), "7/2");
    EXPECT_THROW(Rational::parse("1/0"), carnot::InputError);
    EXPECT_THROW(Rational::parse("abc"), carnot::InputError);
    EXPECT_THROW(Rational::parse("1/-2"), carnot::InputError);
    EXPECT_THROW(Rational::parse(""), carnot::InputError);
}

TEST(Rational, Ordering) {
    EXPECT_LT(Rational(-1, 2), Rational(1, 3));
    EXPECT_GT(Rational(5, 3), Rational(3, 2));
    EXPECT_EQ(carnot::abs(Rational(-3, 4)), Rational(3, 4));
    EXPECT_EQ(carnot::factorial(5), Rational(120));
}
