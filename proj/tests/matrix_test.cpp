#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "carnot/matrix.hpp"

using carnot::Rational;
using carnot::RationalMatrix;

namespace {

// Leibniz permutation expansion: independent of elimination.
Rational leibniz_det(const RationalMatrix& m) {
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    Rational total(0);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) ++inversions;
        Rational term(inversions % 2 ? -1 : 1);
        for (std::size_t i = 0; i < perm.size(); ++i) term *= m(i, perm[i]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 3);
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational(num(rng), den(rng));
    return m;
}

}  // namespace

TEST(Matrix, DeterminantMatchesLeibniz) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        auto m = random_matrix(rng, 1 + trial % 5);
        EXPECT_EQ(carnot::determinant(m), leibniz_det(m));
        EXPECT_EQ(carnot::cofactor_determinant(m), leibniz_det(m));
    }
}

TEST(Matrix, KnownDeterminant) {
    RationalMatrix a{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}};
    EXPECT_EQ(carnot::determinant(a), Rational(-3));
    RationalMatrix s{{1, 2}, {2, 4}};
    EXPECT_EQ(carnot::determinant(s), Rational(0));
}

TEST(Matrix, RowReducePivotsOnSmallestColumn) {
    RationalMatrix m{{0, 2, 4}, {0, 1, 2}, {3, 0, 3}};
    auto e = carnot::row_reduce(m);
    ASSERT_EQ(e.rank(), 2u);
    EXPECT_EQ(e.pivots[0], 0u);
    EXPECT_EQ(e.pivots[1], 1u);
    EXPECT_EQ(e.reduced(0, 2), Rational(1));
    EXPECT_EQ(e.reduced(1, 2), Rational(2));
}

TEST(Matrix, InverseAndSolve) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_matrix(rng, 4);
        auto inv = carnot::inverse(m);
        if (carnot::determinant(m).is_zero()) {
            EXPECT_FALSE(inv.has_value());
            continue;
        }
        ASSERT_TRUE(inv.has_value());
        EXPECT_EQ(m * *inv, RationalMatrix::identity(4));
        std::vector<Rational> b{1, 2, 3, 4};
        auto x = carnot::solve(m, b);
        ASSERT_TRUE(x.has_value());
        for (std::size_t i = 0; i < 4; ++i) {
            Rational s(0);
            for (std::size_t j = 0; j < 4; ++j) s += m(i, j) * (*x)[j];
            EXPECT_EQ(s, b[i]);
        }
    }
    RationalMatrix singular{{1, 1}, {1, 1}};
    EXPECT_FALSE(carnot::solve(singular, {1, 2}).has_value());
}
