#pragma once

#include <random>

#include "carnot/algebra.hpp"

namespace carnot::test_util {

inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 3);
    return Rational(num(rng), den(rng));
}

inline AlgebraVector random_vector(std::mt19937_64& rng, int n) {
    AlgebraVector v;
    for (int i = 0; i < n; ++i) v.add(i, random_rational(rng));
    return v;
}

/// Generic element of the first layer.
inline AlgebraVector random_horizontal(std::mt19937_64& rng, const StratifiedAlgebra& g) {
    AlgebraVector v;
    for (int i = 0; i < g.rank(); ++i) v.add(i, random_rational(rng));
    return v;
}

}  // namespace carnot::test_util
