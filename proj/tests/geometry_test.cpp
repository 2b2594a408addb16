#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "carnot/geometry.hpp"
#include "test_util.hpp"

using namespace carnot;

namespace {

Polynomial x(int v) { return Polynomial::variable(v); }

Polynomial random_polynomial(std::mt19937_64& rng, int vars) {
    std::uniform_int_distribution<int> var(0, vars - 1), exp(0, 2);
    Polynomial p;
    for (int t = 0; t < 4; ++t) {
        Monomial m = Monomial::variable(var(rng), exp(rng)) * Monomial::variable(var(rng), exp(rng));
        p.add_term(m, test_util::random_rational(rng));
    }
    return p;
}

}  // namespace

TEST(Fields, HeisenbergExpChart) {
    auto fields = left_invariant_fields(derive_group_law(build_heisenberg()));
    PolyVectorField x1 = PolyVectorField::partial(3, 0), x2 = PolyVectorField::partial(3, 1);
    x1.coefficient(2) = x(1) * Rational(-1, 2);
    x2.coefficient(2) = x(0) * Rational(1, 2);
    EXPECT_EQ(fields[0], x1);
    EXPECT_EQ(fields[1], x2);
    EXPECT_EQ(commutator(fields[0], fields[1]), PolyVectorField::partial(3, 2));
}

TEST(Fields, AbelianArePartials) {
    auto fields = left_invariant_fields(derive_group_law(build_abelian(4)));
    for (int i = 0; i < 4; ++i) EXPECT_EQ(fields[static_cast<std::size_t>(i)], PolyVectorField::partial(4, i));
}

TEST(Fields, BracketSoundnessOnFleet) {
    for (const auto& g : {build_heisenberg(), build_engel(), build_filiform_model(5), build_unit_upper_triangular(3),
                          build_unit_upper_triangular(4), build_example2_algebra(Rational(3)), build_free_nilpotent(2, 3),
                          build_free_nilpotent(2, 4), build_free_nilpotent(3, 2)}) {
        auto fields = left_invariant_fields(derive_group_law(g));
        EXPECT_TRUE(fields_realize_algebra(g, fields)) << g.name();
        const std::vector<Rational> origin(static_cast<std::size_t>(g.dimension()));
        for (int i = 0; i < g.dimension(); ++i) {
            auto v = fields[static_cast<std::size_t>(i)].at(origin);
            for (int k = 0; k < g.dimension(); ++k) EXPECT_EQ(v[static_cast<std::size_t>(k)], Rational(i == k ? 1 : 0));
        }
    }
}

TEST(Fields, DerivationLaw) {
    std::mt19937_64 rng(8);
    auto fields = left_invariant_fields(derive_group_law(build_free_nilpotent(2, 3)));
    auto chart = paper_filiform_fields(4);
    for (int t = 0; t < 20; ++t) {
        auto f = random_polynomial(rng, 5), h = random_polynomial(rng, 5);
        for (const auto& X : fields) EXPECT_EQ(X.apply(f * h), X.apply(f) * h + f * X.apply(h));
        for (const auto& X : chart) EXPECT_EQ(X.apply(f * h), X.apply(f) * h + f * X.apply(h));
    }
}

TEST(Fields, FixedFiliformChart) {
    auto f3 = paper_filiform_fields(3);
    EXPECT_EQ(f3[0], PolyVectorField::partial(4, 0));
    PolyVectorField x2 = PolyVectorField::partial(4, 1);
    x2.coefficient(2) = -x(0);
    x2.coefficient(3) = x(0).pow(2) * Rational(1, 2);
    EXPECT_EQ(f3[1], x2);
    for (int kappa = 2; kappa <= 6; ++kappa) {
        auto chain = filiform_chain(paper_filiform_fields(kappa), kappa);
        EXPECT_TRUE(fields_realize_algebra(build_filiform_model(kappa), chain)) << kappa;
    }
    EXPECT_THROW(paper_filiform_fields(1), InputError);
}

TEST(Gradient, Examples) {
    auto f = parse_polynomial("x2^3/3 + 2*x4");
    auto grad = horizontal_gradient(paper_filiform_fields(3), f);
    EXPECT_TRUE(grad[0].is_zero());
    EXPECT_EQ(grad[1], parse_polynomial("x1^2 + x2^2"));
    for (const auto& g : horizontal_gradient(paper_filiform_fields(3), Polynomial(7))) EXPECT_TRUE(g.is_zero());
    auto h = left_invariant_fields(derive_group_law(build_heisenberg()));
    h.resize(2);
    auto hg = horizontal_gradient(h, x(2));
    EXPECT_EQ(hg[0], x(1) * Rational(-1, 2));
    EXPECT_EQ(hg[1], x(0) * Rational(1, 2));
}

TEST(Homogeneity, Weights) {
    auto engel = build_engel();
    EXPECT_EQ(check_delta_homogeneity(engel, parse_polynomial("x2^3/3 + 2*x4")), 3);
    EXPECT_EQ(check_delta_homogeneity(engel, x(0)), 1);
    EXPECT_FALSE(check_delta_homogeneity(engel, x(0) + x(2)));
    EXPECT_FALSE(check_delta_homogeneity(engel, Polynomial()));
    EXPECT_EQ(check_delta_homogeneity(engel, Polynomial(5)), 0);
    EXPECT_THROW(check_delta_homogeneity(engel, x(7)), InputError);
}

TEST(Homogeneity, FieldsLowerWeight) {
    std::mt19937_64 rng(12);
    auto g = build_free_nilpotent(2, 3);
    auto fields = left_invariant_fields(derive_group_law(g));
    auto weights = coordinate_weights(g);
    std::vector<Monomial> w3;
    detail::weighted_monomials(weights, 3, 0, Monomial{}, w3);
    for (int t = 0; t < 10; ++t) {
        Polynomial f;
        for (const auto& m : w3) f.add_term(m, test_util::random_rational(rng));
        ASSERT_EQ(check_delta_homogeneity(weights, f), 3);
        for (int i = 0; i < g.dimension(); ++i) {
            auto xf = fields[static_cast<std::size_t>(i)].apply(f);
            if (!xf.is_zero()) {
                EXPECT_EQ(check_delta_homogeneity(weights, xf), 3 - weights[static_cast<std::size_t>(i)]);
            }
        }
    }
}

TEST(Normal, FiliformCounterexample) {
    auto fields = paper_filiform_fields(3);
    auto f = parse_polynomial("x2^3/3 + 2*x4");
    std::vector<Rational> p{Rational(1), Rational(0), Rational(0), Rational(0)};
    auto n = levelset_intrinsic_normal(fields, f, p);
    EXPECT_FALSE(n.characteristic);
    ASSERT_TRUE(n.exact);
    EXPECT_EQ(*n.exact, (std::vector<Rational>{Rational(0), Rational(-1)}));
    std::vector<Rational> origin(4);
    EXPECT_TRUE(levelset_intrinsic_normal(fields, f, origin).characteristic);
    std::vector<Rational> off{Rational(0), Rational(3), Rational(0), Rational(0)};
    EXPECT_THROW(levelset_intrinsic_normal(fields, f, off), InputError);
}

TEST(Normal, HeisenbergAndUnitLength) {
    auto h = left_invariant_fields(derive_group_law(build_heisenberg()));
    h.resize(2);
    auto n = levelset_intrinsic_normal(h, x(0), std::vector<Rational>(3));
    EXPECT_EQ(*n.exact, (std::vector<Rational>{Rational(-1), Rational(0)}));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        // f = x3 - x1 x2 / 2 + c x1 passes through points with x3 chosen on it
        auto a = test_util::random_rational(rng), b = test_util::random_rational(rng);
        auto f = x(2) - a * x(0) - b * x(1);
        std::vector<Rational> p{Rational(1), Rational(2), a + b * Rational(2)};
        auto r = levelset_intrinsic_normal(h, f, p);
        if (r.characteristic) continue;
        double sq = 0;
        for (double v : r.normal) sq += v * v;
        EXPECT_NEAR(sq, 1.0, 1e-12);
    }
}

TEST(Quadratic, Classification) {
    EXPECT_EQ((BinaryQuadratic{Rational(1), Rational(0), Rational(1)}).sign(), "positive definite");
    EXPECT_EQ((BinaryQuadratic{Rational(1), Rational(2), Rational(1)}).sign(), "positive semidefinite");
    EXPECT_EQ((BinaryQuadratic{Rational(-1), Rational(0), Rational(0)}).sign(), "negative semidefinite");
    EXPECT_EQ((BinaryQuadratic{Rational(1), Rational(3), Rational(1)}).sign(), "indefinite");
    EXPECT_FALSE(as_binary_quadratic(parse_polynomial("x1^2 + x3")));
    auto q = as_binary_quadratic(parse_polynomial("3*x1^2 - x1*x2"));
    ASSERT_TRUE(q);
    EXPECT_EQ(q->b, Rational(-1));
}

TEST(Counterexample, Filiform) {
    for (int kappa = 3; kappa <= 5; ++kappa) {
        auto r = filiform_counterexample(kappa);
        EXPECT_TRUE(r.ok()) << kappa;
        EXPECT_EQ(r.weight, 3);
        EXPECT_EQ(r.gradient[1], parse_polynomial("x1^2 + x2^2"));
        EXPECT_EQ(r.q->sign(), "positive definite");
        ASSERT_TRUE(r.sample_normal && r.sample_normal->exact);
        EXPECT_EQ(*r.sample_normal->exact, (std::vector<Rational>{Rational(0), Rational(-1)}));
    }
    EXPECT_THROW(filiform_counterexample(2), InputError);
}

TEST(Counterexample, FreeExpChart) {
    for (auto [m, k] : {std::pair{2, 3}, std::pair{3, 3}, std::pair{2, 4}}) {
        auto r = free_counterexample(m, k);
        EXPECT_TRUE(r.ok()) << m << "," << k << " f=" << r.f.str();
        EXPECT_TRUE(r.q->definite());
        EXPECT_EQ(r.f.coefficient(Monomial::variable(r.j_index)), r.c);
        EXPECT_EQ(r.f.coefficient(Monomial::variable(1, 3)), Rational(1, 3));
    }
    auto r = free_counterexample(2, 3);
    EXPECT_EQ(r.j_index, 3);
    EXPECT_THROW(free_counterexample(1, 3), InputError);
    EXPECT_THROW(free_counterexample(2, 2), InputError);
}
