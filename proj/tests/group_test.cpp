#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "carnot/constructors.hpp"
#include "carnot/group.hpp"
#include "carnot/hall.hpp"
#include "test_util.hpp"

using namespace carnot;

namespace {

GroupPoint random_point(std::mt19937_64& rng, int n) {
    GroupPoint p;
    for (int i = 0; i < n; ++i) p.push_back(test_util::random_rational(rng));
    return p;
}

GroupPoint pt(std::initializer_list<long> xs) {
    GroupPoint p;
    for (long v : xs) p.emplace_back(v);
    return p;
}

std::vector<StratifiedAlgebra> fleet() {
    return {build_abelian(3),
            build_heisenberg(),
            build_engel(),
            build_filiform_model(5),
            build_unit_upper_triangular(3),
            build_unit_upper_triangular(4),
            build_example2_algebra(Rational(2)),
            build_free_nilpotent(2, 4),
            build_free_nilpotent(3, 3)};
}

}  // namespace

TEST(GroupLaw, HeisenbergFormula) {
    auto law = derive_group_law(build_heisenberg());
    auto expected = parse_polynomial("x3 + x6 + 1/2*x1*x5 - 1/2*x2*x4");
    EXPECT_EQ(law.z[2], expected);
    EXPECT_EQ(law.z[0], parse_polynomial("x1 + x4"));
    EXPECT_EQ(multiply(law, pt({1, 0, 0}), pt({0, 1, 0})), (GroupPoint{Rational(1), Rational(1), Rational(1, 2)}));
}

TEST(GroupLaw, AbelianIsAddition) {
    auto law = derive_group_law(build_abelian(3));
    for (int k = 0; k < 3; ++k) EXPECT_EQ(law.z[static_cast<std::size_t>(k)], Polynomial::variable(k) + Polynomial::variable(3 + k));
}

TEST(GroupLaw, MatchesMatrixOracle) {
    for (int m = 2; m <= 4; ++m) {
        auto g = build_unit_upper_triangular(m);
        auto law = derive_group_law(g);
        EXPECT_EQ(law.z, matrix_oracle_gm_law(m)) << "m=" << m;
        std::mt19937_64 rng(static_cast<std::uint64_t>(m));
        for (int t = 0; t < 20; ++t) {
            auto x = random_point(rng, g.dimension()), y = random_point(rng, g.dimension());
            auto via_matrices = matrix_oracle_gm_log(m, matrix_oracle_gm(g, m, x) * matrix_oracle_gm(g, m, y));
            EXPECT_EQ(multiply(law, x, y), via_matrices);
        }
    }
}

TEST(GroupLaw, StructuralChecksOnFleet) {
    for (const auto& g : fleet()) {
        auto law = derive_group_law(g);
        EXPECT_TRUE(law_has_identity(law)) << g.name();
        EXPECT_TRUE(law_is_homogeneous(law)) << g.name();
        EXPECT_TRUE(left_translation_unimodular(law)) << g.name();
    }
}

TEST(GroupLaw, AxiomsOnRandomTriples) {
    std::mt19937_64 rng(99);
    for (const auto& g : fleet()) {
        auto law = derive_group_law(g);
        const GroupPoint zero(static_cast<std::size_t>(g.dimension()));
        for (int t = 0; t < 10; ++t) {
            auto a = random_point(rng, g.dimension()), b = random_point(rng, g.dimension()), c = random_point(rng, g.dimension());
            EXPECT_EQ(multiply(law, multiply(law, a, b), c), multiply(law, a, multiply(law, b, c))) << g.name();
            EXPECT_EQ(multiply(law, a, zero), a);
            EXPECT_EQ(multiply(law, zero, a), a);
            EXPECT_EQ(multiply(law, a, group_inverse(a)), zero);
        }
    }
}

TEST(GroupLaw, RejectsWrongLength) {
    auto law = derive_group_law(build_heisenberg());
    EXPECT_THROW(multiply(law, pt({1, 2}), pt({1, 2, 3})), InputError);
}

TEST(GroupLaw, TermCap) {
    EXPECT_THROW(derive_group_law(build_free_nilpotent(3, 3), 10), ResourceLimitError);
}

TEST(GroupLaw, JsonExport) {
    auto j = to_json(derive_group_law(build_heisenberg()));
    EXPECT_EQ(j["dimension"], 3);
    EXPECT_EQ(j["law"][2]["terms"].size(), 4u);
}

TEST(Dilation, EngelWeights) {
    auto g = build_engel();
    EXPECT_EQ(dilate(g, Rational(2), pt({1, 1, 1, 1})), pt({2, 2, 4, 8}));
    EXPECT_EQ(dilate(g, Rational(1), pt({3, 1, 4, 1})), pt({3, 1, 4, 1}));
    EXPECT_THROW(dilate(g, Rational(0), pt({1, 1, 1, 1})), InputError);
    EXPECT_THROW(dilate(g, Rational(-1), pt({1, 1, 1, 1})), InputError);
}

TEST(Dilation, AutomorphismAndComposition) {
    std::mt19937_64 rng(1);
    auto g = build_heisenberg();
    auto law = derive_group_law(g);
    for (int t = 0; t < 100; ++t) {
        auto x = random_point(rng, 3), y = random_point(rng, 3);
        Rational lam(t % 7 + 1, t % 3 + 1), mu(2, 5);
        EXPECT_EQ(dilate(g, lam, multiply(law, x, y)), multiply(law, dilate(g, lam, x), dilate(g, lam, y)));
        EXPECT_EQ(dilate(g, lam, dilate(g, mu, x)), dilate(g, lam * mu, x));
    }
    for (const auto& h : fleet()) EXPECT_EQ(dilation_jacobian(h, Rational(3)), Rational(3).pow(homogeneous_dimension(h)));
}

TEST(DInfinity, Examples) {
    auto law = derive_group_law(build_heisenberg());
    auto zero = pt({0, 0, 0});
    auto d1 = d_infinity(law, {}, pt({3, 4, 0}), zero);
    ASSERT_TRUE(d1.exact);
    EXPECT_EQ(*d1.exact, Rational(5));
    EXPECT_DOUBLE_EQ(d1.value, 5.0);
    auto d2 = d_infinity(law, {Rational(1, 2)}, pt({0, 0, 4}), zero);
    ASSERT_TRUE(d2.exact);
    EXPECT_EQ(*d2.exact, Rational(1));
    auto d3 = d_infinity(law, {}, pt({1, 2, 3}), pt({1, 2, 3}));
    EXPECT_EQ(*d3.exact, Rational(0));
    EXPECT_THROW(d_infinity(law, {Rational(0)}, zero, zero), InputError);
    EXPECT_THROW(d_infinity(law, {Rational(3, 2)}, zero, zero), InputError);
}

TEST(DInfinity, HomogeneityAndSymmetry) {
    std::mt19937_64 rng(17);
    for (const auto& g : {build_heisenberg(), build_engel(), build_unit_upper_triangular(3)}) {
        auto law = derive_group_law(g);
        const GroupPoint zero(static_cast<std::size_t>(g.dimension()));
        for (int t = 0; t < 20; ++t) {
            auto x = random_point(rng, g.dimension());
            Rational lam(t % 5 + 1, 2);
            auto a = d_infinity(law, {}, x, zero), b = d_infinity(law, {}, dilate(g, lam, x), zero);
            for (int j = 1; j <= g.step(); ++j)
                EXPECT_EQ(b.squared_norms[static_cast<std::size_t>(j - 1)],
                          lam.pow(2 * j) * a.squared_norms[static_cast<std::size_t>(j - 1)]);
            EXPECT_NEAR(b.value, lam.to_double() * a.value, 1e-9 * (1 + b.value));
            EXPECT_EQ(d_infinity(law, {}, group_inverse(x), zero).squared_norms, a.squared_norms);
        }
    }
}

TEST(MatrixOracle, ExpAndLog) {
    auto g2 = build_unit_upper_triangular(2);
    GroupPoint p{Rational(2), Rational(3), Rational(5)};
    auto e = matrix_oracle_gm(g2, 2, p);
    EXPECT_EQ(e(0, 2), Rational(5) + Rational(2) * Rational(3) / Rational(2));
    EXPECT_EQ(matrix_oracle_gm(g2, 2, GroupPoint(3)), RationalMatrix::identity(3));
    std::mt19937_64 rng(4);
    for (int m = 2; m <= 4; ++m) {
        auto g = build_unit_upper_triangular(m);
        for (int t = 0; t < 100; ++t) {
            auto x = random_point(rng, g.dimension());
            EXPECT_EQ(matrix_oracle_gm_log(m, matrix_oracle_gm(g, m, x)), x);
        }
    }
    EXPECT_THROW(matrix_oracle_gm(build_heisenberg(), 2, p), InputError);
}
