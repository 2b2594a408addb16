#include <gtest/gtest.h>

#include <random>

#include "carnot/algebra.hpp"
#include "carnot/constructors.hpp"
#include "carnot/json_io.hpp"
#include "test_util.hpp"

using namespace carnot;

namespace {

// G3 basis: E12 E23 E34 | E13 E24 | E14
constexpr int E12 = 0, E23 = 1, E34 = 2, E13 = 3, E24 = 4, E14 = 5;

}  // namespace

TEST(Bracket, UnitUpperTriangularLaw) {
    auto g = build_unit_upper_triangular(3);
    EXPECT_EQ(g.bracket(basis_vector(E12), basis_vector(E23)), basis_vector(E13));
    EXPECT_EQ(g.bracket(basis_vector(E13), basis_vector(E24)), AlgebraVector{});
    EXPECT_EQ(g.bracket(basis_vector(E13), basis_vector(E34)), basis_vector(E14));
    EXPECT_EQ(g.bracket(basis_vector(E34), basis_vector(E12)), AlgebraVector{});
    EXPECT_EQ(g.bracket(basis_vector(E24), basis_vector(E12)), -basis_vector(E14));
}

TEST(Bracket, SelfBracketVanishes) {
    std::mt19937_64 rng(3);
    auto g = build_unit_upper_triangular(4);
    for (int t = 0; t < 20; ++t) {
        auto x = test_util::random_vector(rng, g.dimension());
        EXPECT_TRUE(g.bracket(x, x).is_zero());
    }
}

TEST(Bracket, IndexOutOfRangeThrows) {
    auto g = build_heisenberg();
    EXPECT_THROW(g.bracket(basis_vector(0), basis_vector(7)), InputError);
    EXPECT_THROW(adapted_layer(g, 3), InputError);
    EXPECT_THROW(adapted_layer(g, -1), InputError);
}

TEST(Bracket, BilinearAntisymmetricJacobi) {
    std::mt19937_64 rng(5);
    for (int m = 2; m <= 4; ++m) {
        auto g = build_unit_upper_triangular(m);
        const int n = g.dimension();
        for (int t = 0; t < 15; ++t) {
            auto a = test_util::random_vector(rng, n), b = test_util::random_vector(rng, n), c = test_util::random_vector(rng, n);
            Rational s = test_util::random_rational(rng);
            EXPECT_EQ(g.bracket(a, b), -g.bracket(b, a));
            EXPECT_EQ(g.bracket(a * s + c, b), g.bracket(a, b) * s + g.bracket(c, b));
            AlgebraVector jac = g.bracket(a, g.bracket(b, c)) + g.bracket(b, g.bracket(c, a)) + g.bracket(c, g.bracket(a, b));
            EXPECT_TRUE(jac.is_zero());
        }
    }
}

TEST(Bracket, HomogeneousInputsGiveHomogeneousOutput) {
    std::mt19937_64 rng(9);
    auto g = build_unit_upper_triangular(4);
    for (int i = 1; i <= g.step(); ++i)
        for (int j = 1; j <= g.step(); ++j) {
            AlgebraVector a, b;
            for (int k = g.layer_begin(i); k < g.layer_end(i); ++k) a.add(k, test_util::random_rational(rng));
            for (int k = g.layer_begin(j); k < g.layer_end(j); ++k) b.add(k, test_util::random_rational(rng));
            auto c = g.bracket(a, b);
            if (i + j > g.step())
                EXPECT_TRUE(c.is_zero());
            else
                EXPECT_TRUE(c.is_zero() || g.homogeneous_layer(c) == i + j);
        }
}

TEST(AdaptedLayer, Examples) {
    EXPECT_EQ(adapted_layer(build_engel(), 3), 3);
    EXPECT_EQ(adapted_layer(build_unit_upper_triangular(3), E24), 2);
    EXPECT_EQ(adapted_layer(build_heisenberg(), 2), 2);
}

TEST(Validate, G3AllChecksPass) {
    auto r = validate(build_unit_upper_triangular(3));
    EXPECT_TRUE(r.jacobi_ok());
    EXPECT_TRUE(r.grading_ok());
    EXPECT_TRUE(r.generation_ok());
}

TEST(Validate, AbelianPlane) {
    auto r = validate(build_abelian(2));
    EXPECT_TRUE(r.ok());
}

TEST(Validate, GmFamily) {
    for (int m = 2; m <= 6; ++m) EXPECT_TRUE(validate(build_unit_upper_triangular(m)).ok()) << m;
}

TEST(Validate, TamperedConstantReportsJacobiWitness) {
    auto g = build_unit_upper_triangular(3);
    StructureConstants sc = g.constants();
    sc.set(E12, E23, Rational(2) * basis_vector(E13));
    StratifiedAlgebra bad("G3-tampered", g.layer_dims(), {"a", "b", "c", "d", "e", "f"}, sc);
    auto r = validate(bad);
    EXPECT_FALSE(r.jacobi_ok());
    EXPECT_EQ(r.jacobi.witness, (std::vector<int>{E12, E23, E34}));
    EXPECT_TRUE(r.grading_ok());
}

TEST(Validate, GradingAndGenerationFailures) {
    StructureConstants sc(3);
    sc.set(0, 1, basis_vector(1));
    StratifiedAlgebra bad_grading("bad", {2, 1}, {"a", "b", "c"}, sc);
    EXPECT_FALSE(validate(bad_grading).grading_ok());

    StratifiedAlgebra not_generated("flat", {2, 1}, {"a", "b", "c"}, StructureConstants(3));
    auto r = validate(not_generated);
    EXPECT_FALSE(r.generation_ok());
    EXPECT_EQ(r.generation.witness, (std::vector<int>{1, 2}));
}

TEST(Algebra, ConstructorRejectsInconsistentShapes) {
    EXPECT_THROW(StratifiedAlgebra("x", {2, 1}, {"a", "b"}, StructureConstants(3)), InputError);
    EXPECT_THROW(StratifiedAlgebra("x", {2, 0}, {"a", "b"}, StructureConstants(2)), InputError);
    StructureConstants sc(2);
    EXPECT_THROW(sc.set(0, 0, basis_vector(1)), InputError);
    EXPECT_THROW(sc.set(0, 1, basis_vector(5)), InputError);
}

TEST(Json, RoundTripPreservesAlgebra) {
    for (const auto& g : {build_unit_upper_triangular(4), build_engel(), build_free_nilpotent(3, 3),
                          build_example2_algebra(Rational(-3, 2))}) {
        auto j = to_json(g);
        auto back = algebra_from_json(Json::parse(j.dump()));
        EXPECT_EQ(to_json(back), j);
        EXPECT_EQ(back.layer_dims(), g.layer_dims());
    }
}

TEST(Json, SerializesRationalsAsStrings) {
    auto j = to_json(build_example2_algebra(Rational(1, 2)));
    EXPECT_EQ(j["layer_dims"], Json::parse("[3,2,1]"));
    bool saw_half = false;
    for (const auto& b : j["brackets"])
        for (const auto& t : b["terms"]) saw_half |= t["c"] == "1/2";
    EXPECT_TRUE(saw_half);
}

TEST(Json, MalformedInputRaisesInputError) {
    EXPECT_THROW(algebra_from_json(Json::parse(R"({"layer_dims":[2]})")), InputError);
    EXPECT_THROW(algebra_from_json(Json::parse(
                     R"({"name":"x","layer_dims":[2,1],"basis_labels":["a","b","c"],"brackets":[{"i":1,"j":0,"terms":[]}]})")),
                 InputError);
    EXPECT_THROW(algebra_from_json(Json::parse(
                     R"({"name":"x","layer_dims":[2,1],"basis_labels":["a","b","c"],"brackets":[{"i":0,"j":1,"terms":[{"k":2,"c":"1/0"}]}]})")),
                 InputError);
}

TEST(ChangeBasis, ExampleTwoSubstitutionGivesStarBasis) {
    auto g = build_example2_algebra(Rational(1));
    RationalMatrix b{{1, -1, 0}, {0, 1, 0}, {0, 0, 1}};
    auto h = change_first_layer_basis(g, b);
    EXPECT_TRUE(validate(h).ok());
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) EXPECT_TRUE(nested(h, j, j, i).is_zero()) << j << "," << i;
    EXPECT_THROW(change_first_layer_basis(g, RationalMatrix{{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}), InputError);
}

TEST(HomogeneousDimension, Examples) {
    EXPECT_EQ(homogeneous_dimension(build_heisenberg()), 4);
    EXPECT_EQ(homogeneous_dimension(build_unit_upper_triangular(3)), 10);
    EXPECT_EQ(homogeneous_dimension(build_engel()), 7);
}
