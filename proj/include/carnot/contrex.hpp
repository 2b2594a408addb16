#pragma once

#include <string>
#include <vector>

#include "carnot/constructors.hpp"
#include "carnot/hall.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/type_star.hpp"

namespace carnot {

/// The five sums of repeated commutators cut out of f_{3,k}: consecutive pairs
/// in the cyclic list R(1,2), R(1,3), R(2,1), R(2,3), R(3,1), R(3,2), where
/// R(j,i) = [X_j,[X_j,X_i]].
inline std::vector<AlgebraVector> contrex_relations(const StratifiedAlgebra& f) {
    auto r = [&](int j, int i) { return nested(f, j, j, i); };
    return {r(0, 1) + r(0, 2), r(0, 2) + r(1, 0), r(1, 0) + r(1, 2), r(1, 2) + r(2, 0), r(2, 0) + r(2, 1)};
}

inline Quotient contrex_quotient(int kappa) {
    if (kappa < 3) throw InputError("contrex algebra needs step >= 3");
    const auto f = build_free_nilpotent(3, kappa);
    return quotient(f, ideal_closure(f, contrex_relations(f)), "contrex(" + std::to_string(kappa) + ")");
}

/// Variable index of a_{rc} (1-based r, c) in the symbolic 3x3 matrix.
inline int entry_variable(int r, int c) { return 3 * (r - 1) + (c - 1); }

inline std::string entry_name(int v) { return "a" + std::to_string(v / 3 + 1) + std::to_string(v % 3 + 1); }

inline Matrix<Polynomial> symbolic_matrix3() {
    Matrix<Polynomial> a(3, 3);
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            a(static_cast<std::size_t>(r - 1), static_cast<std::size_t>(c - 1)) = Polynomial::variable(entry_variable(r, c));
    return a;
}

/// Coefficients of [Y1,[Y1,Y2]] in the five relations after X = A Y.
inline std::vector<Polynomial> contrex_alpha_system() {
    const auto a = symbolic_matrix3();
    const std::vector<std::vector<std::pair<int, int>>> relations = {
        {{0, 1}, {0, 2}}, {{0, 2}, {1, 0}}, {{1, 0}, {1, 2}}, {{1, 2}, {2, 0}}, {{2, 0}, {2, 1}}};
    const CommutatorKey target{0, 0, 1};
    std::vector<Polynomial> out;
    for (const auto& rel : relations) {
        Polynomial alpha;
        for (auto [j, i] : rel) {
            auto terms = expand_commutator(a, j, j, i);
            if (auto it = terms.find(target); it != terms.end()) alpha += it->second;
        }
        out.push_back(alpha);
    }
    return out;
}

/// Reference coefficients of the system, kept for comparison with the derived one.
inline std::vector<Polynomial> contrex_reference_system() {
    auto v = [](int r, int c) { return Polynomial::variable(entry_variable(r, c)); };
    const Polynomial m12 = v(1, 1) * v(2, 2) - v(1, 2) * v(2, 1);
    const Polynomial m13 = v(1, 1) * v(3, 2) - v(1, 2) * v(3, 1);
    const Polynomial m23 = v(2, 1) * v(3, 2) - v(2, 2) * v(3, 1);
    return {v(1, 1) * m12 + v(1, 1) * m13, -v(2, 1) * m12 + v(1, 1) * m13, -v(2, 1) * m12 + v(2, 1) * m23,
            -v(3, 1) * m13 + v(2, 1) * m23, -v(3, 1) * m13 - v(3, 1) * m23};
}

/// One condition of a solution family: a_{var} = num/den, or a_{var} != 0.
struct FamilyCondition {
    int var = 0;
    bool nonzero = false;
    Polynomial num;
    Polynomial den = Polynomial(1);
};

struct SolutionFamily {
    std::string description;
    std::vector<FamilyCondition> conditions;  // equalities applied in order
};

inline std::vector<SolutionFamily> contrex_solution_families() {
    auto v = [](int r, int c) { return Polynomial::variable(entry_variable(r, c)); };
    auto zero = [](int r, int c) { return FamilyCondition{entry_variable(r, c), false, Polynomial(), Polynomial(1)}; };
    auto nz = [](int r, int c) { return FamilyCondition{entry_variable(r, c), true, Polynomial(), Polynomial(1)}; };
    auto eq = [](int r, int c, Polynomial n, Polynomial d) { return FamilyCondition{entry_variable(r, c), false, n, d}; };
    return {
        {"a11 = a21 = a31 = 0", {zero(1, 1), zero(2, 1), zero(3, 1)}},
        {"a12 = a22 = a32 = 0", {zero(1, 2), zero(2, 2), zero(3, 2)}},
        {"a11 = a12 = a21 = a22 = 0", {zero(1, 1), zero(1, 2), zero(2, 1), zero(2, 2)}},
        {"a11 = a12 = a31 = a32 = 0", {zero(1, 1), zero(1, 2), zero(3, 1), zero(3, 2)}},
        {"a21 = a22 = a31 = a32 = 0", {zero(2, 1), zero(2, 2), zero(3, 1), zero(3, 2)}},
        {"a21 = a22 = 0, a11 = a12 a31/a32, a32 != 0",
         {zero(2, 1), zero(2, 2), eq(1, 1, v(1, 2) * v(3, 1), v(3, 2)), nz(3, 2)}},
        {"a11 = a12 a21/a22, a22 != 0, a31 = a32 = 0",
         {eq(1, 1, v(1, 2) * v(2, 1), v(2, 2)), nz(2, 2), zero(3, 1), zero(3, 2)}},
        {"a11 = a12 a21/a22, a22 != 0, a21 = a22 a31/a32, a32 != 0",
         {eq(1, 1, v(1, 2) * v(2, 1), v(2, 2)), nz(2, 2), eq(2, 1, v(2, 2) * v(3, 1), v(3, 2)), nz(3, 2)}},
        {"a11 = a12 = 0, a21 != 0, a21 = a22 a31/a32, a32 != 0",
         {zero(1, 1), zero(1, 2), nz(2, 1), eq(2, 1, v(2, 2) * v(3, 1), v(3, 2)), nz(3, 2)}},
    };
}

/// Numerator of p after applying the family's equalities in order.
inline Polynomial apply_family(const SolutionFamily& family, Polynomial p) {
    for (const auto& c : family.conditions) {
        if (c.nonzero) continue;
        p = c.den.is_constant() ? p.substitute(c.var, c.num * c.den.constant_term().inverse())
                                : p.substitute_fraction(c.var, c.num, c.den);
    }
    return p;
}

struct FamilyResult {
    std::string description;
    std::string det_after;  // numerator of det A after substitution
    bool det_zero = false;
    bool solves_system = false;
};

struct ContrexReport {
    int kappa = 3;
    std::vector<int> layer_dims;
    int dim_v3 = 0;
    long star_bound = 0;
    long free_bound = 0;
    bool condition_i_identity = true;
    std::vector<std::string> alpha_system;
    bool system_matches_reference = false;
    std::string det_symbolic;
    std::vector<FamilyResult> families;

    bool ok() const {
        if (dim_v3 != 3 || dim_v3 <= star_bound || condition_i_identity || !system_matches_reference) return false;
        for (const auto& f : families)
            if (!f.det_zero) return false;
        return families.size() == 9;
    }
};

inline ContrexReport verify_contrex(int kappa) {
    ContrexReport r;
    r.kappa = kappa;
    const Quotient q = contrex_quotient(kappa);
    r.layer_dims = q.algebra.layer_dims();
    r.dim_v3 = q.algebra.layer_dim(3);
    r.star_bound = v3_dimension_bound(3, true);
    r.free_bound = v3_dimension_bound(3, false);
    r.condition_i_identity = check_condition_i(q.algebra).holds;

    const auto system = contrex_alpha_system();
    const auto reference = contrex_reference_system();
    r.system_matches_reference = system == reference;
    for (const auto& p : system) r.alpha_system.push_back(p.str(entry_name));

    const Polynomial det = cofactor_determinant(symbolic_matrix3());
    r.det_symbolic = det.str(entry_name);
    for (const auto& family : contrex_solution_families()) {
        FamilyResult fr;
        fr.description = family.description;
        const Polynomial d = apply_family(family, det);
        fr.det_after = d.str(entry_name);
        fr.det_zero = d.is_zero();
        fr.solves_system = true;
        for (const auto& p : system) fr.solves_system = fr.solves_system && apply_family(family, p).is_zero();
        r.families.push_back(fr);
    }
    return r;
}

struct SubalgebraReport {
    bool bracket_nonzero = false;       // [X1+X2, X3] != 0
    bool double_nonzero = false;        // [X1+X2,[X1+X2,X3]] != 0
    bool double_matches = false;        // ... = [X2,[X1,X3]] + [X1,[X2,X3]]
    bool x3_kills = false;              // [X3,[X1+X2,X3]] = 0
    bool ambient_star = false;
    std::vector<int> subalgebra_dims;   // graded dims of Lie{X1+X2, X3}

    bool ok() const {
        return bracket_nonzero && double_nonzero && double_matches && x3_kills && ambient_star &&
               subalgebra_dims == std::vector<int>{2, 1, 1};
    }
};

/// The two-generated subalgebra Lie{X1+X2, X3} of f_{3,3}/<[X_j,[X_j,X_i]]>.
inline SubalgebraReport verify_remark_subalgebra() {
    const auto f = build_free_nilpotent(3, 3);
    const Quotient q = star_quotient(f);
    const auto& g = q.algebra;
    const AlgebraVector x1 = q.projection(basis_vector(0)), x2 = q.projection(basis_vector(1)),
                        x3 = q.projection(basis_vector(2));
    const AlgebraVector s = x1 + x2;
    const AlgebraVector c = g.bracket(s, x3);
    const AlgebraVector d = g.bracket(s, c);
    SubalgebraReport r;
    r.bracket_nonzero = !c.is_zero();
    r.double_nonzero = !d.is_zero();
    r.double_matches = d == g.bracket(x2, g.bracket(x1, x3)) + g.bracket(x1, g.bracket(x2, x3));
    r.x3_kills = g.bracket(x3, c).is_zero();
    r.ambient_star = is_type_star_basis(g).holds;

    // graded spans of the generated subalgebra
    std::vector<AlgebraVector> layer{s, x3};
    const std::vector<AlgebraVector> gens = layer;
    for (int j = 1; j <= g.step() && !layer.empty(); ++j) {
        RationalMatrix m(layer.size(), static_cast<std::size_t>(g.layer_dim(j)));
        for (std::size_t i = 0; i < layer.size(); ++i) {
            const auto coords = g.layer_coordinates(layer[i], j);
            for (std::size_t k = 0; k < coords.size(); ++k) m(i, k) = coords[k];
        }
        const std::size_t rk = rank(m);
        if (rk == 0) break;
        r.subalgebra_dims.push_back(static_cast<int>(rk));
        std::vector<AlgebraVector> next;
        for (const auto& gen : gens)
            for (const auto& v : layer)
                if (auto b = g.bracket(gen, v); !b.is_zero()) next.push_back(b);
        layer = std::move(next);
    }
    return r;
}

}  // namespace carnot
