#pragma once

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/constructors.hpp"
#include "carnot/matrix.hpp"

namespace carnot {

// ---------------------------------------------------------------------------
// Basis changes on V_1

/// Invertible m x m matrix B describing a new first-layer basis
/// Y_i = sum_j B(i,j) X_j in terms of the reference basis X.
class BasisChange {
public:
    explicit BasisChange(RationalMatrix matrix) : matrix_(std::move(matrix)) {
        if (!matrix_.is_square() || matrix_.rows() == 0) throw InputError("basis change must be a square matrix");
        det_ = determinant(matrix_);
        if (det_.is_zero()) throw InputError("singular basis change");
    }
    static BasisChange identity(int m) { return BasisChange(RationalMatrix::identity(static_cast<std::size_t>(m))); }

    const RationalMatrix& matrix() const { return matrix_; }
    const Rational& det() const { return det_; }
    int size() const { return static_cast<int>(matrix_.rows()); }

    /// Y_i expressed in the reference basis of g.
    AlgebraVector vector(int i) const {
        AlgebraVector v;
        for (int j = 0; j < size(); ++j) v.add(j, matrix_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        return v;
    }

private:
    RationalMatrix matrix_;
    Rational det_;
};

/// Numerator and denominator ranges for random rational entries.
struct DrawRange {
    int num_lo = -5, num_hi = 5;
    int den_lo = 1, den_hi = 3;

    void check() const {
        if (num_lo > num_hi || den_lo > den_hi || den_lo < 1) throw InputError("invalid random entry ranges");
        if (num_lo == 0 && num_hi == 0) throw InputError("numerator range must contain a nonzero value");
    }
};

/// Entries drawn uniformly from {-5..5}/{1..3} by default; singular draws are rejected.
inline RationalMatrix random_invertible_matrix(std::mt19937_64& rng, int m, const DrawRange& range = {}) {
    range.check();
    std::uniform_int_distribution<int> num(range.num_lo, range.num_hi), den(range.den_lo, range.den_hi);
    while (true) {
        RationalMatrix a(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = Rational(num(rng), den(rng));
        if (!determinant(a).is_zero()) return a;
    }
}

inline void require_basis_fits(const StratifiedAlgebra& g, const BasisChange& b) {
    if (b.size() != g.rank())
        throw InputError("basis change is " + std::to_string(b.size()) + "x" + std::to_string(b.size()) +
                         " but dim V_1 = " + std::to_string(g.rank()));
}

// ---------------------------------------------------------------------------
// Length-3 commutators of first-layer vectors

/// Key [Y_outer, [Y_middle, Y_inner]] in normal form: either repeated
/// (outer == middle, middle != inner) or all three distinct with middle > inner.
struct CommutatorKey {
    int outer = 0;
    int middle = 0;
    int inner = 0;

    bool repeated() const { return outer == middle; }
    friend auto operator<=>(const CommutatorKey&, const CommutatorKey&) = default;

    std::string str(const std::string& letter = "Y") const {
        auto y = [&](int i) { return letter + std::to_string(i + 1); };
        return "[" + y(outer) + ",[" + y(middle) + "," + y(inner) + "]]";
    }
};

/// Normal form of [Y_k,[Y_j,Y_i]] under antisymmetry: sign and key, or
/// nullopt when the commutator vanishes identically (j == i).
inline std::optional<std::pair<int, CommutatorKey>> canonical_commutator(int k, int j, int i) {
    if (j == i) return std::nullopt;
    if (k == j) return std::make_pair(1, CommutatorKey{j, j, i});
    if (k == i) return std::make_pair(-1, CommutatorKey{i, i, j});
    if (j > i) return std::make_pair(1, CommutatorKey{k, j, i});
    return std::make_pair(-1, CommutatorKey{k, i, j});
}

/// Expands [X_k,[X_j,X_i]] with X = A Y into normal-form Y-commutators.
/// Works over any coefficient ring (rationals or polynomials in the a_ij).
template <class C>
std::map<CommutatorKey, C> expand_commutator(const Matrix<C>& a, int k, int j, int i) {
    std::map<CommutatorKey, C> out;
    const std::size_t m = a.rows();
    for (std::size_t p = 0; p < m; ++p) {
        if (a(static_cast<std::size_t>(k), p).is_zero()) continue;
        for (std::size_t q = 0; q < m; ++q) {
            if (a(static_cast<std::size_t>(j), q).is_zero()) continue;
            for (std::size_t r = 0; r < m; ++r) {
                if (a(static_cast<std::size_t>(i), r).is_zero()) continue;
                auto canon = canonical_commutator(static_cast<int>(p), static_cast<int>(q), static_cast<int>(r));
                if (!canon) continue;
                C coeff = a(static_cast<std::size_t>(k), p) * a(static_cast<std::size_t>(j), q) * a(static_cast<std::size_t>(i), r);
                if (canon->first < 0) coeff = -coeff;
                auto [it, inserted] = out.try_emplace(canon->second, coeff);
                if (!inserted) it->second += coeff;
            }
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

/// Value of the commutator key on the first-layer vectors ys.
inline AlgebraVector evaluate_commutator(const StratifiedAlgebra& g, const std::vector<AlgebraVector>& ys,
                                         const CommutatorKey& key) {
    const auto& yk = ys[static_cast<std::size_t>(key.outer)];
    const auto& yj = ys[static_cast<std::size_t>(key.middle)];
    const auto& yi = ys[static_cast<std::size_t>(key.inner)];
    return g.bracket(yk, g.bracket(yj, yi));
}

inline std::vector<AlgebraVector> basis_vectors(const BasisChange& b) {
    std::vector<AlgebraVector> ys;
    for (int i = 0; i < b.size(); ++i) ys.push_back(b.vector(i));
    return ys;
}

// ---------------------------------------------------------------------------
// Type-star check

struct StarCheck {
    bool holds = true;
    std::optional<std::pair<int, int>> witness;  // (j, i) with [Y_j,[Y_j,Y_i]] != 0
};

/// True iff [Y_j,[Y_j,Y_i]] = 0 for all i, j in the given (default: reference) basis.
inline StarCheck is_type_star_basis(const StratifiedAlgebra& g, const std::optional<BasisChange>& basis = std::nullopt) {
    const BasisChange b = basis ? *basis : BasisChange::identity(g.rank());
    require_basis_fits(g, b);
    const auto ys = basis_vectors(b);
    StarCheck out;
    if (g.step() < 3) return out;
    for (int j = 0; j < g.rank(); ++j)
        for (int i = 0; i < g.rank(); ++i) {
            if (i == j) continue;
            if (!evaluate_commutator(g, ys, {j, j, i}).is_zero()) {
                out.holds = false;
                out.witness = std::make_pair(j, i);
                return out;
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Chio pivotal condensation

struct ChioResult {
    RationalMatrix condensed;  // M(i,j) = a11 a_{i+1,j+1} - a_{i+1,1} a_{1,j+1}
    Rational det_condensed;
    Rational rhs;  // a11^(m-2) det A
    bool equal = false;
};

inline RationalMatrix chio_condensation(const RationalMatrix& a) {
    if (!a.is_square() || a.rows() < 2) throw InputError("Chio condensation needs a square matrix of size >= 2");
    if (a(0, 0).is_zero()) throw InputError("Chio condensation needs a nonzero pivot a11");
    const std::size_t m = a.rows();
    RationalMatrix c(m - 1, m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j) c(i, j) = a(0, 0) * a(i + 1, j + 1) - a(i + 1, 0) * a(0, j + 1);
    return c;
}

inline ChioResult chio_det_identity(const RationalMatrix& a) {
    ChioResult r;
    r.condensed = chio_condensation(a);
    r.det_condensed = determinant(r.condensed);
    r.rhs = a(0, 0).pow(static_cast<long>(a.rows()) - 2) * determinant(a);
    r.equal = r.det_condensed == r.rhs;
    return r;
}

// ---------------------------------------------------------------------------
// Decomposition of [Y1,[Y1,Yp]] in a type-star algebra

struct StarDecomposition {
    int p = 1;                               // 0-based target index, 1..m-1
    std::vector<int> permutation;            // star-basis order used: position -> original index
    RationalMatrix star_in_new;              // A with X = A Y after reordering
    RationalMatrix condensed;                // second-order minors containing a11
    std::map<CommutatorKey, Rational> alpha; // repeated commutators [Y_j,[Y_j,Y_i]], j != first
    std::map<CommutatorKey, Rational> beta;  // commutators without repeated index

    std::map<CommutatorKey, Rational> all_terms() const {
        auto out = alpha;
        out.insert(beta.begin(), beta.end());
        return out;
    }
};

/// [Y1,[Y1,Yp]] minus the decomposition evaluated in g; zero when sound.
inline AlgebraVector decomposition_residual(const StratifiedAlgebra& g, const BasisChange& b, const StarDecomposition& d) {
    const auto ys = basis_vectors(b);
    AlgebraVector res = evaluate_commutator(g, ys, {0, 0, d.p});
    for (const auto& [key, c] : d.all_terms()) res.add_scaled(evaluate_commutator(g, ys, key), -c);
    return res;
}

/// Expresses [Y1,[Y1,Yp]] through the other length-3 commutators of the new
/// basis Y = B X, where X is the reference basis of g (which must satisfy the
/// type-star relations). Solves the (m-1)x(m-1) system whose matrix is the
/// Chio condensation of A = B^-1 after moving a row with a nonzero first
/// entry to the top.
inline StarDecomposition star_decompose(const StratifiedAlgebra& g, const BasisChange& b, int p) {
    require_basis_fits(g, b);
    const int m = g.rank();
    if (p < 1 || p >= m) throw InputError("decomposition index p must lie in 1..m-1 (0-based)");
    if (auto star = is_type_star_basis(g); !star.holds)
        throw InputError("algebra is not type star in its reference basis");

    RationalMatrix a = *inverse(b.matrix());
    StarDecomposition d;
    d.p = p;
    d.permutation.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) d.permutation[static_cast<std::size_t>(i)] = i;
    std::size_t pivot = 0;
    while (pivot < a.rows() && a(pivot, 0).is_zero()) ++pivot;
    if (pivot == a.rows()) throw std::logic_error("invertible matrix with zero first column");
    a.swap_rows(0, pivot);
    std::swap(d.permutation[0], d.permutation[pivot]);
    d.star_in_new = a;

    if (g.step() < 3) return d;

    const Rational a11 = a(0, 0);
    d.condensed = chio_condensation(a);

    // Rows h = 1..m-1: expansion of [X1,[X1,X_h]] (= 0) split into the
    // distinguished keys [Y1,[Y1,Y_i]] and the remaining keys Z.
    std::vector<std::map<CommutatorKey, Rational>> rest(static_cast<std::size_t>(m - 1));
    std::map<CommutatorKey, int> z_index;
    std::vector<CommutatorKey> z_keys;
    for (int h = 1; h < m; ++h) {
        for (const auto& [key, c] : expand_commutator(a, 0, 0, h)) {
            if (key.outer == 0 && key.middle == 0) {
                // coefficient of [Y1,[Y1,Y_i]] equals a11 * M(h-1, i-1)
                if (c != a11 * d.condensed(static_cast<std::size_t>(h - 1), static_cast<std::size_t>(key.inner - 1)))
                    throw std::logic_error("distinguished coefficient disagrees with the condensed matrix");
                continue;
            }
            rest[static_cast<std::size_t>(h - 1)][key] = c;
            if (z_index.emplace(key, static_cast<int>(z_keys.size())).second) z_keys.push_back(key);
        }
    }
    // a11 M r = -alpha z  =>  r = -(1/a11) M^-1 alpha z
    RationalMatrix alpha(static_cast<std::size_t>(m - 1), z_keys.size());
    for (int h = 0; h < m - 1; ++h)
        for (const auto& [key, c] : rest[static_cast<std::size_t>(h)])
            alpha(static_cast<std::size_t>(h), static_cast<std::size_t>(z_index.at(key))) = c;
    auto minv = inverse(d.condensed);
    if (!minv) throw std::logic_error("condensed matrix is singular for an invertible basis change");
    RationalMatrix coeff = (-a11.inverse()) * (*minv * alpha);
    for (std::size_t k = 0; k < z_keys.size(); ++k) {
        const Rational& c = coeff(static_cast<std::size_t>(p - 1), k);
        if (c.is_zero()) continue;
        (z_keys[k].repeated() ? d.alpha : d.beta)[z_keys[k]] = c;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Condition (i): [X1,[X1,X2]] independent of the other length-3 commutators

struct ConditionIReport {
    bool holds = false;
    std::optional<BasisChange> witness_basis;
    std::size_t rank_without = 0;  // rank of span(W3 minus the distinguished pair)
    int dim_v3 = 0;
};

inline ConditionIReport check_condition_i(const StratifiedAlgebra& g, const std::optional<BasisChange>& basis = std::nullopt) {
    if (g.step() < 3) throw InputError("condition (i) needs step >= 3");
    const BasisChange b = basis ? *basis : BasisChange::identity(g.rank());
    require_basis_fits(g, b);
    const auto ys = basis_vectors(b);
    const int m = g.rank();
    std::vector<std::vector<Rational>> rows;
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                if ((k == 0 && j == 0 && i == 1) || (k == 0 && j == 1 && i == 0)) continue;
                if (i == j) continue;
                AlgebraVector w = g.bracket(ys[static_cast<std::size_t>(k)],
                                            g.bracket(ys[static_cast<std::size_t>(j)], ys[static_cast<std::size_t>(i)]));
                if (!w.is_zero()) rows.push_back(g.layer_coordinates(w, 3));
            }
    ConditionIReport r;
    r.dim_v3 = g.layer_dim(3);
    if (!rows.empty()) {
        RationalMatrix mat(rows.size(), static_cast<std::size_t>(r.dim_v3));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t c = 0; c < mat.cols(); ++c) mat(i, c) = rows[i][c];
        r.rank_without = rank(mat);
    }
    r.holds = static_cast<int>(r.rank_without) < r.dim_v3;
    if (r.holds) r.witness_basis = b;
    return r;
}

// ---------------------------------------------------------------------------
// Filiform recognizers

/// Layer dimensions (2, 1, ..., 1) with step >= 2.
inline bool is_filiform(const StratifiedAlgebra& g) {
    const auto& d = g.layer_dims();
    if (d.size() < 2 || d[0] != 2) return false;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i] != 1) return false;
    return true;
}

inline bool is_engel(const StratifiedAlgebra& g) { return is_filiform(g) && g.step() == 3; }

/// Quotient by the ideal generated by V_4.., X_3..X_m and [X2,[X2,X1]]
/// in the basis B; the result is the Engel algebra when condition (i) holds.
inline Quotient engel_quotient_from_condition_i(const StratifiedAlgebra& g, const std::optional<BasisChange>& basis = std::nullopt) {
    const BasisChange b = basis ? *basis : BasisChange::identity(g.rank());
    if (!check_condition_i(g, b).holds) throw InputError("condition (i) does not hold in the given basis");
    const StratifiedAlgebra h = change_first_layer_basis(g, b.matrix(), g.name());
    std::vector<AlgebraVector> gens;
    for (int k = h.layer_begin(4); k < h.dimension(); ++k) gens.push_back(basis_vector(k));
    for (int k = 2; k < h.rank(); ++k) gens.push_back(basis_vector(k));
    gens.push_back(nested(h, 1, 1, 0));
    Quotient q = quotient(h, ideal_closure(h, gens), "engel");
    if (!is_engel(q.algebra) || !q.projection(nested(h, 1, 1, 0)).is_zero() || q.projection(nested(h, 0, 0, 1)).is_zero())
        throw std::logic_error("Engel quotient postcondition failed");
    return q;
}

/// Basis change after which [Y2,[Y2,Y1]] = 0, given a[Y1,[Y1,Y2]] + b[Y2,[Y2,Y1]] = 0.
inline BasisChange filiform_normalize_basis(const Rational& a, const Rational& b) {
    if (a.is_zero() && b.is_zero()) throw InputError("relation coefficients (a, b) must not both vanish");
    if (a.is_zero()) return BasisChange::identity(2);
    if (b.is_zero()) return BasisChange(RationalMatrix{{0, 1}, {1, 0}});
    // Y1 = b Y~1, Y2 = a Y~1 + Y~2
    return BasisChange(RationalMatrix{{b.inverse(), 0}, {-a / b, 1}});
}

/// The relation a[Y1,[Y1,Y2]] + b[Y2,[Y2,Y1]] = 0 satisfied in a filiform algebra of step >= 3.
inline std::pair<Rational, Rational> filiform_relation(const StratifiedAlgebra& g) {
    if (!is_filiform(g) || g.step() < 3) throw InputError("filiform relation needs a filiform algebra of step >= 3");
    const Rational u = g.layer_coordinates(nested(g, 0, 0, 1), 3)[0];
    const Rational w = g.layer_coordinates(nested(g, 1, 1, 0), 3)[0];
    if (u.is_zero()) return {Rational(1), Rational(0)};
    if (w.is_zero()) return {Rational(0), Rational(1)};
    return {w, -u};
}

/// Basis of a filiform algebra in which [Y2,[Y2,Y1]] = 0, verified by re-bracketing.
inline BasisChange normalize_filiform(const StratifiedAlgebra& g) {
    auto [a, b] = filiform_relation(g);
    BasisChange change = filiform_normalize_basis(a, b);
    const auto ys = basis_vectors(change);
    if (!evaluate_commutator(g, ys, {1, 1, 0}).is_zero()) throw std::logic_error("filiform normalization failed");
    return change;
}

// ---------------------------------------------------------------------------
// Heisenberg subalgebras and dimension bounds

/// span{X_i1, X_i2 - c X_i1, [X_i1,X_i2]} is a Heisenberg algebra with center
/// [X_i1,X_i2]: both brackets with the center vanish.
inline bool heisenberg_subalgebra_check(const StratifiedAlgebra& g, int i1, int i2, const Rational& c) {
    if (i1 == i2) throw InputError("Heisenberg check needs distinct indices");
    if (i1 < 0 || i2 < 0 || i1 >= g.rank() || i2 >= g.rank()) throw InputError("Heisenberg check indices must lie in V_1");
    const AlgebraVector center = g.basis_bracket(i1, i2);
    if (center.is_zero()) throw InputError("[X_i1, X_i2] = 0: degenerate case");
    const AlgebraVector x1 = basis_vector(i1);
    const AlgebraVector x2 = basis_vector(i2) - basis_vector(i1) * c;
    return g.bracket(x1, center).is_zero() && g.bracket(x2, center).is_zero();
}

/// Upper bound on dim V_3: (m+1)m(m-1)/3 in general, m(m-1)(m-2)/3 for type star.
inline long v3_dimension_bound(long m, bool star) {
    if (m < 2) throw InputError("bound needs m >= 2");
    return star ? m * (m - 1) * (m - 2) / 3 : (m + 1) * m * (m - 1) / 3;
}

// ---------------------------------------------------------------------------
// Heuristic search and classification

/// Tries the reference basis, single substitutions X_i + t X_j, then
/// `budget` random basis changes. A nullopt result proves nothing.
inline std::optional<BasisChange> search_star_basis(const StratifiedAlgebra& g, int budget, std::uint64_t seed,
                                                    const DrawRange& range = {}) {
    const int m = g.rank();
    if (g.step() <= 2 || is_type_star_basis(g).holds) return BasisChange::identity(m);
    static const Rational kSteps[] = {Rational(1),     Rational(-1),    Rational(2),     Rational(-2),
                                      Rational(3),     Rational(-3),    Rational(1, 2),  Rational(-1, 2),
                                      Rational(1, 3),  Rational(-1, 3)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            for (const auto& t : kSteps) {
                RationalMatrix b = RationalMatrix::identity(static_cast<std::size_t>(m));
                b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = t;
                BasisChange change(b);
                if (is_type_star_basis(g, change).holds) return change;
            }
        }
    std::mt19937_64 rng(seed);
    for (int k = 0; k < budget; ++k) {
        BasisChange change(random_invertible_matrix(rng, m, range));
        if (is_type_star_basis(g, change).holds) return change;
    }
    return std::nullopt;
}

enum class StarVerdict { StarOnBasis, StarWitnessFound, DisprovedByConditionI, DisprovedByV3Bound, Inconclusive };

inline const char* to_string(StarVerdict v) {
    switch (v) {
        case StarVerdict::StarOnBasis: return "star-on-basis";
        case StarVerdict::StarWitnessFound: return "star-witness-found";
        case StarVerdict::DisprovedByConditionI: return "disproved-by-condition-i";
        case StarVerdict::DisprovedByV3Bound: return "disproved-by-v3-bound";
        case StarVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct StarClassification {
    StarVerdict verdict = StarVerdict::Inconclusive;
    std::optional<BasisChange> basis;           // star basis or condition-(i) basis
    std::optional<std::pair<int, int>> failing; // witness on the examined basis
    long v3_bound = 0;
    int dim_v3 = 0;
};

/// Decides what can be decided: the given basis, then condition (i) in that
/// basis, then the V_3 bound, then (if budget > 0) a heuristic search.
inline StarClassification classify_star(const StratifiedAlgebra& g, const std::optional<BasisChange>& basis, int budget,
                                        std::uint64_t seed, const DrawRange& range = {}) {
    StarClassification out;
    out.dim_v3 = g.layer_dim(3);
    out.v3_bound = g.rank() >= 2 ? v3_dimension_bound(g.rank(), true) : 0;
    auto check = is_type_star_basis(g, basis);
    if (check.holds) {
        out.verdict = StarVerdict::StarOnBasis;
        out.basis = basis ? *basis : BasisChange::identity(g.rank());
        return out;
    }
    out.failing = check.witness;
    if (auto ci = check_condition_i(g, basis); ci.holds) {
        out.verdict = StarVerdict::DisprovedByConditionI;
        out.basis = ci.witness_basis;
        return out;
    }
    if (out.dim_v3 > out.v3_bound) {
        out.verdict = StarVerdict::DisprovedByV3Bound;
        return out;
    }
    if (budget > 0) {
        if (auto found = search_star_basis(g, budget, seed, range)) {
            out.verdict = StarVerdict::StarWitnessFound;
            out.basis = found;
            return out;
        }
    }
    out.verdict = StarVerdict::Inconclusive;
    return out;
}

}  // namespace carnot
