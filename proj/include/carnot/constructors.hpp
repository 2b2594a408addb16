#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/hall.hpp"
#include "carnot/matrix.hpp"

namespace carnot {

/// Abelian algebra R^n, a single layer.
inline StratifiedAlgebra build_abelian(int n) {
    if (n < 1) throw InputError("abelian algebra needs n >= 1");
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("X" + std::to_string(i + 1));
    return StratifiedAlgebra("abelian(" + std::to_string(n) + ")", {n}, std::move(labels), StructureConstants(n));
}

/// Strictly upper-triangular (m+1)x(m+1) matrices with basis E_{k,k+l},
/// ordered by l and then k, so V_l = span{E_{k,k+l}}.
inline StratifiedAlgebra build_unit_upper_triangular(int m) {
    if (m < 2) throw InputError("unit upper triangular model needs m >= 2");
    std::map<std::pair<int, int>, int> index;  // (k, l) -> basis index, 1-based k, l
    std::vector<std::pair<int, int>> kl;
    std::vector<std::string> labels;
    std::vector<int> dims;
    for (int l = 1; l <= m; ++l) {
        dims.push_back(m + 1 - l);
        for (int k = 1; k <= m + 1 - l; ++k) {
            index[{k, l}] = static_cast<int>(kl.size());
            kl.emplace_back(k, l);
            labels.push_back("E_{" + std::to_string(k) + "," + std::to_string(k + l) + "}");
        }
    }
    const int n = static_cast<int>(kl.size());
    StructureConstants sc(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            auto [k1, l1] = kl[static_cast<std::size_t>(a)];
            auto [k2, l2] = kl[static_cast<std::size_t>(b)];
            if (l1 + l2 > m) continue;
            if (k1 < k2 && k1 + l1 == k2)
                sc.set(a, b, basis_vector(index.at({k1, l1 + l2})));
            else if (k1 > k2 && k2 + l2 == k1)
                sc.set(a, b, -basis_vector(index.at({k2, l1 + l2})));
        }
    return StratifiedAlgebra("G" + std::to_string(m), std::move(dims), std::move(labels), std::move(sc));
}

inline StratifiedAlgebra build_heisenberg() {
    StratifiedAlgebra g = build_unit_upper_triangular(2);
    return StratifiedAlgebra("heisenberg", g.layer_dims(), {"X1", "X2", "X3"}, g.constants());
}

/// Model filiform algebra of step kappa: basis X1, X2, Y_2, ..., Y_kappa with
/// Y_2 = [X2,X1], Y_{j+1} = [Y_j, X1]; every other bracket of basis vectors is zero.
inline StratifiedAlgebra build_filiform_model(int kappa) {
    if (kappa < 2) throw InputError("filiform model needs step >= 2");
    const int n = kappa + 1;
    std::vector<int> dims{2};
    std::vector<std::string> labels{"X1", "X2"};
    std::string chain = "X2";
    for (int j = 2; j <= kappa; ++j) {
        dims.push_back(1);
        chain = "[" + chain + ",X1]";
        labels.push_back(chain);
    }
    StructureConstants sc(n);
    // [X1, Y_j] = -Y_{j+1}, with Y_1 = X2 at index 1 and Y_j at index j.
    for (int j = 1; j < kappa; ++j) sc.set(0, j, -basis_vector(j + 1));
    return StratifiedAlgebra(kappa == 3 ? "engel" : "filiform(" + std::to_string(kappa) + ")", std::move(dims),
                             std::move(labels), std::move(sc));
}

inline StratifiedAlgebra build_engel() { return build_filiform_model(3); }

/// Step-3 algebra on X1, X2, X3 with [X1,X3] = b[X2,X3] (b != 0),
/// [[X1,X2],X3] = [X1,[X2,X3]] and all other length-3 brackets zero.
inline StratifiedAlgebra build_example2_algebra(const Rational& b) {
    if (b.is_zero()) throw InputError("deformation parameter b must be nonzero");
    enum { X1, X2, X3, Z12, Z23, W };
    StructureConstants sc(6);
    sc.set(X1, X2, basis_vector(Z12));
    sc.set(X2, X3, basis_vector(Z23));
    sc.set(X1, X3, b * basis_vector(Z23));
    sc.set(X3, Z12, -basis_vector(W));
    sc.set(X1, Z23, basis_vector(W));
    return StratifiedAlgebra("example2(b=" + b.str() + ")", {3, 2, 1},
                             {"X1", "X2", "X3", "[X1,X2]", "[X2,X3]", "[[X1,X2],X3]"}, std::move(sc));
}

// ---------------------------------------------------------------------------
// Homogeneous ideals and quotients

/// Ideal generated by layer-homogeneous vectors, stored as one reduced row
/// echelon span per layer (coordinates local to the layer).
struct HomogeneousIdeal {
    std::vector<AlgebraVector> generators;
    std::vector<RowEchelon> span_by_layer;  // index j-1 for layer j

    int dimension_in_layer(int j) const {
        if (j < 1 || j > static_cast<int>(span_by_layer.size())) return 0;
        return static_cast<int>(span_by_layer[static_cast<std::size_t>(j - 1)].rank());
    }
    int dimension() const {
        int d = 0;
        for (const auto& s : span_by_layer) d += static_cast<int>(s.rank());
        return d;
    }
};

namespace detail {

inline std::vector<Rational> reduce_row(const RowEchelon& span, std::vector<Rational> row) {
    for (std::size_t r = 0; r < span.rank(); ++r) {
        const std::size_t p = span.pivots[r];
        if (row[p].is_zero()) continue;
        const Rational f = row[p];
        for (std::size_t c = 0; c < row.size(); ++c)
            if (!span.reduced(r, c).is_zero()) row[c] -= f * span.reduced(r, c);
    }
    return row;
}

inline RowEchelon append_row(const RowEchelon& span, const std::vector<Rational>& row) {
    RationalMatrix m(span.rank() + 1, row.size());
    for (std::size_t r = 0; r < span.rank(); ++r)
        for (std::size_t c = 0; c < row.size(); ++c) m(r, c) = span.reduced(r, c);
    for (std::size_t c = 0; c < row.size(); ++c) m(span.rank(), c) = row[c];
    return row_reduce(std::move(m));
}

inline bool is_zero_row(const std::vector<Rational>& row) {
    for (const auto& x : row)
        if (!x.is_zero()) return false;
    return true;
}

}  // namespace detail

/// Smallest ideal containing the generators: seed with their spans, then
/// bracket every new spanning vector with every basis element until stable.
inline HomogeneousIdeal ideal_closure(const StratifiedAlgebra& g, const std::vector<AlgebraVector>& generators) {
    HomogeneousIdeal ideal;
    ideal.generators = generators;
    for (int j = 1; j <= g.step(); ++j)
        ideal.span_by_layer.push_back(RowEchelon{RationalMatrix(0, static_cast<std::size_t>(g.layer_dim(j))), {}});

    std::vector<AlgebraVector> work;
    for (const auto& v : generators) {
        g.check_vector(v);
        if (g.homogeneous_layer(v) < 0) throw InputError("ideal generator " + g.format(v) + " is not layer-homogeneous");
        if (!v.is_zero()) work.push_back(v);
    }
    while (!work.empty()) {
        AlgebraVector v = std::move(work.back());
        work.pop_back();
        const int layer = g.homogeneous_layer(v);
        if (layer <= 0) continue;
        auto& span = ideal.span_by_layer[static_cast<std::size_t>(layer - 1)];
        auto row = detail::reduce_row(span, g.layer_coordinates(v, layer));
        if (detail::is_zero_row(row)) continue;
        span = detail::append_row(span, row);
        for (int b = 0; b < g.dimension(); ++b) {
            if (layer + g.layer_of(b) > g.step()) break;
            AlgebraVector w = g.bracket(basis_vector(b), v);
            if (!w.is_zero()) work.push_back(std::move(w));
        }
    }
    return ideal;
}

/// Canonical projection onto a quotient, as the image of each source basis vector.
class ProjectionMap {
public:
    ProjectionMap() = default;
    ProjectionMap(int target_dim, std::vector<AlgebraVector> images)
        : target_dim_(target_dim), images_(std::move(images)) {}

    int source_dimension() const { return static_cast<int>(images_.size()); }
    int target_dimension() const { return target_dim_; }
    const AlgebraVector& image(int i) const { return images_.at(static_cast<std::size_t>(i)); }

    AlgebraVector operator()(const AlgebraVector& v) const {
        AlgebraVector out;
        for (const auto& [k, c] : v) {
            if (k < 0 || k >= source_dimension()) throw InputError("projection: index out of range");
            out.add_scaled(images_[static_cast<std::size_t>(k)], c);
        }
        return out;
    }

private:
    int target_dim_ = 0;
    std::vector<AlgebraVector> images_;
};

struct Quotient {
    StratifiedAlgebra algebra;
    ProjectionMap projection;
    /// Source basis index of each quotient basis vector (coordinate complement).
    std::vector<int> complement;
};

/// Quotient by a closed homogeneous ideal, using the non-pivot coordinates of
/// each layer's reduced ideal span as the complement basis.
inline Quotient quotient(const StratifiedAlgebra& g, const HomogeneousIdeal& ideal, std::string name = {}) {
    if (static_cast<int>(ideal.span_by_layer.size()) != g.step()) throw InputError("ideal does not match algebra");
    if (ideal.dimension_in_layer(1) == g.rank()) throw InputError("ideal contains the whole first layer");

    const int n = g.dimension();
    std::vector<int> target_of(static_cast<std::size_t>(n), -1);
    std::vector<int> complement;
    std::vector<int> dims;
    std::vector<std::string> labels;
    for (int j = 1; j <= g.step(); ++j) {
        const auto& span = ideal.span_by_layer[static_cast<std::size_t>(j - 1)];
        std::vector<bool> pivot(static_cast<std::size_t>(g.layer_dim(j)), false);
        for (auto p : span.pivots) pivot[p] = true;
        int count = 0;
        for (int c = 0; c < g.layer_dim(j); ++c) {
            if (pivot[static_cast<std::size_t>(c)]) continue;
            const int src = g.layer_begin(j) + c;
            target_of[static_cast<std::size_t>(src)] = static_cast<int>(complement.size());
            complement.push_back(src);
            labels.push_back(g.label(src));
            ++count;
        }
        dims.push_back(count);
    }
    while (!dims.empty() && dims.back() == 0) dims.pop_back();
    for (int d : dims)
        if (d == 0) throw InputError("quotient has an empty intermediate layer; source algebra is not stratified");

    std::vector<AlgebraVector> images;
    images.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (target_of[static_cast<std::size_t>(i)] >= 0) {
            images.push_back(basis_vector(target_of[static_cast<std::size_t>(i)]));
            continue;
        }
        // e_i is a pivot coordinate: e_i = row_r - (non-pivot part of row_r) mod I.
        const int j = g.layer_of(i);
        const auto& span = ideal.span_by_layer[static_cast<std::size_t>(j - 1)];
        const auto local = static_cast<std::size_t>(i - g.layer_begin(j));
        AlgebraVector img;
        for (std::size_t r = 0; r < span.rank(); ++r) {
            if (span.pivots[r] != local) continue;
            for (std::size_t c = 0; c < span.reduced.cols(); ++c) {
                if (c == local || span.reduced(r, c).is_zero()) continue;
                const int src = g.layer_begin(j) + static_cast<int>(c);
                img.add(target_of[static_cast<std::size_t>(src)], -span.reduced(r, c));
            }
        }
        images.push_back(std::move(img));
    }
    ProjectionMap pi(static_cast<int>(complement.size()), std::move(images));

    const int qn = static_cast<int>(complement.size());
    StructureConstants sc(qn);
    for (int a = 0; a < qn; ++a)
        for (int b = a + 1; b < qn; ++b) {
            AlgebraVector v = pi(g.basis_bracket(complement[static_cast<std::size_t>(a)], complement[static_cast<std::size_t>(b)]));
            if (!v.is_zero()) sc.set(a, b, std::move(v));
        }
    return {StratifiedAlgebra(name.empty() ? g.name() + "/I" : std::move(name), std::move(dims), std::move(labels),
                              std::move(sc)),
            std::move(pi), std::move(complement)};
}

/// Nested bracket of basis vectors: left-normed [[e_a, e_b], e_c] style helpers.
inline AlgebraVector nested(const StratifiedAlgebra& g, int k, int j, int i) {
    return g.bracket(basis_vector(k), g.basis_bracket(j, i));
}

/// All [X_j,[X_j,X_i]] over the first layer (j != i), as ideal generators.
inline std::vector<AlgebraVector> repeated_commutators(const StratifiedAlgebra& g) {
    std::vector<AlgebraVector> out;
    for (int j = 0; j < g.rank(); ++j)
        for (int i = 0; i < g.rank(); ++i)
            if (i != j) out.push_back(nested(g, j, j, i));
    return out;
}

/// The type-star quotient of an algebra: divide by all [X_j,[X_j,X_i]].
inline Quotient star_quotient(const StratifiedAlgebra& g) {
    return quotient(g, ideal_closure(g, repeated_commutators(g)), g.name() + "/<[Xj,[Xj,Xi]]>");
}

}  // namespace carnot
