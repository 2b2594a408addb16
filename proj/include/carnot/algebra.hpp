#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "carnot/linear_combination.hpp"
#include "carnot/matrix.hpp"
#include "carnot/rational.hpp"

namespace carnot {

struct BasisElement {
    int index = 0;
    int layer = 1;  // 1-based layer of the stratification
    std::string label;
};

/// Sparse table of [X_i, X_j] for i < j. Antisymmetry and the zero
/// diagonal are synthesized on lookup.
class StructureConstants {
public:
    StructureConstants() = default;
    explicit StructureConstants(int n) : n_(n), upper_(static_cast<std::size_t>(n)) {}

    int dimension() const { return n_; }

    void set(int i, int j, AlgebraVector value) {
        check_index(i);
        check_index(j);
        if (i == j) throw InputError("structure constant on the diagonal");
        if (i > j) {
            std::swap(i, j);
            value = -value;
        }
        for (const auto& [k, c] : value) {
            (void)c;
            check_index(k);
        }
        auto& row = upper_[static_cast<std::size_t>(i)];
        if (value.is_zero())
            row.erase(j);
        else
            row[j] = std::move(value);
    }

    /// [X_i, X_j] in the basis.
    AlgebraVector get(int i, int j) const {
        if (i == j) return {};
        bool flip = i > j;
        if (flip) std::swap(i, j);
        const auto& row = upper_[static_cast<std::size_t>(i)];
        auto it = row.find(j);
        if (it == row.end()) return {};
        return flip ? -it->second : it->second;
    }

    const AlgebraVector* find(int i, int j) const {
        const auto& row = upper_[static_cast<std::size_t>(i)];
        auto it = row.find(j);
        return it == row.end() ? nullptr : &it->second;
    }

    /// Calls f(i, j, value) for every stored i < j entry in lexicographic order.
    template <class F>
    void for_each(F&& f) const {
        for (int i = 0; i < n_; ++i)
            for (const auto& [j, v] : upper_[static_cast<std::size_t>(i)]) f(i, j, v);
    }

    std::size_t nonzero_count() const {
        std::size_t c = 0;
        for (const auto& row : upper_) c += row.size();
        return c;
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= n_) throw InputError("basis index " + std::to_string(i) + " out of range");
    }

    int n_ = 0;
    std::vector<std::map<int, AlgebraVector>> upper_;
};

/// Graded nilpotent Lie algebra V_1 + ... + V_k given by an adapted basis
/// and structure constants. Immutable after construction.
class StratifiedAlgebra {
public:
    StratifiedAlgebra() = default;
    StratifiedAlgebra(std::string name, std::vector<int> layer_dims, std::vector<std::string> labels,
                      StructureConstants constants)
        : name_(std::move(name)), layer_dims_(std::move(layer_dims)), constants_(std::move(constants)) {
        if (layer_dims_.empty()) throw InputError("algebra needs at least one layer");
        for (int d : layer_dims_)
            if (d <= 0) throw InputError("layer dimensions must be positive");
        const int n = std::accumulate(layer_dims_.begin(), layer_dims_.end(), 0);
        if (static_cast<int>(labels.size()) != n)
            throw InputError("expected " + std::to_string(n) + " basis labels, got " + std::to_string(labels.size()));
        if (constants_.dimension() != n) throw InputError("structure constant table has wrong dimension");
        basis_.reserve(static_cast<std::size_t>(n));
        int index = 0;
        for (std::size_t layer = 0; layer < layer_dims_.size(); ++layer)
            for (int k = 0; k < layer_dims_[layer]; ++k, ++index)
                basis_.push_back({index, static_cast<int>(layer) + 1, std::move(labels[static_cast<std::size_t>(index)])});
    }

    const std::string& name() const { return name_; }
    const std::vector<int>& layer_dims() const { return layer_dims_; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const StructureConstants& constants() const { return constants_; }

    int dimension() const { return static_cast<int>(basis_.size()); }
    int step() const { return static_cast<int>(layer_dims_.size()); }
    /// m = dim V_1
    int rank() const { return layer_dims_.front(); }

    /// Layer (1-based) of basis index i.
    int layer_of(int i) const {
        check_index(i);
        return basis_[static_cast<std::size_t>(i)].layer;
    }
    /// First basis index of layer j (1-based); layer_begin(step()+1) == dimension().
    int layer_begin(int j) const {
        int h = 0;
        for (int l = 1; l < j && l <= step(); ++l) h += layer_dims_[static_cast<std::size_t>(l - 1)];
        return h;
    }
    int layer_end(int j) const { return layer_begin(j + 1); }
    int layer_dim(int j) const { return j >= 1 && j <= step() ? layer_dims_[static_cast<std::size_t>(j - 1)] : 0; }

    const std::string& label(int i) const {
        check_index(i);
        return basis_[static_cast<std::size_t>(i)].label;
    }

    void check_index(int i) const {
        if (i < 0 || i >= dimension())
            throw InputError("basis index " + std::to_string(i) + " out of range for dimension " +
                             std::to_string(dimension()));
    }

    template <class C>
    void check_vector(const LinearCombination<C>& v) const {
        for (const auto& [k, c] : v) {
            (void)c;
            check_index(k);
        }
    }

    AlgebraVector basis_bracket(int i, int j) const {
        check_index(i);
        check_index(j);
        return constants_.get(i, j);
    }

    /// Bilinear extension of the structure constants, over any coefficient ring.
    template <class C>
    LinearCombination<C> bracket(const LinearCombination<C>& a, const LinearCombination<C>& b) const {
        check_vector(a);
        check_vector(b);
        LinearCombination<C> out;
        for (const auto& [i, ca] : a)
            for (const auto& [j, cb] : b) {
                if (i == j) continue;
                const bool flip = i > j;
                const AlgebraVector* v = flip ? constants_.find(j, i) : constants_.find(i, j);
                if (!v) continue;
                C prod = ca * cb;
                if (flip) prod = -prod;
                for (const auto& [k, c] : *v) out.add(k, prod * c);
            }
        return out;
    }

    /// Layer shared by every nonzero index of v; 0 for the zero vector, -1 if mixed.
    template <class C>
    int homogeneous_layer(const LinearCombination<C>& v) const {
        int layer = 0;
        for (const auto& [k, c] : v) {
            (void)c;
            int l = layer_of(k);
            if (layer == 0)
                layer = l;
            else if (layer != l)
                return -1;
        }
        return layer;
    }

    /// Human-readable combination using basis labels.
    std::string format(const AlgebraVector& v) const {
        if (v.is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : v) {
            Rational mag = abs(c);
            if (first)
                os << (c.sign() < 0 ? "-" : "");
            else
                os << (c.sign() < 0 ? " - " : " + ");
            if (!mag.is_one()) os << mag << "*";
            os << label(k);
            first = false;
        }
        return os.str();
    }

    /// Coordinates of v restricted to layer j, as a dense row.
    std::vector<Rational> layer_coordinates(const AlgebraVector& v, int j) const {
        const int b = layer_begin(j);
        std::vector<Rational> row(static_cast<std::size_t>(layer_dim(j)), Rational(0));
        for (const auto& [k, c] : v)
            if (k >= b && k < b + layer_dim(j)) row[static_cast<std::size_t>(k - b)] = c;
        return row;
    }

private:
    std::string name_;
    std::vector<int> layer_dims_;
    std::vector<BasisElement> basis_;
    StructureConstants constants_;
};

/// α_i: the layer of basis index i.
inline int adapted_layer(const StratifiedAlgebra& g, int i) { return g.layer_of(i); }

inline AlgebraVector basis_vector(int i) { return AlgebraVector::basis(i); }

/// Convenience: bracket of basis elements given as nested index pairs.
inline AlgebraVector bracket(const StratifiedAlgebra& g, const AlgebraVector& a, const AlgebraVector& b) {
    return g.bracket(a, b);
}

// ---------------------------------------------------------------------------
// Validation

struct CheckOutcome {
    bool ok = true;
    std::vector<int> witness;  // basis indices of the first failing tuple
    std::string detail;
};

struct ValidationReport {
    CheckOutcome jacobi;
    CheckOutcome grading;
    CheckOutcome generation;

    bool jacobi_ok() const { return jacobi.ok; }
    bool grading_ok() const { return grading.ok; }
    bool generation_ok() const { return generation.ok; }
    bool ok() const { return jacobi.ok && grading.ok && generation.ok; }
};

inline ValidationReport validate(const StratifiedAlgebra& g) {
    ValidationReport report;
    const int n = g.dimension();
    const int kappa = g.step();

    g.constants().for_each([&](int i, int j, const AlgebraVector& v) {
        if (!report.grading.ok) return;
        const int target = g.layer_of(i) + g.layer_of(j);
        for (const auto& [k, c] : v) {
            (void)c;
            if (g.layer_of(k) != target) {
                report.grading.ok = false;
                report.grading.witness = {i, j, k};
                report.grading.detail = "[" + g.label(i) + "," + g.label(j) + "] has a component on " + g.label(k) +
                                        (target > kappa ? " beyond the top layer" : " outside layer " + std::to_string(target));
                return;
            }
        }
    });

    for (int i = 0; i < n && report.jacobi.ok; ++i)
        for (int j = i + 1; j < n && report.jacobi.ok; ++j) {
            if (report.grading.ok && g.layer_of(i) + g.layer_of(j) + 1 > kappa) break;
            const AlgebraVector ei = basis_vector(i), ej = basis_vector(j);
            const AlgebraVector eij = g.basis_bracket(i, j);
            for (int k = j + 1; k < n; ++k) {
                if (report.grading.ok && g.layer_of(i) + g.layer_of(j) + g.layer_of(k) > kappa) break;
                const AlgebraVector ek = basis_vector(k);
                AlgebraVector sum = g.bracket(ei, g.basis_bracket(j, k));
                sum += g.bracket(ej, g.basis_bracket(k, i));
                sum += g.bracket(ek, eij);
                if (!sum.is_zero()) {
                    report.jacobi.ok = false;
                    report.jacobi.witness = {i, j, k};
                    report.jacobi.detail = "Jacobi sum for (" + g.label(i) + ", " + g.label(j) + ", " + g.label(k) +
                                           ") is " + g.format(sum);
                    break;
                }
            }
        }

    for (int layer = 1; layer < kappa && report.generation.ok; ++layer) {
        std::vector<std::vector<Rational>> rows;
        for (int a = g.layer_begin(1); a < g.layer_end(1); ++a)
            for (int b = g.layer_begin(layer); b < g.layer_end(layer); ++b) {
                auto row = g.layer_coordinates(g.basis_bracket(a, b), layer + 1);
                if (std::any_of(row.begin(), row.end(), [](const Rational& r) { return !r.is_zero(); }))
                    rows.push_back(std::move(row));
            }
        RationalMatrix m(rows.size(), static_cast<std::size_t>(g.layer_dim(layer + 1)));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
        const std::size_t rk = rows.empty() ? 0 : carnot::rank(m);
        if (static_cast<int>(rk) != g.layer_dim(layer + 1)) {
            report.generation.ok = false;
            report.generation.witness = {layer, layer + 1};
            report.generation.detail = "[V_1,V_" + std::to_string(layer) + "] spans only " + std::to_string(rk) +
                                       " of " + std::to_string(g.layer_dim(layer + 1)) + " dimensions of V_" +
                                       std::to_string(layer + 1);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Change of first-layer basis

/// Rebuilds the algebra with a new V_1 basis Y_i = sum_j B(i,j) X_j; all
/// higher-layer basis vectors are kept.
inline StratifiedAlgebra change_first_layer_basis(const StratifiedAlgebra& g, const RationalMatrix& b,
                                                  std::string name = {}) {
    const int m = g.rank();
    if (b.rows() != static_cast<std::size_t>(m) || b.cols() != static_cast<std::size_t>(m))
        throw InputError("basis change must be " + std::to_string(m) + "x" + std::to_string(m));
    auto binv = inverse(b);
    if (!binv) throw InputError("singular basis change");

    auto to_old = [&](int a) {
        if (a >= m) return basis_vector(a);
        AlgebraVector v;
        for (int j = 0; j < m; ++j) v.add(j, b(static_cast<std::size_t>(a), static_cast<std::size_t>(j)));
        return v;
    };
    auto to_new = [&](const AlgebraVector& v) {
        AlgebraVector w;
        for (const auto& [k, c] : v) {
            if (k >= m) {
                w.add(k, c);
                continue;
            }
            for (int i = 0; i < m; ++i) w.add(i, c * (*binv)(static_cast<std::size_t>(k), static_cast<std::size_t>(i)));
        }
        return w;
    };

    const int n = g.dimension();
    StructureConstants sc(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (i >= m && j >= m) {
                if (const auto* v = g.constants().find(i, j)) sc.set(i, j, *v);
                continue;
            }
            AlgebraVector v = to_new(g.bracket(to_old(i), to_old(j)));
            if (!v.is_zero()) sc.set(i, j, std::move(v));
        }
    std::vector<std::string> labels;
    for (int a = 0; a < n; ++a) {
        if (a >= m) {
            labels.push_back(g.label(a));
            continue;
        }
        AlgebraVector old = to_old(a);
        labels.push_back(old.size() == 1 && old.begin()->second.is_one() ? g.label(old.begin()->first)
                                                                          : "(" + g.format(old) + ")");
    }
    return StratifiedAlgebra(name.empty() ? g.name() + "/rebased" : std::move(name), g.layer_dims(), std::move(labels),
                             std::move(sc));
}

/// Sum of layer(i) over the basis.
inline int homogeneous_dimension(const StratifiedAlgebra& g) {
    int q = 0;
    for (int j = 1; j <= g.step(); ++j) q += j * g.layer_dim(j);
    return q;
}

}  // namespace carnot
