#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "carnot/algebra.hpp"

namespace carnot {

/// Node of a Hall set: either a generator or the bracket of two earlier words.
struct HallWord {
    int generator = -1;  // >= 0 for letters
    int left = -1;
    int right = -1;
    int degree = 1;

    bool is_letter() const { return generator >= 0; }
};

/// Classical Hall set on m letters truncated at degree kappa.
///
/// Total order: degree first, then the left subword, then the right subword
/// (letters by index). A bracket [u, v] is a Hall word iff u, v are Hall
/// words, u > v, and either u is a letter or u = [x, y] with y <= v.
/// Words are stored in increasing order, so the vector index is the order.
class HallSet {
public:
    HallSet(int m, int kappa, std::size_t cap = 2000) : m_(m), kappa_(kappa) {
        if (m < 1) throw InputError("Hall set needs at least one generator");
        if (kappa < 1) throw InputError("Hall set degree must be at least 1");
        for (int g = 0; g < m; ++g) words_.push_back({g, -1, -1, 1});
        degree_begin_ = {0, 0, m};  // degree_begin_[d] = first index of degree d
        for (int d = 2; d <= kappa; ++d) {
            std::vector<std::pair<int, int>> found;
            for (int u = 0; u < static_cast<int>(words_.size()); ++u) {
                const int dv = d - words_[static_cast<std::size_t>(u)].degree;
                if (dv < 1) continue;
                for (int v = degree_begin_[static_cast<std::size_t>(dv)]; v < degree_begin_[static_cast<std::size_t>(dv) + 1]; ++v) {
                    if (!(u > v)) continue;
                    const HallWord& w = words_[static_cast<std::size_t>(u)];
                    if (w.is_letter() || w.right <= v) found.emplace_back(u, v);
                }
            }
            std::sort(found.begin(), found.end());
            if (words_.size() + found.size() > cap)
                throw ResourceLimitError("free nilpotent algebra exceeds the dimension cap of " + std::to_string(cap));
            for (auto [u, v] : found) {
                index_[{u, v}] = static_cast<int>(words_.size());
                words_.push_back({-1, u, v, d});
            }
            degree_begin_.push_back(static_cast<int>(words_.size()));
        }
    }

    int generators() const { return m_; }
    int max_degree() const { return kappa_; }
    int size() const { return static_cast<int>(words_.size()); }
    const HallWord& word(int i) const { return words_.at(static_cast<std::size_t>(i)); }

    int count_of_degree(int d) const {
        if (d < 1 || d > kappa_) return 0;
        return degree_begin_[static_cast<std::size_t>(d) + 1] - degree_begin_[static_cast<std::size_t>(d)];
    }

    /// Index of the Hall word [u, v], or -1 if it is not a Hall word.
    int find(int u, int v) const {
        auto it = index_.find({u, v});
        return it == index_.end() ? -1 : it->second;
    }

    /// Nested bracket text, letters written X1..Xm.
    std::string label(int i) const {
        const HallWord& w = word(i);
        if (w.is_letter()) return "X" + std::to_string(w.generator + 1);
        return "[" + label(w.left) + "," + label(w.right) + "]";
    }

    /// Index of the word given by its label, or -1.
    int find_label(const std::string& text) const {
        for (int i = 0; i < size(); ++i)
            if (label(i) == text) return i;
        return -1;
    }

    /// [h_a, h_b] rewritten in the Hall basis, dropping degrees above kappa.
    const AlgebraVector& bracket(int a, int b) {
        auto key = std::make_pair(a, b);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        AlgebraVector result = compute(a, b);
        return memo_.emplace(key, std::move(result)).first->second;
    }

private:
    AlgebraVector compute(int a, int b) {
        if (a == b) return {};
        if (word(a).degree + word(b).degree > kappa_) return {};
        if (a < b) return -AlgebraVector(bracket(b, a));
        const HallWord& w = word(a);
        if (w.is_letter() || w.right <= b) {
            const int idx = find(a, b);
            if (idx < 0) throw std::logic_error("Hall set is missing a standard bracket");
            return basis_vector(idx);
        }
        // [[x,y],b] = [[x,b],y] + [x,[y,b]]  with y > b
        const int x = w.left, y = w.right;
        AlgebraVector out;
        const AlgebraVector xb = bracket(x, b);
        for (const auto& [t, c] : xb) out.add_scaled(AlgebraVector(bracket(t, y)), c);
        const AlgebraVector yb = bracket(y, b);
        for (const auto& [t, c] : yb) out.add_scaled(AlgebraVector(bracket(x, t)), c);
        return out;
    }

    int m_;
    int kappa_;
    std::vector<HallWord> words_;
    std::vector<int> degree_begin_;
    std::map<std::pair<int, int>, int> index_;
    std::map<std::pair<int, int>, AlgebraVector> memo_;
};

/// Witt's necklace count (1/d) sum_{e | d} mu(e) m^(d/e): the dimension of
/// the degree-d part of the free Lie algebra on m generators.
inline long witt_dimension(int m, int d) {
    auto mobius = [](int e) {
        int mu = 1;
        for (int p = 2; p * p <= e; ++p) {
            if (e % p) continue;
            e /= p;
            if (e % p == 0) return 0;
            mu = -mu;
        }
        return e > 1 ? -mu : mu;
    };
    long total = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        long power = 1;
        for (int k = 0; k < d / e; ++k) power *= m;
        total += mobius(e) * power;
    }
    return total / d;
}

/// Free nilpotent Lie algebra on m generators of step kappa, in the Hall basis.
inline StratifiedAlgebra build_free_nilpotent(int m, int kappa, std::size_t cap = 2000) {
    if (m < 2) throw InputError("free nilpotent algebra needs m >= 2");
    if (kappa < 1) throw InputError("free nilpotent algebra needs step >= 1");
    HallSet hall(m, kappa, cap);
    const int n = hall.size();
    std::vector<int> dims;
    for (int d = 1; d <= kappa; ++d) dims.push_back(hall.count_of_degree(d));
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(hall.label(i));
    StructureConstants sc(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (hall.word(i).degree + hall.word(j).degree > kappa) break;
            const AlgebraVector& v = hall.bracket(i, j);
            if (!v.is_zero()) sc.set(i, j, v);
        }
    return StratifiedAlgebra("free(" + std::to_string(m) + "," + std::to_string(kappa) + ")", std::move(dims),
                             std::move(labels), std::move(sc));
}

}  // namespace carnot
