#pragma once

#include <map>
#include <utility>

#include "carnot/rational.hpp"

namespace carnot {

/// Sparse linear combination of basis indices with coefficients in a
/// commutative ring `Coeff` (Rational, or Polynomial for symbolic work).
/// Zero coefficients are never stored.
template <class Coeff>
class LinearCombination {
public:
    using Terms = std::map<int, Coeff>;

    LinearCombination() = default;
    explicit LinearCombination(Terms terms) {
        for (auto& [k, c] : terms)
            if (!c.is_zero()) terms_.emplace(k, std::move(c));
    }

    static LinearCombination basis(int index, Coeff c = Coeff(1)) {
        LinearCombination v;
        v.add(index, std::move(c));
        return v;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Coeff coefficient(int index) const {
        auto it = terms_.find(index);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    void add(int index, const Coeff& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(index, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// this += scale * other
    template <class S>
    void add_scaled(const LinearCombination& other, const S& scale) {
        for (const auto& [k, c] : other.terms_) add(k, c * scale);
    }

    LinearCombination& operator+=(const LinearCombination& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    LinearCombination& operator-=(const LinearCombination& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    template <class S>
    LinearCombination& operator*=(const S& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        Terms next;
        for (auto& [k, c] : terms_) {
            Coeff v = c * s;
            if (!v.is_zero()) next.emplace(k, std::move(v));
        }
        terms_ = std::move(next);
        return *this;
    }

    friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
    friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
    friend LinearCombination operator-(LinearCombination a) {
        for (auto& [k, c] : a.terms_) c = -c;
        return a;
    }
    template <class S>
    friend LinearCombination operator*(LinearCombination a, const S& s) { return a *= s; }
    template <class S>
    friend LinearCombination operator*(const S& s, LinearCombination a) { return a *= s; }

    friend bool operator==(const LinearCombination& a, const LinearCombination& b) {
        return a.terms_ == b.terms_;
    }

    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

private:
    Terms terms_;
};

using AlgebraVector = LinearCombination<Rational>;

}  // namespace carnot
