#pragma once

#include <algorithm>
#include <cctype>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Sparse monomial: (variable, exponent) pairs sorted by variable, exponents > 0.
class Monomial {
public:
    using Factor = std::pair<std::uint16_t, std::uint16_t>;

    Monomial() = default;
    static Monomial variable(int v, int e = 1) {
        Monomial m;
        if (e > 0) m.factors_.emplace_back(static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(e));
        return m;
    }

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    int exponent(int v) const {
        for (auto [var, e] : factors_)
            if (var == v) return e;
        return 0;
    }
    int degree() const {
        int d = 0;
        for (auto [var, e] : factors_) d += e;
        return d;
    }
    int max_variable() const { return factors_.empty() ? -1 : factors_.back().first; }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial out;
        out.factors_.reserve(a.factors_.size() + b.factors_.size());
        std::size_t i = 0, j = 0;
        while (i < a.factors_.size() || j < b.factors_.size()) {
            if (j == b.factors_.size() || (i < a.factors_.size() && a.factors_[i].first < b.factors_[j].first))
                out.factors_.push_back(a.factors_[i++]);
            else if (i == a.factors_.size() || b.factors_[j].first < a.factors_[i].first)
                out.factors_.push_back(b.factors_[j++]);
            else {
                out.factors_.emplace_back(a.factors_[i].first,
                                          static_cast<std::uint16_t>(a.factors_[i].second + b.factors_[j].second));
                ++i;
                ++j;
            }
        }
        return out;
    }

    /// Same monomial with variable v's exponent set to e (0 removes it).
    Monomial with_exponent(int v, int e) const {
        Monomial out;
        bool placed = false;
        for (auto f : factors_) {
            if (!placed && f.first >= v) {
                if (e > 0) out.factors_.emplace_back(static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(e));
                placed = true;
                if (f.first == v) continue;
            }
            out.factors_.push_back(f);
        }
        if (!placed && e > 0) out.factors_.emplace_back(static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(e));
        return out;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.factors_ <=> b.factors_; }

private:
    std::vector<Factor> factors_;
};

/// Default variable names x1, x2, ...
inline std::string default_variable_name(int v) { return "x" + std::to_string(v + 1); }

/// Multivariate polynomial with exact rational coefficients, canonical form
/// (no zero coefficients, unique monomials).
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational>;
    using NameFn = std::function<std::string(int)>;

    Polynomial() = default;
    template <std::integral I>
    Polynomial(I c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) terms_.emplace(Monomial{}, c);
    }

    static Polynomial variable(int v) { return monomial(Monomial::variable(v), Rational(1)); }
    static Polynomial monomial(Monomial m, Rational c) {
        Polynomial p;
        if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    Rational constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int degree() const {
        int d = is_zero() ? -1 : 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    int degree_in(int v) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
        return d;
    }
    /// Largest variable index appearing, -1 for constants.
    int max_variable() const {
        int v = -1;
        for (const auto& [m, c] : terms_) v = std::max(v, m.max_variable());
        return v;
    }
    bool uses_variable(int v) const {
        for (const auto& [m, c] : terms_)
            if (m.exponent(v) > 0) return true;
        return false;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial& operator*=(const Rational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) {
        for (auto& [m, c] : a.terms_) c = -c;
        return a;
    }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

    Polynomial pow(int e) const {
        Polynomial r(1);
        for (int k = 0; k < e; ++k) r *= *this;
        return r;
    }

    Polynomial derivative(int v) const {
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            const int e = m.exponent(v);
            if (e == 0) continue;
            out.add_term(m.with_exponent(v, e - 1), c * Rational(e));
        }
        return out;
    }

    /// Evaluates with values[v] for variable v (missing variables are an error).
    Rational evaluate(std::span<const Rational> values) const {
        Rational total(0);
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (auto [v, e] : m.factors()) {
                if (v >= values.size()) throw InputError("polynomial evaluated with too few values");
                if (e == 1)
                    t *= values[v];
                else
                    t *= values[v].pow(e);
            }
            total += t;
        }
        return total;
    }

    /// Replaces variable v by a polynomial.
    Polynomial substitute(int v, const Polynomial& value) const {
        std::vector<Polynomial> powers{Polynomial(1)};
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            const int e = m.exponent(v);
            while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * value);
            out += Polynomial::monomial(m.with_exponent(v, 0), c) * powers[static_cast<std::size_t>(e)];
        }
        return out;
    }

    /// Numerator of p(v := num/den) after multiplying through by den^deg_v(p).
    Polynomial substitute_fraction(int v, const Polynomial& num, const Polynomial& den) const {
        const int d = degree_in(v);
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            const int e = m.exponent(v);
            out += Polynomial::monomial(m.with_exponent(v, 0), c) * num.pow(e) * den.pow(d - e);
        }
        return out;
    }

    /// Maps every variable through f (variable index -> polynomial).
    Polynomial compose(const std::function<Polynomial(int)>& f) const {
        Polynomial out;
        std::map<std::pair<int, int>, Polynomial> cache;
        for (const auto& [m, c] : terms_) {
            Polynomial t(c);
            for (auto [v, e] : m.factors()) {
                auto key = std::make_pair(static_cast<int>(v), static_cast<int>(e));
                auto it = cache.find(key);
                if (it == cache.end()) it = cache.emplace(key, f(v).pow(e)).first;
                t *= it->second;
            }
            out += t;
        }
        return out;
    }

    std::string str(const NameFn& name = default_variable_name) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // highest total degree first for readability
        std::vector<std::pair<Monomial, Rational>> ordered(terms_.begin(), terms_.end());
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const auto& a, const auto& b) { return a.first.degree() > b.first.degree(); });
        for (const auto& [m, c] : ordered) {
            Rational mag = abs(c);
            os << (first ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + "));
            first = false;
            bool wrote = false;
            if (!mag.is_one() || m.is_one()) {
                os << mag;
                wrote = true;
            }
            for (auto [v, e] : m.factors()) {
                os << (wrote ? "*" : "") << name(v);
                if (e > 1) os << "^" << e;
                wrote = true;
            }
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

private:
    Terms terms_;
};

/// Parses text like "x2^3/3 + 2*x4 - 1/2*x1*x3". Variables are x1, x2, ...
/// (1-based in text, 0-based internally).
inline Polynomial parse_polynomial(const std::string& text) {
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto read_uint = [&]() -> std::string {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw InputError("expected a number at position " + std::to_string(start) + " in '" + text + "'");
        return text.substr(start, pos - start);
    };
    Polynomial result;
    skip();
    if (pos == text.size()) throw InputError("empty polynomial");
    while (pos < text.size()) {
        int sign = 1;
        skip();
        while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') sign = -sign;
            ++pos;
            skip();
        }
        Polynomial term(sign);
        bool expect_factor = true;
        while (expect_factor) {
            skip();
            if (pos < text.size() && text[pos] == 'x') {
                ++pos;
                int v = std::stoi(read_uint()) - 1;
                if (v < 0) throw InputError("variables are numbered from x1");
                int e = 1;
                skip();
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    skip();
                    e = std::stoi(read_uint());
                }
                term *= Polynomial::monomial(Monomial::variable(v, e), Rational(1));
            } else {
                term *= Rational::parse(read_uint());
            }
            skip();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
            } else if (pos < text.size() && text[pos] == '/') {
                ++pos;
                skip();
                Rational d = Rational::parse(read_uint());
                if (d.is_zero()) throw InputError("division by zero in polynomial");
                term *= d.inverse();
                skip();
                if (pos < text.size() && text[pos] == '*')
                    ++pos;
                else
                    expect_factor = false;
            } else {
                expect_factor = false;
            }
        }
        result += term;
        skip();
        if (pos < text.size() && text[pos] != '+' && text[pos] != '-')
            throw InputError("unexpected character '" + std::string(1, text[pos]) + "' in polynomial");
    }
    return result;
}

}  // namespace carnot
