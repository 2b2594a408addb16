#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <type_traits>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

/// Thrown for malformed input (bad JSON, bad rational text, out-of-range
/// indices, violated preconditions). The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a construction would exceed a configured size cap.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value wrapper over GMP's mpq_class. Division by zero throws
/// std::domain_error instead of trapping.
class Rational {
public:
    Rational() = default;
    template <std::integral I>
    Rational(I v) {  // NOLINT(google-explicit-constructor)
        if constexpr (std::is_signed_v<I>)
            q_ = mpq_class(static_cast<long>(v));
        else
            q_ = mpq_class(static_cast<unsigned long>(v));
    }
    Rational(long num, long den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    /// Parses "p", "-p" or "p/q" (whitespace not allowed inside).
    static Rational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) throw InputError("empty rational literal");
        auto valid_int = [](std::string_view t) {
            if (t.empty()) return false;
            std::size_t k = (t[0] == '-' || t[0] == '+') ? 1 : 0;
            if (k == t.size()) return false;
            for (; k < t.size(); ++k)
                if (t[k] < '0' || t[k] > '9') return false;
            return true;
        };
        auto slash = s.find('/');
        std::string num = s.substr(0, slash);
        std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
        if (!num.empty() && num[0] == '+') num.erase(0, 1);
        if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
            throw InputError("malformed rational literal '" + s + "'");
        mpz_class n(num, 10), d(den, 10);
        if (d == 0) throw InputError("zero denominator in '" + s + "'");
        return Rational(n, d);
    }

    const mpq_class& raw() const { return q_; }
    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    int sign() const { return sgn(q_); }
    bool is_integer() const { return q_.get_den() == 1; }

    double to_double() const { return q_.get_d(); }

    /// "p" when the denominator is 1, otherwise "p/q".
    std::string str() const {
        if (is_integer()) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    Rational inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        return Rational(mpq_class(1 / q_));
    }

    /// Integer power, negative exponents allowed for nonzero values.
    Rational pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Rational result(1), base = *this;
        while (e > 0) {
            if (e & 1) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational factorial(int n) {
    Rational r(1);
    for (int k = 2; k <= n; ++k) r *= Rational(k);
    return r;
}

}  // namespace carnot
