#pragma once

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/json_io.hpp"
#include "carnot/matrix.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// Exponential coordinates p_1..p_n of a group element.
using GroupPoint = std::vector<Rational>;
using PolyVector = LinearCombination<Polynomial>;

inline void check_point(const StratifiedAlgebra& g, const GroupPoint& p) {
    if (static_cast<int>(p.size()) != g.dimension())
        throw InputError("point has " + std::to_string(p.size()) + " coordinates, algebra '" + g.name() + "' has dimension " +
                         std::to_string(g.dimension()));
}

/// Homogeneity exponent alpha_i of each coordinate (its layer).
inline std::vector<int> coordinate_weights(const StratifiedAlgebra& g) {
    std::vector<int> w;
    for (int i = 0; i < g.dimension(); ++i) w.push_back(g.layer_of(i));
    return w;
}

// ---------------------------------------------------------------------------
// Truncated free associative algebra on two letters ('x' and 'y')

namespace detail {

using Word = std::string;
using AssocElement = std::map<Word, Rational>;

inline AssocElement assoc_mul(const AssocElement& a, const AssocElement& b, std::size_t max_len) {
    AssocElement out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            if (wa.size() + wb.size() > max_len) continue;
            Rational& slot = out[wa + wb];
            slot += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

/// log(e^x e^y) truncated at words of length kappa.
inline AssocElement bch_series(int kappa) {
    const auto len = static_cast<std::size_t>(kappa);
    AssocElement w;  // e^x e^y - 1
    for (int a = 0; a <= kappa; ++a)
        for (int b = 0; a + b <= kappa; ++b) {
            if (a + b == 0) continue;
            w[Word(static_cast<std::size_t>(a), 'x') + Word(static_cast<std::size_t>(b), 'y')] =
                (factorial(a) * factorial(b)).inverse();
        }
    AssocElement result, power = w;
    for (int k = 1; k <= kappa; ++k) {
        const Rational scale = Rational(k % 2 ? 1 : -1, k);
        for (const auto& [word, c] : power) {
            Rational& slot = result[word];
            slot += scale * c;
        }
        power = assoc_mul(power, w, len);
    }
    for (auto it = result.begin(); it != result.end();) it = it->second.is_zero() ? result.erase(it) : std::next(it);
    return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Group law

/// z = x . y in exponential coordinates. Variables 0..n-1 are x, n..2n-1 are y.
struct GroupLaw {
    StratifiedAlgebra algebra;
    std::vector<Polynomial> z;

    int dimension() const { return algebra.dimension(); }
    std::size_t term_count() const {
        std::size_t t = 0;
        for (const auto& p : z) t += p.size();
        return t;
    }
};

/// Dynkin form of Baker-Campbell-Hausdorff: the Lie series log(e^X e^Y) is
/// computed in the free associative algebra and each degree-d word w is
/// replaced by theta(w)/d, theta being the left-normed bracket.
inline GroupLaw derive_group_law(const StratifiedAlgebra& g, std::size_t term_cap = 200000) {
    const int n = g.dimension();
    const int kappa = std::max(1, g.step());
    if (kappa > 14) throw ResourceLimitError("step too large for the BCH expansion");
    PolyVector x, y;
    for (int i = 0; i < n; ++i) {
        x.add(i, Polynomial::variable(i));
        y.add(i, Polynomial::variable(n + i));
    }
    std::map<detail::Word, PolyVector> theta;
    theta["x"] = x;
    theta["y"] = y;
    PolyVector total;
    std::size_t terms = 0;
    for (const auto& [word, c] : detail::bch_series(kappa)) {
        // left-normed prefixes share work
        for (std::size_t len = 2; len <= word.size(); ++len) {
            const auto prefix = word.substr(0, len);
            if (theta.count(prefix)) continue;
            const PolyVector& head = theta.at(word.substr(0, len - 1));
            theta[prefix] = head.is_zero() ? PolyVector{} : g.bracket(head, word[len - 1] == 'x' ? x : y);
        }
        const PolyVector& t = theta.at(word);
        if (t.is_zero()) continue;
        total.add_scaled(t, Polynomial(c / Rational(static_cast<long>(word.size()))));
        terms = 0;
        for (const auto& [k, p] : total) terms += p.size();
        if (terms > term_cap) throw ResourceLimitError("group law exceeds the term cap of " + std::to_string(term_cap));
    }
    GroupLaw law{g, std::vector<Polynomial>(static_cast<std::size_t>(n))};
    for (const auto& [k, p] : total) law.z[static_cast<std::size_t>(k)] = p;
    return law;
}

inline GroupPoint multiply(const GroupLaw& law, const GroupPoint& a, const GroupPoint& b) {
    check_point(law.algebra, a);
    check_point(law.algebra, b);
    std::vector<Rational> xy(a);
    xy.insert(xy.end(), b.begin(), b.end());
    GroupPoint out;
    for (const auto& p : law.z) out.push_back(p.evaluate(xy));
    return out;
}

/// In exponential coordinates the inverse is the negation.
inline GroupPoint group_inverse(const GroupPoint& p) {
    GroupPoint out;
    for (const auto& c : p) out.push_back(-c);
    return out;
}

inline GroupPoint dilate(const StratifiedAlgebra& g, const Rational& lambda, const GroupPoint& p) {
    check_point(g, p);
    if (lambda.sign() <= 0) throw InputError("dilation factor must be positive");
    GroupPoint out;
    for (int i = 0; i < g.dimension(); ++i) out.push_back(lambda.pow(g.layer_of(i)) * p[static_cast<std::size_t>(i)]);
    return out;
}

/// Jacobian determinant of delta_lambda: product of the diagonal scalings.
inline Rational dilation_jacobian(const StratifiedAlgebra& g, const Rational& lambda) {
    Rational det(1);
    for (int i = 0; i < g.dimension(); ++i) det *= lambda.pow(g.layer_of(i));
    return det;
}

// ---------------------------------------------------------------------------
// Structural checks on a derived law

/// Every monomial of z_k has weighted degree alpha_k (x_i, y_i weigh alpha_i).
inline bool law_is_homogeneous(const GroupLaw& law) {
    const int n = law.dimension();
    for (int k = 0; k < n; ++k)
        for (const auto& [m, c] : law.z[static_cast<std::size_t>(k)].terms()) {
            int w = 0;
            for (auto [v, e] : m.factors()) w += e * law.algebra.layer_of(v % n);
            if (w != law.algebra.layer_of(k)) return false;
        }
    return true;
}

/// d z_k / d y_l = delta_kl whenever layer(l) >= layer(k): the Jacobian of
/// y -> x.y is unipotent block-triangular in layer order, so its determinant is 1.
inline bool left_translation_unimodular(const GroupLaw& law) {
    const int n = law.dimension();
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            if (law.algebra.layer_of(l) < law.algebra.layer_of(k)) continue;
            const Polynomial d = law.z[static_cast<std::size_t>(k)].derivative(n + l);
            if (d != Polynomial(k == l ? 1 : 0)) return false;
        }
    return true;
}

/// z(x, 0) = x and z(0, y) = y.
inline bool law_has_identity(const GroupLaw& law) {
    const int n = law.dimension();
    for (int k = 0; k < n; ++k) {
        const Polynomial& p = law.z[static_cast<std::size_t>(k)];
        Polynomial xs = p, ys = p;
        for (int v = 0; v < n; ++v) {
            xs = xs.substitute(n + v, Polynomial());
            ys = ys.substitute(v, Polynomial());
        }
        if (xs != Polynomial::variable(k) || ys != Polynomial::variable(n + k)) return false;
    }
    return true;
}

inline Json to_json(const GroupLaw& law) {
    const int n = law.dimension();
    Json coords = Json::array();
    for (int k = 0; k < n; ++k) {
        Json terms = Json::array();
        for (const auto& [m, c] : law.z[static_cast<std::size_t>(k)].terms()) {
            std::vector<int> xe(static_cast<std::size_t>(n), 0), ye(static_cast<std::size_t>(n), 0);
            for (auto [v, e] : m.factors()) (v < n ? xe[v] : ye[static_cast<std::size_t>(v - n)]) = e;
            terms.push_back({{"coeff", c.str()}, {"x", xe}, {"y", ye}});
        }
        coords.push_back({{"coordinate", k}, {"label", law.algebra.label(k)}, {"terms", terms}});
    }
    return Json{{"algebra", law.algebra.name()}, {"dimension", n}, {"law", coords}};
}

inline std::string law_variable_name(int n, int v) {
    return (v < n ? "x" : "y") + std::to_string(v % n + 1);
}

// ---------------------------------------------------------------------------
// The d_infinity quasi-distance

struct DInfinity {
    double value = 0;
    std::vector<Rational> squared_norms;  // |p_j|^2 per layer
    std::vector<Rational> eps;            // eps_1 = 1, eps_2.. as used
    std::optional<Rational> exact;        // when every layer term is rational
    std::string exact_form;               // max{eps_j (|p_j|^2)^(1/2j)}
};

/// Exact r-th root of a nonnegative rational, if it exists.
inline std::optional<Rational> rational_root(const Rational& q, unsigned long r) {
    if (q.sign() < 0) return std::nullopt;
    mpz_class num = q.numerator(), den = q.denominator(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), r)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), r)) return std::nullopt;
    return Rational(rn, rd);
}

/// eps_j for j = 2..step, defaulting to 1/2.
inline std::vector<Rational> resolve_eps(const StratifiedAlgebra& g, const std::vector<Rational>& eps) {
    for (const auto& e : eps)
        if (e.sign() <= 0 || e > Rational(1)) throw InputError("eps values must lie in (0, 1], got " + e.str());
    std::vector<Rational> out{Rational(1)};
    for (int j = 2; j <= g.step(); ++j) {
        const std::size_t idx = static_cast<std::size_t>(j - 2);
        out.push_back(idx < eps.size() ? eps[idx] : Rational(1, 2));
    }
    return out;
}

/// Layer-wise max of eps_j |p_j|^(1/j) at p = y^-1 . x.
inline DInfinity d_infinity(const GroupLaw& law, const std::vector<Rational>& eps, const GroupPoint& x, const GroupPoint& y) {
    const auto& g = law.algebra;
    DInfinity d;
    d.eps = resolve_eps(g, eps);
    const GroupPoint p = multiply(law, group_inverse(y), x);
    bool all_exact = true;
    Rational best;
    std::string form = "max{";
    for (int j = 1; j <= g.step(); ++j) {
        Rational sq;
        for (int i = g.layer_begin(j); i < g.layer_end(j); ++i) sq += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
        d.squared_norms.push_back(sq);
        const Rational& e = d.eps[static_cast<std::size_t>(j - 1)];
        const double term = e.to_double() * std::pow(sq.to_double(), 1.0 / (2.0 * j));
        d.value = std::max(d.value, term);
        if (auto root = rational_root(sq, static_cast<unsigned long>(2 * j))) {
            if (e * *root > best) best = e * *root;
        } else {
            all_exact = false;
        }
        form += (j > 1 ? ", " : "") + (e.is_one() ? std::string() : e.str() + "*") + "(" + sq.str() + ")^(1/" +
                std::to_string(2 * j) + ")";
    }
    d.exact_form = form + "}";
    if (all_exact) {
        d.exact = best;
        d.value = best.to_double();
    }
    return d;
}

// ---------------------------------------------------------------------------
// Matrix oracle for the unit upper triangular family

/// (row, col) of each basis element E_{k,k+l} of build_unit_upper_triangular(m), 0-based.
inline std::vector<std::pair<int, int>> gm_positions(int m) {
    std::vector<std::pair<int, int>> pos;
    for (int l = 1; l <= m; ++l)
        for (int k = 1; k <= m + 1 - l; ++k) pos.emplace_back(k - 1, k - 1 + l);
    return pos;
}

inline void check_gm(const StratifiedAlgebra& g, int m) {
    if (g.dimension() != m * (m + 1) / 2 || g.step() != m || g.name() != "G" + std::to_string(m))
        throw InputError("matrix oracle needs the unit upper triangular algebra G" + std::to_string(m));
}

/// exp of a strictly upper triangular matrix (finite series).
template <class T>
Matrix<T> nilpotent_exp(const Matrix<T>& n) {
    const std::size_t size = n.rows();
    Matrix<T> result = Matrix<T>::identity(size), power = Matrix<T>::identity(size);
    for (std::size_t k = 1; k < size; ++k) {
        power = power * n;
        if (power.is_zero()) break;
        result = result + factorial(static_cast<int>(k)).inverse() * power;
    }
    return result;
}

/// log of a unit upper triangular matrix (finite series).
template <class T>
Matrix<T> unipotent_log(const Matrix<T>& u) {
    const std::size_t size = u.rows();
    const Matrix<T> n = u - Matrix<T>::identity(size);
    Matrix<T> result(size, size), power = Matrix<T>::identity(size);
    for (std::size_t k = 1; k < size; ++k) {
        power = power * n;
        if (power.is_zero()) break;
        result = result + Rational(k % 2 ? 1 : -1, static_cast<long>(k)) * power;
    }
    return result;
}

template <class T>
Matrix<T> gm_matrix(int m, const std::vector<T>& coords) {
    Matrix<T> a(static_cast<std::size_t>(m + 1), static_cast<std::size_t>(m + 1));
    const auto pos = gm_positions(m);
    for (std::size_t i = 0; i < pos.size(); ++i)
        a(static_cast<std::size_t>(pos[i].first), static_cast<std::size_t>(pos[i].second)) = coords[i];
    return a;
}

template <class T>
std::vector<T> gm_coordinates(int m, const Matrix<T>& a) {
    std::vector<T> out;
    for (auto [r, c] : gm_positions(m)) out.push_back(a(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
    return out;
}

/// exp(sum x_i E_i) as a unit upper triangular (m+1)x(m+1) matrix.
inline RationalMatrix matrix_oracle_gm(const StratifiedAlgebra& g, int m, const GroupPoint& x) {
    check_gm(g, m);
    check_point(g, x);
    return nilpotent_exp(gm_matrix(m, x));
}

/// Inverse chart: exponential coordinates of a unit upper triangular matrix.
inline GroupPoint matrix_oracle_gm_log(int m, const RationalMatrix& u) {
    if (u.rows() != static_cast<std::size_t>(m + 1) || !u.is_square()) throw InputError("matrix size does not match G_m");
    for (std::size_t r = 0; r < u.rows(); ++r)
        for (std::size_t c = 0; c <= r; ++c)
            if (u(r, c) != Rational(r == c ? 1 : 0)) throw InputError("matrix is not unit upper triangular");
    return gm_coordinates(m, unipotent_log(u));
}

/// Group law of G_m computed as log(exp(X) exp(Y)) with polynomial entries.
inline std::vector<Polynomial> matrix_oracle_gm_law(int m) {
    const int n = m * (m + 1) / 2;
    std::vector<Polynomial> xs, ys;
    for (int i = 0; i < n; ++i) {
        xs.push_back(Polynomial::variable(i));
        ys.push_back(Polynomial::variable(n + i));
    }
    const auto prod = nilpotent_exp(gm_matrix(m, xs)) * nilpotent_exp(gm_matrix(m, ys));
    return gm_coordinates(m, unipotent_log(prod));
}

}  // namespace carnot
