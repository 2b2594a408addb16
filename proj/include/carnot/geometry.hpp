#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carnot/constructors.hpp"
#include "carnot/group.hpp"
#include "carnot/hall.hpp"
#include "carnot/json_io.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// sum_k a_k(x) d/dx_k with polynomial coefficients.
class PolyVectorField {
public:
    PolyVectorField() = default;
    explicit PolyVectorField(int n) : coeffs_(static_cast<std::size_t>(n)) {}
    explicit PolyVectorField(std::vector<Polynomial> coeffs) : coeffs_(std::move(coeffs)) {}

    static PolyVectorField partial(int n, int k) {
        PolyVectorField f(n);
        f.coeffs_[static_cast<std::size_t>(k)] = Polynomial(1);
        return f;
    }

    int dimension() const { return static_cast<int>(coeffs_.size()); }
    const Polynomial& coefficient(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    Polynomial& coefficient(int k) { return coeffs_.at(static_cast<std::size_t>(k)); }

    Polynomial apply(const Polynomial& f) const {
        Polynomial out;
        for (int k = 0; k < dimension(); ++k)
            if (!coeffs_[static_cast<std::size_t>(k)].is_zero() && f.uses_variable(k))
                out += coeffs_[static_cast<std::size_t>(k)] * f.derivative(k);
        return out;
    }

    std::vector<Rational> at(std::span<const Rational> x) const {
        std::vector<Rational> out;
        for (const auto& c : coeffs_) out.push_back(c.evaluate(x));
        return out;
    }

    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) {
        for (int k = 0; k < a.dimension(); ++k) a.coeffs_[static_cast<std::size_t>(k)] += b.coefficient(k);
        return a;
    }
    friend PolyVectorField operator*(const Rational& s, PolyVectorField a) {
        for (auto& c : a.coeffs_) c *= s;
        return a;
    }
    friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;

    std::string str() const {
        std::string s;
        for (int k = 0; k < dimension(); ++k) {
            const auto& c = coeffs_[static_cast<std::size_t>(k)];
            if (c.is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += (c == Polynomial(1) ? "" : "(" + c.str() + ")*") + "d" + std::to_string(k + 1);
        }
        return s.empty() ? "0" : s;
    }

private:
    std::vector<Polynomial> coeffs_;
};

/// Commutator of derivations: [X,Y]_k = X(Y_k) - Y(X_k).
inline PolyVectorField commutator(const PolyVectorField& x, const PolyVectorField& y) {
    PolyVectorField out(x.dimension());
    for (int k = 0; k < x.dimension(); ++k) out.coefficient(k) = x.apply(y.coefficient(k)) - y.apply(x.coefficient(k));
    return out;
}

inline Json to_json(const PolyVectorField& f) {
    Json terms = Json::array();
    for (int k = 0; k < f.dimension(); ++k)
        if (!f.coefficient(k).is_zero()) terms.push_back({{"d", k}, {"coeff", f.coefficient(k).str()}});
    return terms;
}

/// X_i(x) = sum_k dz_k/dy_i (x, 0) d/dx_k.
inline std::vector<PolyVectorField> left_invariant_fields(const GroupLaw& law) {
    const int n = law.dimension();
    std::vector<PolyVectorField> fields;
    for (int i = 0; i < n; ++i) {
        PolyVectorField f(n);
        for (int k = 0; k < n; ++k) {
            Polynomial d = law.z[static_cast<std::size_t>(k)].derivative(n + i);
            for (int v = 0; v < n; ++v) d = d.substitute(n + v, Polynomial());
            f.coefficient(k) = d;
        }
        fields.push_back(std::move(f));
    }
    return fields;
}

/// X1 = d1, X2 = d2 + sum_{k=1}^{kappa-1} (-1)^k x1^k/k! d_{k+2} on R^{kappa+1}.
inline std::vector<PolyVectorField> paper_filiform_fields(int kappa) {
    if (kappa < 2) throw InputError("filiform fields need step >= 2");
    const int n = kappa + 1;
    PolyVectorField x1 = PolyVectorField::partial(n, 0), x2 = PolyVectorField::partial(n, 1);
    for (int k = 1; k <= kappa - 1; ++k)
        x2.coefficient(k + 1) = Polynomial::variable(0).pow(k) * (Rational(k % 2 ? -1 : 1) / factorial(k));
    return {x1, x2};
}

/// Images of every filiform-model basis vector: X1, X2, then Y_{j+1} = [Y_j, X1].
inline std::vector<PolyVectorField> filiform_chain(const std::vector<PolyVectorField>& gens, int kappa) {
    std::vector<PolyVectorField> out = gens;
    for (int j = 2; j <= kappa; ++j) out.push_back(commutator(out.back(), out[0]));
    return out;
}

/// [F_a, F_b] = sum_k c_ab^k F_k for every pair of basis images.
inline bool fields_realize_algebra(const StratifiedAlgebra& g, const std::vector<PolyVectorField>& images) {
    if (static_cast<int>(images.size()) != g.dimension()) return false;
    const int dim = images.front().dimension();
    for (int a = 0; a < g.dimension(); ++a)
        for (int b = a + 1; b < g.dimension(); ++b) {
            PolyVectorField rhs(dim);
            for (const auto& [k, c] : g.basis_bracket(a, b)) rhs = rhs + c * images[static_cast<std::size_t>(k)];
            if (commutator(images[static_cast<std::size_t>(a)], images[static_cast<std::size_t>(b)]) != rhs) return false;
        }
    return true;
}

inline std::vector<Polynomial> horizontal_gradient(const std::vector<PolyVectorField>& horizontal, const Polynomial& f) {
    std::vector<Polynomial> out;
    for (const auto& x : horizontal) out.push_back(x.apply(f));
    return out;
}

/// w with f(delta_lambda x) = lambda^w f(x); nullopt for inhomogeneous f and for f = 0.
inline std::optional<int> check_delta_homogeneity(const std::vector<int>& weights, const Polynomial& f) {
    std::optional<int> w;
    for (const auto& [m, c] : f.terms()) {
        int d = 0;
        for (auto [v, e] : m.factors()) {
            if (v >= weights.size()) throw InputError("polynomial uses x" + std::to_string(v + 1) + " beyond the group dimension");
            d += e * weights[v];
        }
        if (w && *w != d) return std::nullopt;
        w = d;
    }
    return w;
}

inline std::optional<int> check_delta_homogeneity(const StratifiedAlgebra& g, const Polynomial& f) {
    return check_delta_homogeneity(coordinate_weights(g), f);
}

/// f composed with delta_lambda for a concrete lambda.
inline Polynomial dilate_polynomial(const std::vector<int>& weights, const Polynomial& f, const Rational& lambda) {
    return f.compose([&](int v) { return Polynomial::variable(v) * lambda.pow(weights.at(static_cast<std::size_t>(v))); });
}

struct IntrinsicNormal {
    bool characteristic = false;
    std::vector<Rational> gradient;            // exact horizontal gradient at x
    std::vector<double> normal;                // -grad/|grad|
    std::optional<std::vector<Rational>> exact; // when |grad| is rational
};

inline IntrinsicNormal levelset_intrinsic_normal(const std::vector<PolyVectorField>& horizontal, const Polynomial& f,
                                                 const std::vector<Rational>& x) {
    if (!f.evaluate(x).is_zero()) throw InputError("point is not on the level set {f = 0}");
    IntrinsicNormal out;
    Rational sq;
    for (const auto& g : horizontal_gradient(horizontal, f)) {
        out.gradient.push_back(g.evaluate(x));
        sq += out.gradient.back() * out.gradient.back();
    }
    if (sq.is_zero()) {
        out.characteristic = true;
        return out;
    }
    const double norm = std::sqrt(sq.to_double());
    for (const auto& c : out.gradient) out.normal.push_back(-c.to_double() / norm);
    if (auto root = rational_root(sq, 2)) {
        std::vector<Rational> unit;
        for (const auto& c : out.gradient) unit.push_back(-c / *root);
        out.exact = unit;
        for (std::size_t i = 0; i < unit.size(); ++i) out.normal[i] = unit[i].to_double();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quadratic forms in (x1, x2)

struct BinaryQuadratic {
    Rational a, b, c;  // a x1^2 + b x1 x2 + c x2^2

    Rational discriminant() const { return b * b - Rational(4) * a * c; }
    bool positive_semidefinite() const { return a.sign() >= 0 && c.sign() >= 0 && discriminant().sign() <= 0; }
    bool negative_semidefinite() const { return a.sign() <= 0 && c.sign() <= 0 && discriminant().sign() <= 0; }
    bool semidefinite() const { return positive_semidefinite() || negative_semidefinite(); }
    bool definite() const { return !a.is_zero() && discriminant().sign() < 0; }
    std::string sign() const {
        if (a.is_zero() && b.is_zero() && c.is_zero()) return "zero";
        if (definite()) return a.sign() > 0 ? "positive definite" : "negative definite";
        if (positive_semidefinite()) return "positive semidefinite";
        if (negative_semidefinite()) return "negative semidefinite";
        return "indefinite";
    }
};

/// The form when p is a quadratic form in x1, x2 only.
inline std::optional<BinaryQuadratic> as_binary_quadratic(const Polynomial& p) {
    BinaryQuadratic q;
    for (const auto& [m, c] : p.terms()) {
        if (m.degree() != 2 || m.max_variable() > 1) return std::nullopt;
        const int e1 = m.exponent(0);
        (e1 == 2 ? q.a : e1 == 1 ? q.b : q.c) = c;
    }
    return q;
}

// ---------------------------------------------------------------------------
// The blow-up counterexamples

enum class CounterexampleModel { Filiform, Free };

struct CounterexampleReport {
    CounterexampleModel model = CounterexampleModel::Filiform;
    int m = 2;
    int kappa = 3;
    int dimension = 0;
    int j_index = 0;          // coordinate of [[X2,X1],X1]
    std::string j_label;
    Rational c;               // multiplier of x_J
    Polynomial f;
    std::optional<int> weight;
    bool dilation_check = false;  // f(delta_2 x) = 8 f(x)
    std::vector<Polynomial> gradient;
    bool gradient_shape = false;  // (0, q, 0, ..., 0)
    bool gradient_weights = false;
    std::optional<BinaryQuadratic> q;
    std::vector<Rational> witness_in, witness_out;  // same V_1 coordinates, f > 0 and f < 0
    std::optional<IntrinsicNormal> sample_normal;   // at x = e_1
    std::vector<Rational> sample_point;

    bool ok() const {
        return weight == 3 && dilation_check && gradient_shape && gradient_weights && q && q->semidefinite() &&
               !witness_in.empty();
    }
};

namespace detail {

/// Monomials of weighted degree w in variables 0..n-1.
inline void weighted_monomials(const std::vector<int>& weights, int w, int from, Monomial current, std::vector<Monomial>& out) {
    if (w == 0) {
        out.push_back(current);
        return;
    }
    for (int v = from; v < static_cast<int>(weights.size()); ++v) {
        const int wv = weights[static_cast<std::size_t>(v)];
        if (wv > w) continue;
        weighted_monomials(weights, w - wv, v, current * Monomial::variable(v), out);
    }
}

inline void finish_counterexample(CounterexampleReport& r, const std::vector<int>& weights,
                                  const std::vector<PolyVectorField>& horizontal) {
    r.dimension = static_cast<int>(weights.size());
    r.weight = check_delta_homogeneity(weights, r.f);
    r.dilation_check = dilate_polynomial(weights, r.f, Rational(2)) == Rational(8) * r.f;
    r.gradient = horizontal_gradient(horizontal, r.f);
    r.gradient_shape = r.gradient[0].is_zero();
    for (std::size_t i = 2; i < r.gradient.size(); ++i) r.gradient_shape = r.gradient_shape && r.gradient[i].is_zero();
    r.q = as_binary_quadratic(r.gradient[1]);
    r.gradient_shape = r.gradient_shape && r.q.has_value();
    r.gradient_weights = true;
    for (const auto& g : r.gradient)
        if (!g.is_zero()) r.gradient_weights = r.gradient_weights && check_delta_homogeneity(weights, g) == 2;

    std::vector<Rational> plus(weights.size()), minus(weights.size());
    plus[static_cast<std::size_t>(r.j_index)] = Rational(1);
    minus[static_cast<std::size_t>(r.j_index)] = Rational(-1);
    if (r.f.evaluate(plus).sign() * r.f.evaluate(minus).sign() < 0) {
        r.witness_in = r.f.evaluate(plus).sign() > 0 ? plus : minus;
        r.witness_out = r.f.evaluate(plus).sign() > 0 ? minus : plus;
    }
    r.sample_point.assign(weights.size(), Rational(0));
    r.sample_point[0] = Rational(1);
    if (r.f.evaluate(r.sample_point).is_zero()) r.sample_normal = levelset_intrinsic_normal(horizontal, r.f, r.sample_point);
}

}  // namespace detail

/// Fixed-chart filiform example: f = x2^3/3 + 2 x4 with the explicit fields.
inline CounterexampleReport filiform_counterexample(int kappa) {
    if (kappa < 3) throw InputError("counterexample needs step > 2");
    CounterexampleReport r;
    r.model = CounterexampleModel::Filiform;
    r.kappa = kappa;
    r.j_index = 3;
    r.j_label = build_filiform_model(kappa).label(3);
    r.c = Rational(2);
    r.f = parse_polynomial("x2^3/3 + 2*x4");
    detail::finish_counterexample(r, coordinate_weights(build_filiform_model(kappa)), paper_filiform_fields(kappa));
    return r;
}

/// Weight-3 f = x2^3/3 + c x_J + (correction) in exponential coordinates of
/// f_{m,kappa}: the correction is solved exactly so that X_i f = 0 for i != 2
/// and X_2 f only involves x1, x2. Returns nullopt if the system is inconsistent.
inline std::optional<Polynomial> solve_free_counterexample(const std::vector<int>& weights,
                                                           const std::vector<PolyVectorField>& horizontal, int j,
                                                           const Rational& c) {
    const Polynomial base = Polynomial::variable(1).pow(3) * Rational(1, 3) + Polynomial::variable(j) * c;
    std::vector<Monomial> unknowns, all;
    detail::weighted_monomials(weights, 3, 0, Monomial{}, all);
    for (const auto& mono : all)
        if (mono != Monomial::variable(1, 3) && mono != Monomial::variable(j)) unknowns.push_back(mono);

    // constraint "rows" are (field index, monomial) coefficients that must vanish
    auto constrained = [](std::size_t i, const Monomial& mono) { return i != 1 || mono.max_variable() > 1; };
    std::map<std::pair<std::size_t, Monomial>, std::size_t> rows;
    std::vector<std::vector<std::pair<std::pair<std::size_t, Monomial>, Rational>>> columns(unknowns.size());
    std::vector<std::pair<std::pair<std::size_t, Monomial>, Rational>> rhs_terms;
    auto note = [&](std::size_t i, const Polynomial& p, auto& sink) {
        for (const auto& [mono, coeff] : p.terms()) {
            if (!constrained(i, mono)) continue;
            rows.try_emplace({i, mono}, rows.size());
            sink.push_back({{i, mono}, coeff});
        }
    };
    for (std::size_t i = 0; i < horizontal.size(); ++i) {
        note(i, horizontal[i].apply(base), rhs_terms);
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            note(i, horizontal[i].apply(Polynomial::monomial(unknowns[u], Rational(1))), columns[u]);
    }
    if (rows.empty()) return base;
    RationalMatrix a(rows.size(), unknowns.size());
    std::vector<Rational> b(rows.size());
    for (std::size_t u = 0; u < unknowns.size(); ++u)
        for (const auto& [key, coeff] : columns[u]) a(rows.at(key), u) += coeff;
    for (const auto& [key, coeff] : rhs_terms) b[rows.at(key)] -= coeff;
    auto sol = solve(a, b);
    if (!sol) return std::nullopt;
    Polynomial f = base;
    for (std::size_t u = 0; u < unknowns.size(); ++u) f.add_term(unknowns[u], (*sol)[u]);
    return f;
}

/// Free-group counterexample in the exponential chart. The multiplier c of
/// x_J is the first of 2, -2, 1, -1, 3, -3, ... (up to 12) giving a definite
/// quadratic X_2 f; failing that, the first semidefinite one.
inline CounterexampleReport free_counterexample(int m, int kappa) {
    if (m < 2) throw InputError("free counterexample needs m >= 2");
    if (kappa < 3) throw InputError("counterexample needs step > 2");
    const auto g = build_free_nilpotent(m, kappa);
    const auto law = derive_group_law(g);
    auto fields = left_invariant_fields(law);
    fields.resize(static_cast<std::size_t>(m));
    const auto weights = coordinate_weights(g);
    CounterexampleReport r;
    r.model = CounterexampleModel::Free;
    r.m = m;
    r.kappa = kappa;
    r.j_label = "[[X2,X1],X1]";
    r.j_index = -1;
    for (int i = 0; i < g.dimension(); ++i)
        if (g.label(i) == r.j_label) r.j_index = i;
    if (r.j_index < 0) throw std::logic_error("Hall basis lacks [[X2,X1],X1]");

    std::optional<std::pair<Rational, Polynomial>> semidefinite;
    bool chosen = false;
    for (int k = 1; k <= 12 && !chosen; ++k)
        for (int s : {1, -1}) {
            const Rational c = k == 1 ? Rational(2 * s) : k == 2 ? Rational(s) : Rational(s * k);
            auto f = solve_free_counterexample(weights, fields, r.j_index, c);
            if (!f) continue;
            auto q = as_binary_quadratic(fields[1].apply(*f));
            if (!q) continue;
            if (q->definite()) {
                r.c = c;
                r.f = *f;
                chosen = true;
                break;
            }
            if (q->semidefinite() && !semidefinite) semidefinite = std::make_pair(c, *f);
        }
    if (!chosen) {
        if (!semidefinite) throw std::logic_error("no calibration of x_J gives a semidefinite gradient");
        r.c = semidefinite->first;
        r.f = semidefinite->second;
    }
    detail::finish_counterexample(r, weights, fields);
    return r;
}

inline CounterexampleReport verify_counterexample(CounterexampleModel model, int m, int kappa) {
    return model == CounterexampleModel::Filiform ? filiform_counterexample(kappa) : free_counterexample(m, kappa);
}

inline Json to_json(const CounterexampleReport& r) {
    Json grad = Json::array();
    for (const auto& g : r.gradient) grad.push_back(g.str());
    Json j{{"model", r.model == CounterexampleModel::Filiform ? "filiform" : "free"},
           {"m", r.m},
           {"kappa", r.kappa},
           {"dimension", r.dimension},
           {"x_J", {{"variable", "x" + std::to_string(r.j_index + 1)}, {"label", r.j_label}, {"coefficient", r.c.str()}}},
           {"f", r.f.str()},
           {"weight", r.weight ? Json(*r.weight) : Json(nullptr)},
           {"dilation_by_2_scales_by_8", r.dilation_check},
           {"horizontal_gradient", grad},
           {"gradient_shape_ok", r.gradient_shape}};
    if (r.q)
        j["q"] = {{"x1^2", r.q->a.str()}, {"x1*x2", r.q->b.str()}, {"x2^2", r.q->c.str()},
                  {"discriminant", r.q->discriminant().str()}, {"class", r.q->sign()}};
    j["not_vertical_witness"] = {{"f_positive_at", rationals_to_json(r.witness_in)},
                                 {"f_negative_at", rationals_to_json(r.witness_out)},
                                 {"note", "same V_1 coordinates, opposite sides of {f = 0}"}};
    if (r.sample_normal) {
        Json n = Json::array();
        for (double v : r.sample_normal->normal) n.push_back(v);
        j["normal_at"] = {{"point", rationals_to_json(r.sample_point)},
                          {"characteristic", r.sample_normal->characteristic},
                          {"normal", n}};
    }
    j["ok"] = r.ok();
    return j;
}

}  // namespace carnot
