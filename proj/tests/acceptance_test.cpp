// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "carnot/contrex.hpp"
#include "carnot/geometry.hpp"
#include "carnot/group.hpp"
#include "carnot/hall.hpp"
#include "carnot/json_io.hpp"
#include "carnot/report.hpp"
#include "carnot/type_star.hpp"

using namespace carnot;

namespace {

constexpr std::uint64_t kSeed = 2024;

struct Criterion {
    int id;
    std::string title;
    double limit_seconds;
    std::function<bool(std::string&)> run;
};

// Degree-d part of the free Lie algebra on m letters, by brute force: expand every
// left-normed bracket [x_i1, ..., x_id] in the free associative algebra and take the rank.
int free_lie_degree_dimension(int m, int d) {
    using Element = std::map<std::string, long>;
    std::vector<Element> brackets;
    std::function<void(Element, int)> grow = [&](Element cur, int len) {
        if (len == d) {
            brackets.push_back(std::move(cur));
            return;
        }
        for (int i = 0; i < m; ++i) {
            const char x = static_cast<char>('a' + i);
            Element next;
            for (const auto& [w, c] : cur) {
                next[w + x] += c;
                next[std::string(1, x) + w] -= c;
            }
            grow(std::move(next), len + 1);
        }
    };
    for (int i = 0; i < m; ++i) grow(Element{{std::string(1, static_cast<char>('a' + i)), 1}}, 1);

    std::map<std::string, std::size_t> column;
    for (const auto& b : brackets)
        for (const auto& [w, c] : b)
            if (c != 0) column.emplace(w, column.size());
    if (column.empty()) return 0;
    RationalMatrix mat(brackets.size(), column.size());
    for (std::size_t r = 0; r < brackets.size(); ++r)
        for (const auto& [w, c] : brackets[r])
            if (c != 0) mat(r, column.at(w)) = Rational(c);
    return static_cast<int>(rank(mat));
}

bool criterion_gm(std::string& note) {
    for (int m = 2; m <= 6; ++m) {
        const auto g = build_unit_upper_triangular(m);
        if (g.dimension() != m * (m + 1) / 2 || g.step() != m || !validate(g).ok() || !is_type_star_basis(g).holds) {
            note = "G" + std::to_string(m);
            return false;
        }
    }
    note = "m = 2..6";
    return true;
}

bool criterion_free_dims(std::string& note) {
    const auto f33 = build_free_nilpotent(3, 3), f23 = build_free_nilpotent(2, 3);
    if (f33.layer_dim(3) != 8 || f23.layer_dims() != std::vector<int>{2, 1, 2}) return false;
    for (const auto* g : {&f33, &f23})
        for (int d = 1; d <= 3; ++d)
            if (free_lie_degree_dimension(g->rank(), d) != g->layer_dim(d) || witt_dimension(g->rank(), d) != g->layer_dim(d)) {
                note = g->name() + " layer " + std::to_string(d);
                return false;
            }
    note = "free(3,3) V3 = 8, free(2,3) = (2,1,2), bracket-word rank agrees";
    return true;
}

bool criterion_decomposition(std::string& note) {
    std::mt19937_64 rng(kSeed);
    const std::vector<StratifiedAlgebra> fleet{build_unit_upper_triangular(3), build_unit_upper_triangular(4),
                                               star_quotient(build_free_nilpotent(3, 3)).algebra};
    int total = 0;
    for (const auto& g : fleet)
        for (int t = 0; t < 100; ++t) {
            const BasisChange b(random_invertible_matrix(rng, g.rank()));
            for (int p = 1; p < g.rank(); ++p) {
                ++total;
                if (!decomposition_residual(g, b, star_decompose(g, b, p)).is_zero()) {
                    note = g.name() + " p=" + std::to_string(p + 1);
                    return false;
                }
            }
        }
    note = std::to_string(total) + " exact reconstructions over 3 algebras";
    return true;
}

bool criterion_chio(std::string& note) {
    std::mt19937_64 rng(kSeed + 1);
    int tried = 0;
    while (tried < 500) {
        const int m = 2 + tried % 5;
        const auto a = random_invertible_matrix(rng, m);
        if (a(0, 0).is_zero()) continue;
        ++tried;
        if (!chio_det_identity(a).equal) return false;
    }
    note = std::to_string(tried) + " matrices, m = 2..6";
    return true;
}

bool criterion_condition_i(std::string& note) {
    for (int m = 2; m <= 3; ++m) {
        const auto g = build_free_nilpotent(m, 3);
        if (!check_condition_i(g).holds) return false;
        const auto q = engel_quotient_from_condition_i(g);
        if (q.algebra.layer_dims() != std::vector<int>{2, 1, 1} || !is_filiform(q.algebra)) return false;
    }
    int star_members = 0;
    for (const auto& g : report_detail::star_fleet()) {
        if (g.step() < 3) continue;
        ++star_members;
        if (check_condition_i(g).holds) {
            note = "condition (i) holds on " + g.name();
            return false;
        }
    }
    note = "free(2,3), free(3,3) -> Engel; excluded on " + std::to_string(star_members) + " star algebras";
    return star_members > 0;
}

bool criterion_contrex(std::string& note) {
    const auto r = verify_contrex(3);
    note = "dim V3 = " + std::to_string(r.dim_v3) + " > " + std::to_string(v3_dimension_bound(3, true)) + ", " +
           std::to_string(r.families.size()) + " singular families";
    return r.ok() && r.dim_v3 == 3 && v3_dimension_bound(3, true) == 2 && r.families.size() == 9;
}

bool criterion_subalgebra(std::string& note) {
    const auto r = verify_remark_subalgebra();
    note = "Lie{X1+X2, X3} has dims (2,1,1)";
    return r.ok();
}

bool criterion_group(std::string& note) {
    ReportConfig cfg;
    cfg.seed = kSeed;
    Json a, b, c;
    const bool ok = report_detail::group_oracle(a, cfg, 100) == Verdict::Pass &&
                    report_detail::group_axioms(b, cfg, 100) == Verdict::Pass && report_detail::dilations(c, cfg) == Verdict::Pass;
    note = "100 oracle pairs per G2..G4, 100 triples per fleet algebra";
    return ok;
}

bool criterion_counterexample(std::string& note) {
    const auto fil = verify_counterexample(CounterexampleModel::Filiform, 2, 3);
    const bool fil_ok = fil.ok() && fil.weight == 3 && fil.gradient.size() == 2 && fil.gradient[0].is_zero() &&
                        fil.gradient[1] == parse_polynomial("x1^2 + x2^2");
    const auto fr = verify_counterexample(CounterexampleModel::Free, 2, 3);
    bool fr_ok = fr.ok() && fr.q && fr.q->definite() && fr.gradient.size() == 2 && fr.gradient[0].is_zero();
    note = "filiform grad = (0, " + fil.gradient.at(1).str() + "), free grad_2 = " + fr.gradient.at(1).str();
    return fil_ok && fr_ok;
}

bool criterion_negative_control(std::string& note) {
    Json j = to_json(build_unit_upper_triangular(3));
    j["name"] = "G3-tampered";
    j["brackets"][0]["terms"][0]["c"] = "2";
    const auto bad = algebra_from_json(j);
    const auto r = validate(bad);
    if (r.jacobi.ok || r.jacobi.witness.size() != 3) return false;
    ReportConfig cfg;
    cfg.seed = kSeed;
    cfg.extra_algebras.push_back(bad);
    const auto report = run_paper_report(cfg);
    note = "Jacobi witness: " + r.jacobi.detail;
    return !report.ok();
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "unit upper triangular family", 1.0, criterion_gm},
        {2, "free nilpotent dimensions", 5.0, criterion_free_dims},
        {3, "decomposition sweep", 60.0, criterion_decomposition},
        {4, "Chio identity", 10.0, criterion_chio},
        {5, "condition (i) round trip", 10.0, criterion_condition_i},
        {6, "three-generator quotient", 10.0, criterion_contrex},
        {7, "filiform subalgebra", 5.0, criterion_subalgebra},
        {8, "group law oracle", 60.0, criterion_group},
        {9, "counterexample gradients", 5.0, criterion_counterexample},
        {10, "negative control", 1.0, criterion_negative_control},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string note;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && secs > c.limit_seconds) {
            ok = false;
            note += " (too slow)";
        }
        failures += !ok;
        std::printf("%s criterion %d: %s [%.3fs / %.0fs] %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                    c.limit_seconds, note.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
