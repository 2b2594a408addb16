// carnot: command-line front end for the exact Carnot-group toolkit.
//
// Exit codes: 0 success or verdict reached, 1 a check failed,
// 2 usage or input error, 3 resource cap exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
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

constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;
constexpr int kResourceCap = 3;

struct Options {
    std::string format = "json";
    std::string config_file;
    std::string out_file;
    std::uint64_t seed = 2024;
    bool seed_set = false;
    std::vector<Rational> eps;
    DrawRange draws;
    int search_budget = 200;
    std::size_t dimension_cap = 2000;
    std::size_t term_cap = 200000;
};

// ---------------------------------------------------------------------------
// Output

void render_text(const Json& j, std::ostream& os, int indent);

std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "none";
    return j.dump();
}

bool all_scalars(const Json& j) {
    for (const auto& e : j)
        if (e.is_structured()) return false;
    return true;
}

void render_text(const Json& j, std::ostream& os, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_structured() && !(v.is_array() && all_scalars(v))) {
                os << pad << k << ":\n";
                render_text(v, os, indent + 2);
            } else if (v.is_array()) {
                os << pad << k << ": [";
                for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
                os << "]\n";
            } else {
                os << pad << k << ": " << scalar_text(v) << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (e.is_structured() && !(e.is_array() && all_scalars(e))) {
                os << pad << "-\n";
                render_text(e, os, indent + 2);
            } else if (e.is_array()) {
                os << pad << "- [";
                for (std::size_t i = 0; i < e.size(); ++i) os << (i ? ", " : "") << scalar_text(e[i]);
                os << "]\n";
            } else {
                os << pad << "- " << scalar_text(e) << "\n";
            }
        }
    } else {
        os << pad << scalar_text(j) << "\n";
    }
}

void emit(const Json& j, const Options& opt) {
    std::ostringstream os;
    if (opt.format == "text")
        render_text(j, os, 0);
    else
        os << j.dump(2) << "\n";
    if (opt.out_file.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream out(opt.out_file);
        if (!out) throw InputError("cannot write '" + opt.out_file + "'");
        out << os.str();
    }
}

// ---------------------------------------------------------------------------
// Input helpers

void load_config(Options& opt) {
    if (opt.config_file.empty()) return;
    const Json c = read_json_file(opt.config_file);
    try {
        if (c.contains("seed") && !opt.seed_set) opt.seed = c.at("seed").get<std::uint64_t>();
        if (c.contains("eps") && opt.eps.empty())
            for (const auto& e : c.at("eps")) opt.eps.push_back(rational_from_json(e));
        if (c.contains("search_budget")) opt.search_budget = c.at("search_budget").get<int>();
        if (c.contains("dimension_cap")) opt.dimension_cap = c.at("dimension_cap").get<std::size_t>();
        if (c.contains("term_cap")) opt.term_cap = c.at("term_cap").get<std::size_t>();
        if (c.contains("numerator_range")) {
            auto r = c.at("numerator_range").get<std::vector<int>>();
            if (r.size() != 2) throw InputError("numerator_range needs two integers");
            opt.draws.num_lo = r[0];
            opt.draws.num_hi = r[1];
        }
        if (c.contains("denominator_range")) {
            auto r = c.at("denominator_range").get<std::vector<int>>();
            if (r.size() != 2) throw InputError("denominator_range needs two integers");
            opt.draws.den_lo = r[0];
            opt.draws.den_hi = r[1];
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed config: ") + e.what());
    }
    opt.draws.check();
}

StratifiedAlgebra load_algebra(const std::string& path, bool require_valid = true) {
    StratifiedAlgebra g = algebra_from_json(read_json_file(path));
    if (require_valid) {
        const auto r = validate(g);
        if (!r.ok()) throw InputError("algebra '" + g.name() + "' fails validation; run 'carnot validate' for the witness");
    }
    return g;
}

/// A file holding a JSON matrix, or inline rows "1,0;0,1".
RationalMatrix load_matrix(const std::string& arg) {
    if (std::filesystem::exists(arg)) {
        Json j = read_json_file(arg);
        if (j.is_object() && j.contains("matrix")) j = j.at("matrix");
        return matrix_from_json(j);
    }
    std::vector<std::vector<Rational>> rows;
    std::stringstream ss(arg);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_rational_list(row));
    if (rows.empty()) throw InputError("empty matrix");
    RationalMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw InputError("matrix rows must have equal length");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

std::optional<BasisChange> load_basis(const std::string& arg) {
    if (arg.empty()) return std::nullopt;
    return BasisChange(load_matrix(arg));
}

Json pair_json(const StratifiedAlgebra& g, std::pair<int, int> ji) {
    auto [j, i] = ji;
    return {{"j", j + 1}, {"i", i + 1}, {"commutator", "[Y" + std::to_string(j + 1) + ",[Y" + std::to_string(j + 1) + ",Y" +
                                                         std::to_string(i + 1) + "]]"},
            {"reference_labels", {g.label(j), g.label(i)}}};
}

// Jacobi and grading witnesses are basis indices; generation witnesses are layers.
Json outcome_json(const StratifiedAlgebra& g, const CheckOutcome& c, bool layers = false) {
    Json j{{"ok", c.ok}};
    if (!c.ok) {
        if (layers) {
            j["witness_layers"] = c.witness;
        } else {
            Json w = Json::array();
            for (int i : c.witness) w.push_back(g.label(i));
            j["witness"] = w;
        }
        j["detail"] = c.detail;
    }
    return j;
}

Json quotient_json(const Quotient& q) {
    Json images = Json::array();
    for (int i = 0; i < static_cast<int>(q.projection.source_dimension()); ++i) images.push_back(to_json(q.projection.image(i)));
    return {{"algebra", to_json(q.algebra)}, {"projection", images}};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_build(const Options& opt, const std::string& kind, int m, int step, const std::string& b) {
    StratifiedAlgebra g = [&]() -> StratifiedAlgebra {
        if (kind == "free") return build_free_nilpotent(m, step, opt.dimension_cap);
        if (kind == "gm") return build_unit_upper_triangular(m);
        if (kind == "heisenberg") return build_heisenberg();
        if (kind == "engel") return build_engel();
        if (kind == "filiform") return build_filiform_model(step);
        if (kind == "abelian") return build_abelian(m);
        if (kind == "example2") return build_example2_algebra(Rational::parse(b));
        if (kind == "star-quotient") return star_quotient(build_free_nilpotent(m, step, opt.dimension_cap)).algebra;
        if (kind == "contrex") return contrex_quotient(step).algebra;
        if (std::filesystem::exists(kind)) return load_algebra(kind, false);
        throw InputError("unknown algebra kind '" + kind + "'");
    }();
    emit(to_json(g), opt);
    return 0;
}

int cmd_validate(const Options& opt, const std::string& file) {
    const auto g = load_algebra(file, false);
    const auto r = validate(g);
    emit({{"algebra", g.name()},
          {"layer_dims", g.layer_dims()},
          {"valid", r.ok()},
          {"grading", outcome_json(g, r.grading)},
          {"jacobi", outcome_json(g, r.jacobi)},
          {"generation", outcome_json(g, r.generation, true)}},
         opt);
    return r.ok() ? 0 : kCheckFailed;
}

int cmd_check_star(const Options& opt, const std::string& file, const std::string& basis, int budget) {
    const auto g = load_algebra(file);
    const auto c = classify_star(g, load_basis(basis), budget, opt.seed, opt.draws);
    Json j{{"algebra", g.name()},
           {"verdict", to_string(c.verdict)},
           {"dim_V3", c.dim_v3},
           {"star_bound_V3", c.v3_bound}};
    if (c.failing) j["failing_pair"] = pair_json(g, *c.failing);
    if (c.basis) j["basis"] = to_json(c.basis->matrix());
    emit(j, opt);
    return 0;
}

int cmd_decompose(const Options& opt, const std::string& file, const std::string& basis, int p) {
    const auto g = load_algebra(file);
    const auto b = load_basis(basis.empty() ? "" : basis);
    const BasisChange change = b ? *b : BasisChange::identity(g.rank());
    const auto d = star_decompose(g, change, p - 1);
    auto terms = [](const std::map<CommutatorKey, Rational>& m) {
        Json a = Json::array();
        for (const auto& [k, c] : m) a.push_back({{"commutator", k.str()}, {"coefficient", c.str()}});
        return a;
    };
    std::vector<int> perm;
    for (int i : d.permutation) perm.push_back(i + 1);
    emit({{"algebra", g.name()},
          {"p", p},
          {"target", CommutatorKey{0, 0, p - 1}.str()},
          {"row_order", perm},
          {"alpha", terms(d.alpha)},
          {"beta", terms(d.beta)},
          {"reconstruction_exact", decomposition_residual(g, change, d).is_zero()}},
         opt);
    return 0;
}

int cmd_chio(const Options& opt, const std::string& matrix) {
    const auto r = chio_det_identity(load_matrix(matrix));
    emit({{"M", to_json(r.condensed)}, {"det_M", r.det_condensed.str()}, {"a11_pow_det_A", r.rhs.str()}, {"equal", r.equal}}, opt);
    return r.equal ? 0 : kCheckFailed;
}

int cmd_condition_i(const Options& opt, const std::string& file, const std::string& basis) {
    const auto g = load_algebra(file);
    const auto r = check_condition_i(g, load_basis(basis));
    emit({{"algebra", g.name()}, {"holds", r.holds}, {"rank_without_distinguished", r.rank_without}, {"dim_V3", r.dim_v3}}, opt);
    return 0;
}

int cmd_engel_quotient(const Options& opt, const std::string& file, const std::string& basis) {
    const auto g = load_algebra(file);
    const auto q = engel_quotient_from_condition_i(g, load_basis(basis));
    Json j = quotient_json(q);
    j["is_engel"] = is_engel(q.algebra);
    emit(j, opt);
    return 0;
}

int cmd_quotient(const Options& opt, const std::string& file, const std::string& ideal_file, const std::string& name) {
    const auto g = load_algebra(file);
    const Json ideal = read_json_file(ideal_file);
    if (!ideal.is_array()) throw InputError("ideal file must hold an array of vectors");
    std::vector<AlgebraVector> gens;
    for (const auto& v : ideal) {
        gens.push_back(vector_from_json(v));
        g.check_vector(gens.back());
    }
    const auto closure = ideal_closure(g, gens);
    const auto q = quotient(g, closure, name.empty() ? g.name() + "/I" : name);
    Json j = quotient_json(q);
    std::vector<int> dims;
    for (int l = 1; l <= g.step(); ++l) dims.push_back(closure.dimension_in_layer(l));
    j["ideal_dims"] = dims;
    emit(j, opt);
    return 0;
}

GroupPoint parse_point(const StratifiedAlgebra& g, const std::string& text) {
    GroupPoint p = parse_rational_list(text);
    check_point(g, p);
    return p;
}

int cmd_group(const Options& opt, const std::string& op, const std::vector<std::string>& args) {
    if (args.empty()) throw InputError("group commands need an algebra file");
    const auto g = load_algebra(args[0]);
    auto need = [&](std::size_t n) {
        if (args.size() != n + 1) throw InputError("'group " + op + "' takes " + std::to_string(n) + " argument(s) after the algebra");
    };
    Json j{{"op", op}, {"algebra", g.name()}};
    if (op == "q") {
        need(0);
        j["Q"] = homogeneous_dimension(g);
        j["result"] = std::to_string(homogeneous_dimension(g));
    } else if (op == "law") {
        need(0);
        j = to_json(derive_group_law(g, opt.term_cap));
    } else if (op == "inv") {
        need(1);
        j["result"] = join_rationals(group_inverse(parse_point(g, args[1])));
    } else if (op == "mul") {
        need(2);
        const auto law = derive_group_law(g, opt.term_cap);
        j["result"] = join_rationals(multiply(law, parse_point(g, args[1]), parse_point(g, args[2])));
    } else if (op == "dilate") {
        need(2);
        j["lambda"] = args[1];
        j["result"] = join_rationals(dilate(g, Rational::parse(args[1]), parse_point(g, args[2])));
    } else if (op == "dinf") {
        if (args.size() != 2 && args.size() != 3) throw InputError("'group dinf' takes one or two points");
        const auto law = derive_group_law(g, opt.term_cap);
        const GroupPoint y = args.size() == 3 ? parse_point(g, args[2]) : GroupPoint(static_cast<std::size_t>(g.dimension()));
        const auto d = d_infinity(law, opt.eps, parse_point(g, args[1]), y);
        std::ostringstream value;
        value.precision(17);
        value << d.value;
        j["result"] = value.str();
        j["exact"] = d.exact ? Json(d.exact->str()) : Json(nullptr);
        j["form"] = d.exact_form;
        j["eps"] = rationals_to_json(d.eps);
        j["squared_layer_norms"] = rationals_to_json(d.squared_norms);
    } else {
        throw InputError("unknown group operation '" + op + "'");
    }
    emit(j, opt);
    return 0;
}

std::vector<PolyVectorField> chart_fields(const Options& opt, const std::string& file, int filiform, bool horizontal_only,
                                          std::vector<int>& weights) {
    if (filiform > 0) {
        weights = coordinate_weights(build_filiform_model(filiform));
        return paper_filiform_fields(filiform);
    }
    if (file.empty()) throw InputError("give an algebra file or --filiform K");
    const auto g = load_algebra(file);
    weights = coordinate_weights(g);
    auto fields = left_invariant_fields(derive_group_law(g, opt.term_cap));
    if (horizontal_only) fields.resize(static_cast<std::size_t>(g.rank()));
    return fields;
}

int cmd_fields(const Options& opt, const std::string& file, int filiform) {
    std::vector<int> weights;
    const auto fields = chart_fields(opt, file, filiform, false, weights);
    Json a = Json::array();
    for (std::size_t i = 0; i < fields.size(); ++i)
        a.push_back({{"field", "X" + std::to_string(i + 1)}, {"text", fields[i].str()}, {"terms", to_json(fields[i])}});
    emit({{"chart", filiform > 0 ? "filiform(" + std::to_string(filiform) + ")" : "exponential"}, {"fields", a}}, opt);
    return 0;
}

int cmd_gradient(const Options& opt, const std::string& file, int filiform, const std::string& f_text, const std::string& at) {
    std::vector<int> weights;
    const auto fields = chart_fields(opt, file, filiform, true, weights);
    const Polynomial f = parse_polynomial(f_text);
    Json grad = Json::array();
    for (const auto& g : horizontal_gradient(fields, f)) grad.push_back(g.str());
    const auto w = check_delta_homogeneity(weights, f);
    Json j{{"f", f.str()}, {"weight", w ? Json(*w) : Json(nullptr)}, {"horizontal_gradient", grad}};
    if (!at.empty()) {
        auto x = parse_rational_list(at);
        if (x.size() != weights.size()) throw InputError("point has the wrong number of coordinates");
        const auto n = levelset_intrinsic_normal(fields, f, x);
        Json normal = Json::array();
        for (double v : n.normal) normal.push_back(v);
        j["at"] = join_rationals(x);
        j["characteristic"] = n.characteristic;
        j["gradient_at"] = rationals_to_json(n.gradient);
        j["normal"] = normal;
        if (n.exact) j["normal_exact"] = rationals_to_json(*n.exact);
    }
    emit(j, opt);
    return 0;
}

int cmd_counterexample(const Options& opt, const std::string& model, int m, int step) {
    CounterexampleModel mdl;
    if (model == "filiform")
        mdl = CounterexampleModel::Filiform;
    else if (model == "free")
        mdl = CounterexampleModel::Free;
    else
        throw InputError("model must be 'filiform' or 'free'");
    const auto r = verify_counterexample(mdl, m, step);
    emit(to_json(r), opt);
    return r.ok() ? 0 : kCheckFailed;
}

int cmd_verify_paper(const Options& opt, const std::vector<std::string>& extra) {
    ReportConfig cfg;
    cfg.seed = opt.seed;
    cfg.eps = opt.eps;
    cfg.draws = opt.draws;
    cfg.search_budget = opt.search_budget;
    for (const auto& file : extra) cfg.extra_algebras.push_back(load_algebra(file, false));
    const auto report = run_paper_report(cfg);
    if (opt.format == "text") {
        std::ostringstream os;
        for (const auto& c : report.checks) os << (c.verdict == Verdict::Pass ? "PASS " : c.verdict == Verdict::Fail ? "FAIL " : "???? ") << c.id << ": " << c.anchor << "\n";
        os << "\n";
        render_text(to_json(report), os, 0);
        if (opt.out_file.empty())
            std::cout << os.str();
        else
            std::ofstream(opt.out_file) << os.str();
    } else {
        emit(to_json(report), opt);
    }
    return report.ok() ? 0 : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations on stratified Lie algebras and Carnot groups"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--config", opt.config_file, "JSON config: seed, eps, search_budget, caps, random entry ranges");
    std::string eps_text;
    app.add_option("--eps", eps_text, "eps_2,eps_3,... for d_infinity (default 1/2 each)");
    app.add_option("-o,--out", opt.out_file, "Write output to a file instead of stdout");
    auto* seed_opt = app.add_option("--seed", opt.seed, "Random seed");

    std::string kind, b = "1", file, basis, matrix, ideal, name, f_text, at, model = "filiform", op;
    int m = 2, step = 3, budget = 0, p = 2, filiform = 0;
    std::vector<std::string> group_args, extra;

    auto* build = app.add_subcommand("build", "Emit algebra JSON");
    build->add_option("kind", kind, "free | gm | heisenberg | engel | filiform | abelian | example2 | star-quotient | contrex")
        ->required();
    build->add_option("--m", m, "Generators (free, gm, abelian, star-quotient)");
    build->add_option("--step", step, "Step (free, filiform, star-quotient, contrex)");
    build->add_option("--b", b, "Deformation parameter of example2");
    build->add_option("--cap", opt.dimension_cap, "Dimension cap for free algebras");

    auto* val = app.add_subcommand("validate", "Check Jacobi, grading and generation");
    val->add_option("algebra", file)->required();

    auto* star = app.add_subcommand("check-star", "Decide type star where possible");
    star->add_option("algebra", file)->required();
    star->add_option("--basis", basis, "Basis change (file or rows '1,0;0,1')");
    star->add_option("--search", budget, "Random basis changes to try");

    auto* dec = app.add_subcommand("decompose", "Write [Y1,[Y1,Yp]] through the other commutators");
    dec->add_option("algebra", file)->required();
    dec->add_option("--basis", basis, "New basis Y = B X (file or rows)")->required();
    dec->add_option("--p", p, "Target index, 2..m")->required();

    auto* chio = app.add_subcommand("chio", "Chio condensation determinant identity");
    chio->add_option("matrix", matrix, "Matrix file or rows '1,2;3,4'")->required();

    auto* ci = app.add_subcommand("condition-i", "Independence of [Y1,[Y1,Y2]] from the other commutators");
    ci->add_option("algebra", file)->required();
    ci->add_option("--basis", basis);

    auto* eq = app.add_subcommand("engel-quotient", "Project onto the Engel algebra when condition (i) holds");
    eq->add_option("algebra", file)->required();
    eq->add_option("--basis", basis);

    auto* quo = app.add_subcommand("quotient", "Quotient by the ideal generated by homogeneous vectors");
    quo->add_option("algebra", file)->required();
    quo->add_option("--ideal", ideal, "JSON array of vectors [{k, c}, ...]")->required();
    quo->add_option("--name", name);

    auto* grp = app.add_subcommand("group", "Group operations in exponential coordinates");
    grp->add_option("op", op, "mul | inv | dilate | dinf | q | law")->required();
    grp->add_option("args", group_args, "Algebra file followed by points or lambda")->required();

    auto* fld = app.add_subcommand("fields", "Left-invariant vector fields");
    fld->add_option("algebra", file);
    fld->add_option("--filiform", filiform, "Use the fixed filiform chart of step K instead");

    auto* grad = app.add_subcommand("gradient", "Horizontal gradient of a polynomial");
    grad->add_option("algebra", file);
    grad->add_option("--filiform", filiform, "Use the fixed filiform chart of step K");
    grad->add_option("--f", f_text, "Polynomial such as 'x2^3/3 + 2*x4'")->required();
    grad->add_option("--at", at, "Point on {f = 0} for the intrinsic normal");

    auto* cx = app.add_subcommand("counterexample", "Blow-up counterexample report");
    cx->add_option("--model", model, "filiform | free");
    cx->add_option("--m", m);
    cx->add_option("--step", step);

    auto* vp = app.add_subcommand("verify-paper", "Run every check and report");
    vp->add_option("--extra-algebra", extra, "Additional algebra files to validate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kInputError;
    }

    try {
        opt.seed_set = seed_opt->count() > 0;
        if (!eps_text.empty()) opt.eps = parse_rational_list(eps_text);
        load_config(opt);
        if (*build) return cmd_build(opt, kind, m, step, b);
        if (*val) return cmd_validate(opt, file);
        if (*star) return cmd_check_star(opt, file, basis, budget);
        if (*dec) return cmd_decompose(opt, file, basis, p);
        if (*chio) return cmd_chio(opt, matrix);
        if (*ci) return cmd_condition_i(opt, file, basis);
        if (*eq) return cmd_engel_quotient(opt, file, basis);
        if (*quo) return cmd_quotient(opt, file, ideal, name);
        if (*grp) return cmd_group(opt, op, group_args);
        if (*fld) return cmd_fields(opt, file, filiform);
        if (*grad) return cmd_gradient(opt, file, filiform, f_text, at);
        if (*cx) return cmd_counterexample(opt, model, m, step);
        if (*vp) return cmd_verify_paper(opt, extra);
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResourceCap;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
