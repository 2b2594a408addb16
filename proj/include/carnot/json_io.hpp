#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/matrix.hpp"
#include "carnot/rational.hpp"

namespace carnot {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw InputError("expected a rational string such as \"3/4\"");
}

inline Json to_json(const AlgebraVector& v) {
    Json terms = Json::array();
    for (const auto& [k, c] : v) terms.push_back({{"k", k}, {"c", c.str()}});
    return terms;
}

inline AlgebraVector vector_from_json(const Json& terms) {
    if (!terms.is_array()) throw InputError("vector must be an array of {k, c} terms");
    AlgebraVector v;
    for (const auto& t : terms) {
        if (!t.is_object() || !t.contains("k") || !t.contains("c"))
            throw InputError("vector term must be an object with 'k' and 'c'");
        v.add(t.at("k").get<int>(), rational_from_json(t.at("c")));
    }
    return v;
}

inline Json to_json(const StratifiedAlgebra& g) {
    Json labels = Json::array();
    for (const auto& b : g.basis()) labels.push_back(b.label);
    Json brackets = Json::array();
    g.constants().for_each([&](int i, int j, const AlgebraVector& v) {
        brackets.push_back({{"i", i}, {"j", j}, {"terms", to_json(v)}});
    });
    return Json{{"name", g.name()}, {"layer_dims", g.layer_dims()}, {"basis_labels", labels}, {"brackets", brackets}};
}

inline StratifiedAlgebra algebra_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw InputError("algebra JSON must be an object");
        const auto name = j.value("name", std::string("unnamed"));
        const auto dims = j.at("layer_dims").get<std::vector<int>>();
        const auto labels = j.at("basis_labels").get<std::vector<std::string>>();
        StructureConstants sc(static_cast<int>(labels.size()));
        for (const auto& entry : j.at("brackets")) {
            const int a = entry.at("i").get<int>();
            const int b = entry.at("j").get<int>();
            if (a >= b) throw InputError("bracket entries require i < j");
            if (sc.find(a, b)) throw InputError("duplicate bracket entry");
            sc.set(a, b, vector_from_json(entry.at("terms")));
        }
        return StratifiedAlgebra(name, dims, labels, std::move(sc));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed algebra JSON: ") + e.what());
    }
}

inline Json to_json(const RationalMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline RationalMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
    const std::size_t cols = j.front().size();
    RationalMatrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational_from_json(j[r][c]);
    }
    return m;
}

inline Json rationals_to_json(const std::vector<Rational>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(x.str());
    return a;
}

/// Parses "1,0,1/2" into rationals.
inline std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        out.push_back(Rational::parse(item));
    }
    return out;
}

inline std::string join_rationals(const std::vector<Rational>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i].str();
    return s;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace carnot
