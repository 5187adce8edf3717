#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "closure.hpp"
#include "copies.hpp"
#include "errors.hpp"
#include "invariants.hpp"
#include "lie_algebra.hpp"
#include "parsing.hpp"

namespace casimir {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

inline long long integer_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number_integer()) throw ParseError(where + ": \"" + key + "\" must be an integer");
    return v.get<long long>();
}

inline std::string string_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) throw ParseError(where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

// Numbers or strings such as "-3/4".
inline Rational rational_value(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) {
        try {
            return Rational(v.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw ParseError(where + ": expected an integer or a rational string");
}

}  // namespace detail

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// {"name", "dim", "brackets": [{"i", "j", "terms": [{"k", "num", "den"}]}]}
inline std::vector<BracketEntry> bracket_entries_from_json(const json& doc) {
    const json& br = detail::field(doc, "brackets", "algebra");
    if (!br.is_array()) throw ParseError("algebra: \"brackets\" must be an array");
    std::vector<BracketEntry> entries;
    for (const auto& b : br) {
        std::string where = "bracket entry";
        BracketEntry e{static_cast<int>(detail::integer_field(b, "i", where)),
                       static_cast<int>(detail::integer_field(b, "j", where)),
                       {}};
        const json& terms = detail::field(b, "terms", where);
        if (!terms.is_array()) throw ParseError(where + ": \"terms\" must be an array");
        for (const auto& t : terms) {
            long long k = detail::integer_field(t, "k", "bracket term");
            long long num = detail::integer_field(t, "num", "bracket term");
            long long den = t.contains("den") ? detail::integer_field(t, "den", "bracket term") : 1;
            if (den == 0) throw ParseError("bracket term: zero denominator");
            e.terms.push_back({static_cast<int>(k), Rational(num, den)});
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

inline LieAlgebra algebra_from_json(const json& doc, bool check_jacobi = true) {
    std::string name = detail::string_field(doc, "name", "algebra");
    long long dim = detail::integer_field(doc, "dim", "algebra");
    if (dim < 1 || dim > kMaxGenerators) throw ValidationError("algebra: dimension out of range");
    auto entries = bracket_entries_from_json(doc);
    return check_jacobi ? LieAlgebra::make(name, static_cast<int>(dim), entries)
                        : LieAlgebra::unchecked(name, static_cast<int>(dim), entries);
}

inline json algebra_to_json(const LieAlgebra& L) {
    json br = json::array();
    for (const auto& e : L.entries()) {
        json terms = json::array();
        for (const auto& t : e.terms) {
            if (!t.c.numerator().fits_slong_p() || !t.c.denominator().fits_slong_p())
                throw ValidationError("structure constant too large for the algebra document");
            terms.push_back({{"k", t.k}, {"num", t.c.numerator().get_si()}, {"den", t.c.denominator().get_si()}});
        }
        br.push_back({{"i", e.i}, {"j", e.j}, {"terms", terms}});
    }
    return {{"name", L.name()}, {"dim", L.dim()}, {"brackets", br}};
}

inline LieAlgebra load_algebra(const std::string& path, bool check_jacobi = true) {
    return algebra_from_json(read_json_file(path), check_jacobi);
}

// A catalog name or an inline algebra document.
inline LieAlgebra algebra_reference(const json& v) {
    if (v.is_string()) return catalog_algebra(v.get<std::string>());
    return algebra_from_json(v);
}

namespace detail {

inline std::map<int, std::string> indexed_texts(const json& obj, int dim, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + " must map generator indices to expressions");
    std::map<int, std::string> out;
    for (const auto& [key, val] : obj.items()) {
        int idx;
        try {
            std::size_t used = 0;
            idx = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad generator index \"" + key + "\"");
        }
        if (idx < 1 || idx > dim) throw ValidationError(where + ": generator index " + key + " out of range");
        if (!val.is_string()) throw ParseError(where + ": expression for " + key + " must be a string");
        out[idx] = val.get<std::string>();
    }
    return out;
}

inline std::vector<std::string> string_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& s : v) {
        if (!s.is_string()) throw ParseError(where + " must be an array of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

}  // namespace detail

// Classical realization X_i -> rho_i over canonical pairs, optionally at
// several rational parameter points.
struct RealizationSpec {
    LieAlgebra algebra;
    std::vector<std::string> variables;
    std::vector<std::pair<int, int>> pairs;  // (position, momentum) variable indices
    std::map<int, std::string> assignment;   // missing indices map to 0
    std::vector<std::map<std::string, Rational>> parameter_sets;

    std::vector<CommPoly> images(const std::map<std::string, Rational>& params) const {
        std::vector<CommPoly> rho;
        for (int i = 1; i <= algebra.dim(); ++i) {
            auto it = assignment.find(i);
            rho.push_back(it == assignment.end() ? CommPoly(variables) : parse_commpoly(variables, it->second, params));
        }
        return rho;
    }
};

inline RealizationSpec realization_from_json(const json& doc) {
    RealizationSpec spec;
    spec.algebra = algebra_reference(detail::field(doc, "algebra", "realization"));
    spec.variables = detail::string_list(detail::field(doc, "variables", "realization"), "realization variables");
    auto index_of = [&](const json& name) {
        if (!name.is_string()) throw ParseError("realization pairs must name variables");
        for (std::size_t v = 0; v < spec.variables.size(); ++v)
            if (spec.variables[v] == name.get<std::string>()) return static_cast<int>(v);
        throw ParseError("realization pair names undeclared variable " + name.dump());
    };
    std::set<int> used;
    for (const auto& p : detail::field(doc, "pairs", "realization")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("realization pairs must be [position, momentum]");
        int q = index_of(p[0]), m = index_of(p[1]);
        if (!used.insert(q).second || !used.insert(m).second) throw ValidationError("realization pairs overlap");
        spec.pairs.emplace_back(q, m);
    }
    spec.assignment = detail::indexed_texts(detail::field(doc, "assignment", "realization"), spec.algebra.dim(),
                                            "realization assignment");
    if (doc.contains("parameters")) {
        const json& ps = doc.at("parameters");
        auto one = [&](const json& set) {
            if (!set.is_object()) throw ParseError("realization parameters must be objects");
            std::map<std::string, Rational> m;
            for (const auto& [k, v] : set.items()) {
                if (std::find(spec.variables.begin(), spec.variables.end(), k) != spec.variables.end())
                    throw ValidationError("parameter " + k + " is also a variable");
                m[k] = detail::rational_value(v, "parameter " + k);
            }
            return m;
        };
        if (ps.is_array())
            for (const auto& set : ps) spec.parameter_sets.push_back(one(set));
        else
            spec.parameter_sets.push_back(one(ps));
    }
    if (spec.parameter_sets.empty()) spec.parameter_sets.emplace_back();
    return spec;
}

// Levi factor images inside U(g) up to a central scale, with the Levi
// Casimir pattern used for the intermediate Casimirs.
struct VirtualCopySpec {
    LieAlgebra algebra;
    LieAlgebra levi;
    std::map<int, std::string> defs;
    std::string scale;
    std::string pattern;  // commutative, in x1..x(levi dim)
    std::string target;   // optional Casimir of the full algebra, operator form
};

inline VirtualCopySpec virtual_copy_from_json(const json& doc) {
    VirtualCopySpec spec;
    spec.algebra = algebra_reference(detail::field(doc, "algebra", "virtual copy"));
    const json& levi = detail::field(doc, "levi", "virtual copy");
    spec.levi = algebra_reference(levi);
    spec.defs = detail::indexed_texts(detail::field(doc, "defs", "virtual copy"), spec.levi.dim(), "virtual copy defs");
    if (static_cast<int>(spec.defs.size()) != spec.levi.dim()) throw ValidationError("virtual copy defs must cover every Levi generator");
    spec.scale = doc.contains("scale") ? detail::string_field(doc, "scale", "virtual copy") : "1";
    if (doc.contains("pattern")) {
        spec.pattern = detail::string_field(doc, "pattern", "virtual copy");
    } else if (levi.is_string() && !catalog_entry(levi.get<std::string>()).casimirs.empty()) {
        spec.pattern = catalog_entry(levi.get<std::string>()).casimirs.front().pattern;
    } else {
        throw ParseError("virtual copy: missing \"pattern\"");
    }
    if (doc.contains("target")) spec.target = detail::string_field(doc, "target", "virtual copy");
    return spec;
}

inline VirtualCopy build_virtual_copy(const Uea& U1, const VirtualCopySpec& spec) {
    std::vector<NCPoly> defs;
    for (const auto& [i, text] : spec.defs) defs.push_back(parse_ncpoly(U1, text));
    return virtual_copy(U1, spec.levi, defs, parse_ncpoly(U1, spec.scale));
}

// Result of re-expanding a serialized closure report through a fresh engine.
struct RevalidationResult {
    int relations_checked = 0;
    int expressions_checked = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

namespace detail {

inline CommPoly coefficient_from_json(const json& c, const std::vector<std::string>& symbols) {
    CommPoly p(symbols);
    for (const auto& t : field(c, "terms", "coefficient")) {
        auto e = t.at("exponents").get<Exponents>();
        if (e.size() != symbols.size()) throw ParseError("coefficient exponent length does not match the central ring");
        p.add_term(e, Rational(t.at("coefficient").get<std::string>()));
    }
    return p;
}

// "[A,B]" with A and B nested labels.
inline std::pair<std::string, std::string> split_pair_label(const std::string& s) {
    if (s.size() < 5 || s.front() != '[' || s.back() != ']') throw ParseError("bad commutator label: " + s);
    int depth = 0;
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        char ch = s[k];
        if (ch == '(' || ch == '{') ++depth;
        if (ch == ')' || ch == '}') --depth;
        if (ch == ',' && depth == 0) return {s.substr(1, k - 1), s.substr(k + 1, s.size() - k - 2)};
    }
    throw ParseError("bad commutator label: " + s);
}

}  // namespace detail

// Every relation must expand to zero and every expression to an identity,
// with labels resolved by the engine and coefficients by its central ring.
inline RevalidationResult revalidate_report(const json& report, const ClosureEngine& engine) {
    const Uea& U = engine.uea();
    const CentralRing& ring = engine.ring();
    auto element = [&](const std::string& label) -> NCPoly {
        for (int i = 0; i < ring.size(); ++i)
            if (ring.symbols[i] == label) return ring.values[i];
        return engine.value_of(NestedLabel::parse(label));
    };
    RevalidationResult out;
    for (const auto& r : report.at("relations")) {
        NCPoly sum;
        for (const auto& t : r.at("terms"))
            sum += U.multiply(ring.evaluate(U, detail::coefficient_from_json(t.at("coefficient"), ring.symbols)),
                              element(t.at("label").get<std::string>()));
        ++out.relations_checked;
        if (!sum.is_zero()) out.failures.push_back("relation " + r.dump());
    }
    for (const auto& e : report.at("expressions")) {
        std::string lhs = e.at("lhs_label").get<std::string>();
        auto [a, b] = detail::split_pair_label(lhs);
        NCPoly left = U.multiply(ring.evaluate(U, detail::coefficient_from_json(e.at("multiplier"), ring.symbols)),
                                 U.commutator(element(a), element(b)));
        NCPoly right;
        for (const auto& t : e.at("rhs_terms")) {
            NCPoly prod = ring.evaluate(U, detail::coefficient_from_json(t.at("coefficient"), ring.symbols));
            for (const auto& f : t.at("factors")) prod = U.multiply(prod, element(f.get<std::string>()));
            right += prod;
        }
        ++out.expressions_checked;
        if (left != right) out.failures.push_back("expression " + lhs);
    }
    return out;
}

}  // namespace casimir
