#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "comm_poly.hpp"
#include "expr_parser.hpp"
#include "uea.hpp"

namespace casimir {

// Words in generators X<i> or X<i>^[copy]; extra names resolve through `aliases`.
struct NCPolyOps {
    using Value = NCPoly;
    const Uea& uea;
    int default_copy = 1;
    std::map<std::string, NCPoly> aliases{};

    Value number(const Rational& r) { return NCPoly::constant(r); }
    Value symbol(const std::string& name, int copy) {
        auto it = aliases.find(name);
        if (it != aliases.end() && copy == 0) return it->second;
        if (name.size() >= 2 && name[0] == 'X' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
            int idx = std::stoi(name.substr(1));
            int c = copy ? copy : default_copy;
            if (idx < 1 || idx > uea.dim() || c < 1 || c > uea.copies())
                throw ParseError("generator out of range: " + name);
            return uea.generator(idx, c);
        }
        throw ParseError("unknown symbol: " + name);
    }
    Value add(const Value& a, const Value& b) { return a + b; }
    Value mul(const Value& a, const Value& b) { return uea.multiply(a, b); }
    Value scale(const Value& a, const Rational& r) { return a * r; }
    Value pow(const Value& a, int e) { return uea.power(a, e); }
    std::optional<Rational> as_constant(const Value& v) {
        if (v.is_zero()) return Rational();
        if (v.size() == 1 && v.terms()[0].first.is_one()) return v.terms()[0].second;
        return std::nullopt;
    }
};

struct CommPolyOps {
    using Value = CommPoly;
    std::vector<std::string> vars;
    std::map<std::string, Rational> parameters{};  // names read as fixed constants

    Value number(const Rational& r) { return CommPoly::constant(vars, r); }
    Value symbol(const std::string& name, int copy) {
        if (copy) throw ParseError("copy tags are not allowed in commutative expressions");
        if (auto it = parameters.find(name); it != parameters.end()) return CommPoly::constant(vars, it->second);
        for (int i = 0; i < static_cast<int>(vars.size()); ++i)
            if (vars[i] == name) return CommPoly::variable(vars, i);
        throw ParseError("undeclared variable: " + name);
    }
    Value add(const Value& a, const Value& b) { return a + b; }
    Value mul(const Value& a, const Value& b) { return a * b; }
    Value scale(const Value& a, const Rational& r) { return a * r; }
    Value pow(const Value& a, int e) {
        if (e < 0) throw ParseError("negative powers are not allowed in commutative expressions");
        return a.pow(e);
    }
    std::optional<Rational> as_constant(const Value& v) {
        if (v.is_zero()) return Rational();
        if (v.size() == 1 && exponents_degree(v.terms().begin()->first) == 0) return v.terms().begin()->second;
        return std::nullopt;
    }
};

inline NCPoly parse_ncpoly(const Uea& uea, const std::string& text, int default_copy = 1,
                           std::map<std::string, NCPoly> aliases = {}) {
    NCPolyOps ops{uea, default_copy, std::move(aliases)};
    return parse_expression(text, ops);
}

inline CommPoly parse_commpoly(const std::vector<std::string>& vars, const std::string& text,
                               std::map<std::string, Rational> parameters = {}) {
    CommPolyOps ops{vars, std::move(parameters)};
    return parse_expression(text, ops);
}

inline std::vector<std::string> coordinate_names(int d, const std::string& stem = "x") {
    std::vector<std::string> v;
    for (int i = 1; i <= d; ++i) v.push_back(stem + std::to_string(i));
    return v;
}

}  // namespace casimir
