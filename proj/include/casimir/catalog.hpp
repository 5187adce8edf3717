#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lie_algebra.hpp"
#include "parsing.hpp"

namespace casimir {

// One invariant family: the commutative polynomial over x1..xd and the
// enveloping-algebra operator as printed in the literature.
struct CatalogCasimir {
    std::string pattern;
    std::string op;
};

// Per-algebra defaults for the closure search.
struct ClosureDefaults {
    int invariant_degree = 2;
    int g_deg = 2;
    int c_deg = 1;
    bool projective = false;
    // ring of central coefficients: per-copy central generators, or one-index
    // Casimirs together with the total Casimir
    bool ring_from_center = false;
    // coefficient degree for relations among the nested commutators of one level
    int relation_c_deg = 0;
};

struct CatalogEntry {
    std::string name;
    std::string title;
    int dim;
    std::string brackets;  // "i,j: expr; ..." with expr linear in X1..Xd
    std::vector<CatalogCasimir> casimirs;
    ClosureDefaults closure;
};

// Parses "i,j: linear expression; ..." into bracket entries.
inline std::vector<BracketEntry> parse_bracket_table(int dim, const std::string& spec) {
    std::vector<BracketEntry> out;
    auto vars = coordinate_names(dim, "X");
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.find_first_not_of(" \t\n") == std::string::npos) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError("bracket entry without ':' in \"" + item + "\"");
        int i = 0, j = 0;
        char comma;
        std::stringstream ij(item.substr(0, colon));
        if (!(ij >> i >> comma >> j) || comma != ',') throw ParseError("bad bracket indices in \"" + item + "\"");
        CommPoly rhs = parse_commpoly(vars, item.substr(colon + 1));
        BracketEntry e{i, j, {}};
        for (const auto& [ex, c] : rhs.terms()) {
            if (exponents_degree(ex) != 1) throw ParseError("bracket value must be linear");
            for (int k = 0; k < dim; ++k)
                if (ex[k]) e.terms.push_back({k + 1, c});
        }
        out.push_back(std::move(e));
    }
    return out;
}

inline const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"sl2", "sl(2)", 3, "1,2: 2*X1; 1,3: -X2; 2,3: 2*X3",
         {{"x2^2 + 4*x1*x3", "X2^2 + 4*X1*X3 + 2*X2"}},
         {2, 2, 1, false, false, 0}},
        {"so13", "so(1,3)", 6,
         "1,2: X3; 1,3: -X2; 1,5: X6; 1,6: -X5; 2,3: X1; 2,4: -X6; 2,6: X4;"
         "3,4: X5; 3,5: -X4; 4,5: -X3; 4,6: X2; 5,6: -X1",
         {{"x1*x4 + x2*x5 + x3*x6", "X1*X4 + X2*X5 + X3*X6"},
          {"x1^2 + x2^2 + x3^2 - x4^2 - x5^2 - x6^2", "X1^2 + X2^2 + X3^2 - X4^2 - X5^2 - X6^2"}},
         {2, 2, 1, false, false, 0}},
        {"n55", "n(5,5)", 5, "2,5: X1; 3,5: X2; 4,5: X3",
         {{"2*x1*x3 - x2^2", "2*X1*X3 - X2^2"},
          {"x2^3 + 3*x1^2*x4 - 3*x1*x2*x3", "X2^3 + 3*X1^2*X4 - 3*X1*X2*X3"}},
         {3, 1, 1, true, true, 0}},
        {"n61", "n(6,1)", 6, "4,5: X2; 4,6: X3; 5,6: X1",
         {{"x1*x4 + x2*x6 - x3*x5", "X1*X4 + X2*X6 - X3*X5"}},
         {2, 1, 3, false, true, 0}},
        {"n619", "n(6,19)", 6, "2,6: X1; 3,4: X1; 3,5: X2; 4,5: X3; 4,6: X2; 5,6: X4",
         {{"6*x1^2*x5 - 6*x1*x2*x4 + 3*x1*x3^2 + 2*x2^3", "6*X1^2*X5 - 6*X1*X2*X4 + 3*X1*X3^2 + 2*X2^3"}},
         {3, 1, 2, true, true, 2}},
        {"s6160", "s(6,160)", 6, "2,4: X1; 3,5: X1; 3,6: -X3; 4,6: -X2; 5,6: X5",
         {{"2*x1*x6 + 2*x3*x5 - x2^2", "2*X1*X6 + 2*X3*X5 - X2^2"}},
         {2, 1, 4, true, true, 0}},
        {"s6183", "s(6,183)", 6, "2,5: X1; 2,6: X2; 3,4: X1; 3,6: -2*X3; 4,5: X2; 4,6: 2*X4; 5,6: -X5",
         {{"x1^2*x6 + 2*x1*x3*x4 - x1*x2*x5 - x2^2*x3", "X1^2*X6 + 2*X1*X3*X4 - X1*X2*X5 - X2^2*X3"}},
         {3, 1, 16, true, true, 3}},
        {"sl2_3n11", "sl(2) + 3n(1,1)", 6,
         "1,2: 2*X1; 1,3: -X2; 1,5: 2*X4; 1,6: -X5; 2,3: 2*X3; 2,4: -2*X4; 2,6: 2*X6; 3,4: X5; 3,5: -2*X6",
         {{"2*x1*x6 + x2*x5 + 2*x3*x4", "2*X1*X6 + X2*X5 + 2*X3*X4"},
          {"x5^2 + 4*x4*x6", "X5^2 + 4*X4*X6"}},
         {2, 2, 1, false, false, 0}},
        {"sl2_n31", "sl(2) + n(3,1)", 6,
         "1,2: 2*X1; 1,3: -X2; 1,5: X6; 2,3: 2*X3; 2,5: X5; 2,6: -X6; 3,6: X5; 5,6: X4",
         {{"4*x1*x3*x4 - 2*x1*x5^2 + x2^2*x4 + 2*x2*x5*x6 + 2*x3*x6^2",
           "4*X1*X3*X4 - 2*X1*X5^2 + X2^2*X4 + 2*X2*X5*X6 + 2*X3*X6^2 + X2*X4"}},
         {3, 2, 1, false, true, 0}},
    };
    return entries;
}

inline std::vector<std::string> catalog_names() {
    std::vector<std::string> out;
    for (const auto& e : catalog_entries()) out.push_back(e.name);
    return out;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog_entries())
        if (e.name == name) return e;
    throw ValidationError("unknown catalog algebra: " + name);
}

inline LieAlgebra catalog_algebra(const std::string& name) {
    const auto& e = catalog_entry(name);
    return LieAlgebra::make(e.name, e.dim, parse_bracket_table(e.dim, e.brackets));
}

}  // namespace casimir
