#pragma once

#include <casimir/catalog.hpp>
#include <casimir/parsing.hpp>
#include <casimir/uea.hpp>


#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"

namespace support {

inline std::vector<casimir::NCPoly> catalog_operators(const casimir::Uea& U, const std::string& name, int copy = 1) {
    std::vector<casimir::NCPoly> out;
    for (const auto& c : casimir::catalog_entry(name).casimirs) out.push_back(casimir::parse_ncpoly(U, c.op, copy));
    return out;
}

// Random element: up to `terms` words of length <= len with small integer weights.
inline casimir::NCPoly random_element(const casimir::Uea& U, std::mt19937& rng, int terms = 3, int len = 2) {
    std::uniform_int_distribution<int> gen(0, U.num_generators() - 1), coef(-3, 3), length(0, len);
    casimir::NCPoly out;
    for (int t = 0; t < terms; ++t) {
        std::vector<casimir::GeneratorId> w;
        int n = length(rng);
        for (int k = 0; k < n; ++k) w.push_back(U.id_of(gen(rng)));
        out += U.word(w) * casimir::Rational(coef(rng));
    }
    return out;
}

// target lies in the rational span of `spanning`
inline bool in_span(const std::vector<casimir::CommPoly>& spanning, const casimir::CommPoly& target) {
    std::vector<casimir::CommPoly> cols = spanning;
    cols.push_back(target);
    std::map<casimir::Exponents, int> row;
    for (const auto& c : cols)
        for (const auto& [e, q] : c.terms()) row.emplace(e, 0);
    int r = 0;
    for (auto& [e, i] : row) i = r++;
    std::vector<std::vector<mpq_class>> A(row.size(), std::vector<mpq_class>(cols.size(), 0));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [e, q] : cols[j].terms()) A[row[e]][j] = q.to_mpq();
    for (const auto& v : oracle::nullspace(A, static_cast<int>(cols.size())))
        if (v.back() != 0) return true;
    return false;
}

}  // namespace support
