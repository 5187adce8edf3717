#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "comm_poly.hpp"
#include "errors.hpp"
#include "lie_algebra.hpp"
#include "linalg.hpp"
#include "parsing.hpp"
#include "uea.hpp"

namespace casimir {

// Component j of field i is sum_k C_ij^k x_k.
using VectorField = std::vector<CommPoly>;

inline std::vector<VectorField> coadjoint_fields(const LieAlgebra& L) {
    auto vars = coordinate_names(L.dim());
    std::vector<VectorField> out;
    for (int i = 1; i <= L.dim(); ++i) {
        VectorField f;
        for (int j = 1; j <= L.dim(); ++j) {
            CommPoly c(vars);
            for (const auto& t : L.bracket(i, j)) c += CommPoly::variable(vars, t.k - 1, t.c);
            f.push_back(std::move(c));
        }
        out.push_back(std::move(f));
    }
    return out;
}

inline CommPoly apply_field(const VectorField& field, const CommPoly& F) {
    CommPoly out(F.vars());
    for (int j = 0; j < static_cast<int>(field.size()); ++j)
        if (!field[j].is_zero()) out += field[j] * F.derivative(j);
    return out;
}

enum class Provenance { computed, catalog };

struct InvariantBasis {
    int degree_bound = 0;
    std::vector<CommPoly> polys;
    Provenance provenance = Provenance::computed;
};

namespace detail {

// Homogeneous invariants of degree k as reduced echelon vectors over the
// degree-k monomials (grlex descending = column order).
inline std::vector<SparseVec> homogeneous_invariants(const LieAlgebra& L, const std::vector<VectorField>& fields,
                                                     const std::vector<Exponents>& monos) {
    const int d = L.dim();
    std::map<Exponents, int> col;
    for (int c = 0; c < static_cast<int>(monos.size()); ++c) col[monos[c]] = c;
    // row key: (field, image monomial)
    std::map<std::pair<int, Exponents>, std::map<int, Rational>> rows;
    for (int c = 0; c < static_cast<int>(monos.size()); ++c) {
        const Exponents& e = monos[c];
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (!e[j]) continue;
                // x_k * d/dx_j of x^e
                for (const auto& [ek, ck] : fields[i][j].terms()) {
                    Exponents img = e;
                    img[j] -= 1;
                    for (int k = 0; k < d; ++k) img[k] += ek[k];
                    rows[{i, img}][c] += ck * Rational(e[j]);
                }
            }
        }
    }
    Echelon E(static_cast<int>(monos.size()));
    for (auto& [key, row] : rows) {
        SparseVec v;
        for (auto& [c, r] : row)
            if (!r.is_zero()) v.emplace_back(c, r);
        E.insert(v);
    }
    return E.nullspace();
}

inline CommPoly vector_to_poly(const std::vector<std::string>& vars, const std::vector<Exponents>& monos,
                               const SparseVec& v) {
    CommPoly p(vars);
    for (const auto& [c, r] : v) p.add_term(monos[c], r);
    return p;
}

}  // namespace detail

// Full vector space of invariants with 1 <= degree <= p, degree by degree.
inline std::vector<CommPoly> invariant_space(const LieAlgebra& L, int p, std::size_t monomial_budget = 200000) {
    auto fields = coadjoint_fields(L);
    auto vars = coordinate_names(L.dim());
    std::vector<CommPoly> out;
    for (int k = 1; k <= p; ++k) {
        auto monos = monomials_of_degree(L.dim(), k);
        if (monos.size() > monomial_budget) throw BudgetExceeded("too many monomials for invariant search");
        for (const auto& v : detail::homogeneous_invariants(L, fields, monos))
            out.push_back(detail::vector_to_poly(vars, monos, primitive_integer(v)));
    }
    return out;
}

// Generators of the invariant algebra up to degree p: at each degree, the
// invariants modulo products of lower-degree generators, in reduced echelon
// form over grlex with coprime integer coefficients and positive leading term.
inline InvariantBasis polynomial_invariants(const LieAlgebra& L, int p, std::size_t monomial_budget = 200000) {
    if (p < 1) throw std::invalid_argument("degree bound must be >= 1");
    auto fields = coadjoint_fields(L);
    auto vars = coordinate_names(L.dim());
    InvariantBasis basis;
    basis.degree_bound = p;
    std::vector<std::pair<int, CommPoly>> gens;  // (degree, poly)
    for (int k = 1; k <= p; ++k) {
        auto monos = monomials_of_degree(L.dim(), k);
        if (monos.size() > monomial_budget) throw BudgetExceeded("too many monomials for invariant search");
        std::map<Exponents, int> col;
        for (int c = 0; c < static_cast<int>(monos.size()); ++c) col[monos[c]] = c;
        auto to_vec = [&](const CommPoly& q) {
            SparseVec v;
            for (const auto& [e, c] : q.terms()) v.emplace_back(col.at(e), c);
            std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            return v;
        };
        // products of earlier generators with total degree k
        Echelon decomposable(static_cast<int>(monos.size()));
        std::function<void(std::size_t, int, const CommPoly&)> products = [&](std::size_t from, int left,
                                                                            const CommPoly& acc) {
            if (left == 0) {
                decomposable.insert(to_vec(acc));
                return;
            }
            for (std::size_t g = from; g < gens.size(); ++g)
                if (gens[g].first <= left) products(g, left - gens[g].first, acc * gens[g].second);
        };
        if (!gens.empty()) products(0, k, CommPoly::constant(vars, Rational(1)));
        Echelon fresh(static_cast<int>(monos.size()));
        for (const auto& v : detail::homogeneous_invariants(L, fields, monos)) {
            SparseVec r = decomposable.reduce(v);
            if (!r.empty()) fresh.insert(r);
        }
        for (const auto& v : fresh.rows()) {
            CommPoly g = detail::vector_to_poly(vars, monos, primitive_integer(v));
            gens.emplace_back(k, g);
            basis.polys.push_back(g);
        }
    }
    return basis;
}

// Symmetrized invariants; with center_reduce, purely central terms are dropped
// (and operators that vanish entirely are omitted).
inline std::vector<NCPoly> casimir_operators(const LieAlgebra& L, int p, bool center_reduce) {
    Uea U(L, 1);
    std::vector<NCPoly> out;
    for (const auto& F : polynomial_invariants(L, p).polys) {
        NCPoly C = U.symmetrize(F, 1);
        if (center_reduce) C = U.reduce_mod_center(C);
        if (!C.is_zero()) out.push_back(std::move(C));
    }
    return out;
}

inline bool casimir_check(const Uea& U, const NCPoly& C, const std::vector<NCPoly>& generators) {
    for (const auto& g : generators)
        if (!U.commutator(g, C).is_zero()) return false;
    return true;
}

// All generators X_i^[copy] for every copy, the default check set.
inline std::vector<NCPoly> all_generators(const Uea& U) {
    std::vector<NCPoly> out;
    for (int c = 1; c <= U.copies(); ++c)
        for (int i = 1; i <= U.dim(); ++i) out.push_back(U.generator(i, c));
    return out;
}

// Pairs are (position, momentum) variable indices.
inline CommPoly poisson_bracket(const CommPoly& f, const CommPoly& g, const std::vector<std::pair<int, int>>& pairs) {
    CommPoly out(f.vars().empty() ? g.vars() : f.vars());
    for (const auto& [q, p] : pairs) {
        out += f.derivative(q) * g.derivative(p);
        out -= g.derivative(q) * f.derivative(p);
    }
    return out;
}

inline bool verify_realization(const LieAlgebra& L, const std::vector<CommPoly>& rho,
                               const std::vector<std::pair<int, int>>& pairs) {
    if (static_cast<int>(rho.size()) != L.dim()) return false;
    for (int i = 1; i <= L.dim(); ++i)
        for (int j = i + 1; j <= L.dim(); ++j) {
            CommPoly rhs(rho[0].vars());
            for (const auto& t : L.bracket(i, j)) rhs += rho[t.k - 1] * t.c;
            if (poisson_bracket(rho[i - 1], rho[j - 1], pairs) != rhs) return false;
        }
    return true;
}

}  // namespace casimir
