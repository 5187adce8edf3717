#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <new>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "comm_poly.hpp"
#include "copies.hpp"
#include "errors.hpp"
#include "field_solver.hpp"
#include "invariants.hpp"
#include "linalg.hpp"
#include "modular.hpp"
#include "parsing.hpp"
#include "uea.hpp"

namespace casimir {

// Right-nested label C^(r1,...,rm)_{a1 a2 ...}: entries[0] is the outermost
// factor, so [C12, C23] has entries {(1,12),(1,23)}.
struct NestedLabel {
    std::vector<std::pair<int, CopySet>> entries;

    int depth() const { return static_cast<int>(entries.size()) - 1; }

    std::string str() const {
        std::string s = "C^(";
        for (std::size_t k = 0; k < entries.size(); ++k) s += (k ? "," : "") + std::to_string(entries[k].first);
        s += ")_{";
        for (const auto& [r, S] : entries)
            for (int a : S) s += std::to_string(a);
        return s + "}";
    }

    // Inverse of str() for subsets of equal size (pairs by default).
    static NestedLabel parse(const std::string& text, std::size_t subset_size = 2) {
        NestedLabel out;
        auto open = text.find("^("), close = text.find(")_{");
        if (text.rfind("C", 0) != 0 || open == std::string::npos || close == std::string::npos || text.back() != '}')
            throw ParseError("bad nested label: " + text);
        std::vector<int> rs;
        std::stringstream ss(text.substr(open + 2, close - open - 2));
        std::string item;
        while (std::getline(ss, item, ',')) rs.push_back(std::stoi(item));
        std::string digits = text.substr(close + 3, text.size() - close - 4);
        if (digits.size() != rs.size() * subset_size) throw ParseError("bad nested label subscript: " + text);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            CopySet S;
            for (std::size_t j = 0; j < subset_size; ++j) S.push_back(digits[k * subset_size + j] - '0');
            out.entries.emplace_back(rs[k], S);
        }
        return out;
    }

    // [outer, inner]
    static NestedLabel bracket(const NestedLabel& outer, const NestedLabel& inner) {
        NestedLabel out = outer;
        out.entries.insert(out.entries.end(), inner.entries.begin(), inner.entries.end());
        return out;
    }
};

// Central symbols bound to elements of the enveloping algebra.
struct CentralRing {
    std::vector<std::string> symbols;
    std::vector<NCPoly> values;
    std::vector<int> slots;  // generator slot when the value is a single central generator, else -1

    int size() const { return static_cast<int>(symbols.size()); }

    bool slot_bound() const {
        return std::all_of(slots.begin(), slots.end(), [](int s) { return s >= 0; });
    }

    int symbol_degree(int i) const { return values[i].degree(); }

    int pbw_degree(const Exponents& e) const {
        int d = 0;
        for (int i = 0; i < size(); ++i) d += e[i] * symbol_degree(i);
        return d;
    }

    const NCPoly& monomial_value(const Uea& U, const Exponents& e) const {
        auto it = cache_.find(e);
        if (it != cache_.end()) return it->second;
        NCPoly v = U.one();
        if (slot_bound()) {
            Monomial m;
            for (int i = 0; i < size(); ++i) m.e[slots[i]] = static_cast<std::int8_t>(e[i]);
            v = NCPoly::monomial(m);
        } else {
            for (int i = 0; i < size(); ++i)
                if (e[i]) v = U.multiply(v, U.power(values[i], e[i]));
        }
        return cache_.emplace(e, std::move(v)).first->second;
    }

    // mu * p for a ring monomial mu.
    NCPoly times(const Uea& U, const Exponents& mu, const NCPoly& p) const {
        if (std::all_of(mu.begin(), mu.end(), [](int v) { return v == 0; })) return p;
        if (slot_bound()) {
            TermList t = p.terms();
            for (auto& [m, c] : t)
                for (int i = 0; i < size(); ++i) m.e[slots[i]] = static_cast<std::int8_t>(m.e[slots[i]] + mu[i]);
            return NCPoly(std::move(t));  // a uniform shift keeps the order
        }
        return U.multiply(monomial_value(U, mu), p);
    }

    NCPoly evaluate(const Uea& U, const CommPoly& c) const {
        NCPoly out;
        for (const auto& [e, r] : c.terms()) out += monomial_value(U, e) * r;
        return out;
    }

    CommPoly zero() const { return CommPoly(symbols); }
    CommPoly one() const { return CommPoly::constant(symbols, Rational(1)); }

private:
    mutable std::map<Exponents, NCPoly> cache_;
};

// Binds symbols to values after checking each commutes with every element of `check`.
inline CentralRing make_central_ring(const Uea& U, std::vector<std::string> symbols, std::vector<NCPoly> values,
                                     const std::vector<NCPoly>& check) {
    if (symbols.size() != values.size()) throw ValidationError("central ring symbols and values differ in length");
    CentralRing ring;
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (const auto& g : check)
            if (!U.commutator(values[i], g).is_zero())
                throw ValidationError("ring symbol " + symbols[i] + " does not commute with the generating set");
        int slot = -1;
        if (values[i].size() == 1 && values[i].terms()[0].second.is_one()) {
            const Monomial& m = values[i].terms()[0].first;
            int found = -1, count = 0;
            for (int s = 0; s < U.num_generators(); ++s)
                if (m.e[s]) {
                    ++count;
                    found = s;
                }
            if (count == 1 && m.e[found] == 1 && U.is_central_slot(found)) slot = found;
        }
        ring.slots.push_back(slot);
    }
    ring.symbols = std::move(symbols);
    ring.values = std::move(values);
    return ring;
}

// Lie-central generators of every copy, named X<i>^[<copy>], in slot order.
inline CentralRing central_generator_ring(const Uea& U) {
    std::vector<std::string> names;
    std::vector<NCPoly> values;
    for (int s = 0; s < U.num_generators(); ++s) {
        if (!U.is_central_slot(s)) continue;
        GeneratorId g = U.id_of(s);
        names.push_back("X" + std::to_string(g.index) + "^[" + std::to_string(g.copy) + "]");
        values.push_back(U.generator(g.index, g.copy));
    }
    return make_central_ring(U, std::move(names), std::move(values), {});
}

// Builds the intermediate Casimir of family r (0-based) over copy subset S.
using IntermediateFn = std::function<NCPoly(const Uea&, int, const CopySet&)>;

inline IntermediateFn operator_intermediates(std::vector<NCPoly> families) {
    return [families = std::move(families)](const Uea& U, int r, const CopySet& S) {
        return intermediate_from_operator(U, families.at(r), S);
    };
}

// One-index Casimirs C<r>_<a> for every copy, then the total C<r>_<1..n>, family by family.
inline CentralRing casimir_ring(const Uea& U, int nfamilies, const IntermediateFn& build,
                                const std::vector<NCPoly>& check) {
    std::vector<std::string> names;
    std::vector<NCPoly> values;
    CopySet all;
    for (int a = 1; a <= U.copies(); ++a) all.push_back(a);
    for (int r = 0; r < nfamilies; ++r) {
        std::string stem = "C" + std::to_string(r + 1) + "_";
        for (int a = 1; a <= U.copies(); ++a) {
            names.push_back(stem + std::to_string(a));
            values.push_back(build(U, r, {a}));
        }
        std::string tot;
        for (int a : all) tot += std::to_string(a);
        names.push_back(stem + tot);
        values.push_back(build(U, r, all));
    }
    return make_central_ring(U, std::move(names), std::move(values), check);
}

inline CentralRing casimir_ring(const Uea& U, const std::vector<NCPoly>& families, const std::vector<NCPoly>& check) {
    return casimir_ring(U, static_cast<int>(families.size()), operator_intermediates(families), check);
}

enum class RelationKind { linear, central_coefficient, projective_expression };

inline std::string kind_name(RelationKind k) {
    switch (k) {
        case RelationKind::linear: return "linear";
        case RelationKind::central_coefficient: return "central-coefficient";
        default: return "projective-expression";
    }
}

// "c*" style prefix for a coefficient in front of a label or product.
inline std::string coefficient_prefix(const CommPoly& c) {
    if (c.size() == 1 && exponents_degree(c.terms().begin()->first) == 0) {
        const Rational& r = c.terms().begin()->second;
        if (r.is_one()) return "";
        if ((-r).is_one()) return "-";
        return r.str() + "*";
    }
    return "(" + c.str() + ")*";
}

// Appends a signed summand, turning "+ -x" into "- x".
inline void append_summand(std::string& s, const std::string& piece) {
    if (s.empty()) s = piece;
    else if (!piece.empty() && piece[0] == '-') s += " - " + piece.substr(1);
    else s += " + " + piece;
}

struct RelationTerm {
    CommPoly coefficient;
    std::string label;
};

struct Relation {
    RelationKind kind = RelationKind::linear;
    std::vector<RelationTerm> terms;

    std::string str() const {
        std::string s;
        for (const auto& t : terms) append_summand(s, coefficient_prefix(t.coefficient) + t.label);
        return s + " = 0";
    }
};

struct ExpressionTerm {
    CommPoly coefficient;
    std::vector<std::string> factors;  // ordered product; empty for a pure central term
};

// multiplier * lhs = sum of terms
struct Expression {
    std::string lhs_label;
    CommPoly multiplier;
    std::vector<ExpressionTerm> terms;

    bool projective() const {
        return !(multiplier.size() == 1 && exponents_degree(multiplier.terms().begin()->first) == 0);
    }

    std::string str() const {
        std::string s;
        if (projective()) s += "(" + multiplier.str() + ")*";
        s += lhs_label + " = ";
        if (terms.empty()) return s + "0";
        std::string rhs;
        for (const auto& t : terms) {
            if (t.factors.empty()) {
                append_summand(rhs, t.coefficient.str());
                continue;
            }
            std::string piece = coefficient_prefix(t.coefficient);
            for (std::size_t f = 0; f < t.factors.size(); ++f) piece += (f ? "*" : "") + t.factors[f];
            append_summand(rhs, piece);
        }
        return s + rhs;
    }
};

namespace detail {

inline bool all_constant(const CommPoly& p) {
    for (const auto& [e, c] : p.terms())
        if (exponents_degree(e) != 0) return false;
    return true;
}

// Makes the coefficients of all polys jointly coprime integers; the sign of the
// first nonzero poly's leading term becomes positive.
inline void make_primitive(std::vector<CommPoly*> polys) {
    mpz_class l = 1, g = 0;
    const Rational* lead = nullptr;
    for (auto* p : polys)
        for (const auto& [e, c] : p->terms()) {
            if (!lead) lead = &c;
            mpz_class d = c.denominator();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
        }
    if (!lead) return;
    for (auto* p : polys)
        for (const auto& [e, c] : p->terms()) {
            mpz_class n = c.numerator() * (l / c.denominator());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        }
    Rational s(mpq_class(l, g));
    if (lead->sign() < 0) s = -s;
    for (auto* p : polys) *p *= s;
}

inline std::vector<Exponents> ring_monomials(int n, int max_deg) {
    if (max_deg < 0) return {};
    return monomials_up_to(n, 0, max_deg);
}

// Columns hold central multiples of elements; rows are PBW monomials.
struct ColumnSystem {
    std::unordered_map<Monomial, SparseVec, MonomialHash> rows;
    int ncols = 0;

    void add_column(const NCPoly& v) {
        for (const auto& [m, c] : v.terms()) rows[m].emplace_back(ncols, c);
        ++ncols;
    }
    std::vector<SparseVec> take_rows() {
        std::vector<SparseVec> out;
        out.reserve(rows.size());
        for (auto& [m, r] : rows) out.push_back(std::move(r));
        // deterministic input order for the solver
        std::sort(out.begin(), out.end());
        return out;
    }
};

}  // namespace detail

// Relations sum_m P_m * E_m = 0 with deg P_m <= c_deg. Unknown columns are
// ordered by central degree (high first), then element (latest first), then
// central monomial grlex; the leading element of each relation is therefore
// its latest one. Only module generators are reported: a relation that is a
// central multiple combination of lower-degree ones is omitted.
struct RelationSearch {
    std::vector<Relation> relations;
    std::vector<int> dependent;  // element index eliminated by each relation
};

inline RelationSearch find_relations(const Uea& U, const std::vector<LabeledElement>& elements,
                                     const CentralRing& ring, int c_deg,
                                     std::uint64_t entry_budget = 100'000'000) {
    if (c_deg < 0) throw std::invalid_argument("central degree must be >= 0");
    RelationSearch out;
    const int ne = static_cast<int>(elements.size());
    if (ne == 0) return out;
    const int nr = ring.size();
    std::vector<std::vector<Exponents>> by_deg(c_deg + 1);
    for (int d = 0; d <= c_deg; ++d) by_deg[d] = nr ? monomials_of_degree(nr, d) : (d ? std::vector<Exponents>{}
                                                                                       : std::vector<Exponents>{{}});
    struct Col {
        int elem;
        Exponents mu;
        int deg;
    };
    std::vector<Col> cols;
    for (int d = c_deg; d >= 0; --d)
        for (int m = ne - 1; m >= 0; --m)
            for (const auto& mu : by_deg[d]) cols.push_back({m, mu, d});
    std::map<std::pair<int, Exponents>, int> col_of;
    for (int c = 0; c < static_cast<int>(cols.size()); ++c) col_of[{cols[c].elem, cols[c].mu}] = c;

    detail::ColumnSystem sys;
    for (const auto& col : cols) sys.add_column(ring.times(U, col.mu, elements[col.elem].value));
    auto null = exact_nullspace(sys.take_rows(), sys.ncols, entry_budget);

    auto degree_of_row = [&](const SparseVec& v) { return cols[v.front().first].deg; };
    std::sort(null.begin(), null.end(), [&](const SparseVec& a, const SparseVec& b) {
        return a.front().first > b.front().first;  // trailing (low-degree) blocks first
    });
    std::vector<SparseVec> kept;
    for (int d = 0; d <= c_deg; ++d) {
        Echelon multiples(static_cast<int>(cols.size()));
        for (const auto& r : kept) {
            int rdeg = degree_of_row(r);
            for (int e = 0; e + rdeg <= d; ++e)
                for (const auto& mu : by_deg[e]) {
                    SparseVec v;
                    for (const auto& [c, a] : r) {
                        Exponents nu = cols[c].mu;
                        for (int i = 0; i < nr; ++i) nu[i] += mu[i];
                        if (exponents_degree(nu) > c_deg) continue;
                        v.emplace_back(col_of.at({cols[c].elem, nu}), a);
                    }
                    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
                    multiples.insert(v);
                }
        }
        for (const auto& r : null) {
            if (degree_of_row(r) != d) continue;
            if (multiples.insert(r)) kept.push_back(r);
        }
    }
    for (const auto& r : kept) {
        std::vector<CommPoly> coef(ne, ring.zero());
        for (const auto& [c, a] : r) coef[cols[c].elem].add_term(cols[c].mu, a);
        std::vector<CommPoly*> ptrs;
        for (int m = ne - 1; m >= 0; --m)
            if (!coef[m].is_zero()) ptrs.push_back(&coef[m]);
        detail::make_primitive(ptrs);
        Relation rel;
        bool constant = true;
        NCPoly check;
        for (int m = 0; m < ne; ++m) {
            if (coef[m].is_zero()) continue;
            constant = constant && detail::all_constant(coef[m]);
            check += U.multiply(ring.evaluate(U, coef[m]), elements[m].value);
            rel.terms.push_back({coef[m], elements[m].label});
        }
        if (!check.is_zero()) throw std::logic_error("relation failed exact re-expansion");
        rel.kind = constant ? RelationKind::linear : RelationKind::central_coefficient;
        out.relations.push_back(std::move(rel));
        out.dependent.push_back(cols[r.front().first].elem);
    }
    return out;
}

inline std::vector<Relation> linear_relations(const Uea& U, const std::vector<LabeledElement>& elements,
                                              const CentralRing& ring, int c_deg) {
    return find_relations(U, elements, ring, c_deg).relations;
}

struct ExpressOptions {
    int degree_slack = 0;  // extra PBW degree allowed for candidate products
    std::uint64_t solver_entries = 100'000'000;
    int field_max_symbols = 4;
};

// Expresses targets over a fixed list of generators. Uses the specialization
// solver when coefficients live in a small ring of central generators and the
// expressions are linear in the generators, and an explicit ansatz otherwise.
class Expresser {
public:
    Expresser(const Uea& U, std::vector<LabeledElement> gens, const CentralRing& ring, int g_deg, int c_deg,
              bool projective, ExpressOptions opts = {})
        : U_(U), gens_(std::move(gens)), ring_(ring), g_deg_(g_deg), c_deg_(c_deg), projective_(projective),
          opts_(opts) {
        if (g_deg < 1) throw std::invalid_argument("generator degree must be >= 1");
        if (c_deg < 0) throw std::invalid_argument("central degree must be >= 0");
        use_field_ = g_deg_ == 1 && !gens_.empty() && ring_.size() > 0 && ring_.slot_bound() &&
                     ring_.size() <= opts_.field_max_symbols;
        if (use_field_) {
            std::vector<NCPoly> vals;
            for (const auto& g : gens_) vals.push_back(g.value);
            field_ = std::make_unique<FieldSolver>(U_, ring_.slots, ring_.symbols, std::move(vals));
        }
    }

    bool uses_field_solver() const { return use_field_; }

    std::optional<Expression> express(const NCPoly& target, const std::string& lhs_label) {
        Expression ex{lhs_label, ring_.one(), {}};
        if (target.is_zero()) return ex;
        std::optional<Expression> r = use_field_ ? express_field(target, lhs_label) : express_ansatz(target, lhs_label);
        if (r && !verify(target, *r)) throw std::logic_error("expression failed exact re-expansion");
        return r;
    }

    bool verify(const NCPoly& target, const Expression& ex) const {
        NCPoly lhs = U_.multiply(ring_.evaluate(U_, ex.multiplier), target);
        NCPoly rhs;
        for (const auto& t : ex.terms) {
            NCPoly prod = ring_.evaluate(U_, t.coefficient);
            for (const auto& f : t.factors) prod = U_.multiply(prod, value_of(f));
            rhs += prod;
        }
        return lhs == rhs;
    }

private:
    const Uea& U_;
    std::vector<LabeledElement> gens_;
    const CentralRing& ring_;
    int g_deg_, c_deg_;
    bool projective_;
    ExpressOptions opts_;
    bool use_field_ = false;
    std::unique_ptr<FieldSolver> field_;

    struct Product {
        std::vector<int> idx;
        NCPoly value;
        int degree;
    };
    std::vector<Product> products_;
    std::map<std::pair<Exponents, int>, NCPoly> expansion_cache_;

    const NCPoly& value_of(const std::string& label) const {
        for (const auto& g : gens_)
            if (g.label == label) return g.value;
        throw std::logic_error("unknown factor label " + label);
    }

    std::optional<Expression> express_field(const NCPoly& target, const std::string& lhs_label) {
        auto res = field_->solve(target);
        if (!res) return std::nullopt;
        if (res->multiplier.total_degree() > c_deg_) return std::nullopt;
        if (!projective_ && res->multiplier.total_degree() > 0) return std::nullopt;
        Expression ex{lhs_label, res->multiplier, {}};
        for (std::size_t c = 0; c < gens_.size(); ++c)
            if (!res->coefficients[c].is_zero()) ex.terms.push_back({res->coefficients[c], {gens_[c].label}});
        return ex;
    }

    void build_products() {
        if (!products_.empty()) return;
        std::function<void(int, std::vector<int>&, const NCPoly&)> rec = [&](int from, std::vector<int>& idx,
                                                                           const NCPoly& acc) {
            products_.push_back({idx, acc, acc.degree()});
            if (static_cast<int>(idx.size()) == g_deg_) return;
            for (int g = from; g < static_cast<int>(gens_.size()); ++g) {
                idx.push_back(g);
                rec(g, idx, U_.multiply(acc, gens_[g].value));
                idx.pop_back();
            }
        };
        std::vector<int> idx;
        rec(0, idx, U_.one());
    }

    const NCPoly& expansion(const Exponents& mu, int prod) {
        auto key = std::make_pair(mu, prod);
        auto it = expansion_cache_.find(key);
        if (it != expansion_cache_.end()) return it->second;
        return expansion_cache_.emplace(key, ring_.times(U_, mu, products_[prod].value)).first->second;
    }

    std::optional<Expression> express_ansatz(const NCPoly& target, const std::string& lhs_label) {
        build_products();
        const int nr = ring_.size();
        const int tdeg = target.degree();
        int max_fill = c_deg_ + g_deg_;
        auto mus = detail::ring_monomials(nr, max_fill);
        if (nr == 0) mus = {Exponents{}};
        for (int delta = 0; delta <= (projective_ ? c_deg_ : 0); ++delta) {
            std::vector<Exponents> pmons;
            if (projective_) {
                pmons = nr ? monomials_up_to(nr, 0, delta) : std::vector<Exponents>{Exponents{}};
                if (nr == 0 && delta > 0) break;
            } else {
                pmons = {Exponents(nr, 0)};
            }
            int pdeg = 0;
            for (const auto& e : pmons) pdeg = std::max(pdeg, ring_.pbw_degree(e));
            const int cap = tdeg + pdeg + opts_.degree_slack;
            struct Cand {
                Exponents mu;
                int prod;
            };
            std::vector<Cand> cands;
            for (int p = 0; p < static_cast<int>(products_.size()); ++p) {
                int len = static_cast<int>(products_[p].idx.size());
                int mu_max = c_deg_ + (g_deg_ - len);
                for (const auto& mu : mus) {
                    if (exponents_degree(mu) > mu_max) continue;
                    if (ring_.pbw_degree(mu) + products_[p].degree > cap) continue;
                    if (products_[p].value.is_zero()) continue;
                    cands.push_back({mu, p});
                }
            }
            detail::ColumnSystem sys;
            for (const auto& e : pmons) sys.add_column(ring_.times(U_, e, target));
            for (const auto& c : cands) sys.add_column(expansion(c.mu, c.prod));
            auto null = exact_nullspace(sys.take_rows(), sys.ncols, opts_.solver_entries);
            const int np = static_cast<int>(pmons.size());
            const SparseVec* best = nullptr;
            for (const auto& v : null)
                if (v.front().first < np && (!best || v.front().first > best->front().first)) best = &v;
            if (!best) continue;
            Expression ex{lhs_label, ring_.zero(), {}};
            std::map<int, CommPoly> by_product;
            for (const auto& [c, a] : *best) {
                if (c < np) {
                    ex.multiplier.add_term(pmons[c], a);
                } else {
                    const auto& cd = cands[c - np];
                    auto it = by_product.try_emplace(cd.prod, ring_.zero()).first;
                    it->second.add_term(cd.mu, -a);
                }
            }
            for (auto& [p, coef] : by_product) {
                std::vector<std::string> f;
                for (int g : products_[p].idx) f.push_back(gens_[g].label);
                ex.terms.push_back({coef, f});
            }
            std::vector<CommPoly*> ptrs{&ex.multiplier};
            for (auto& t : ex.terms) ptrs.push_back(&t.coefficient);
            detail::make_primitive(ptrs);
            return ex;
        }
        return std::nullopt;
    }
};

inline Expression express_in_basis(const Uea& U, const NCPoly& target, const std::vector<LabeledElement>& gens,
                                   const CentralRing& ring, int g_deg, int c_deg, bool projective,
                                   ExpressOptions opts = {}) {
    Expresser ex(U, gens, ring, g_deg, c_deg, projective, opts);
    auto r = ex.express(target, "target");
    if (!r) throw NotExpressible("target is not expressible within the given degree bounds");
    return *r;
}

enum class RingKind { central_generators, casimirs };

struct ClosureConfig {
    int copies = 3;
    int depth_limit = 5;
    int g_deg = 2;
    int c_deg = 1;
    int relation_c_deg = 0;
    bool projective = false;
    RingKind ring = RingKind::casimirs;
    std::uint64_t budget_terms = 5'000'000;
    std::uint64_t solver_entries = 100'000'000;
    std::function<void(const std::string&)> progress;
};

struct ClosureMember {
    NestedLabel label;
    NCPoly value;
};

struct ClosureLevel {
    int generated = 0;  // nonzero candidates before pruning
    std::vector<ClosureMember> members;
};

struct ClosureReport {
    std::string algebra;
    int copies = 3;
    std::string verdict;  // abelian | closes-at-depth-<k> | budget-exceeded
    std::optional<int> k_star;
    std::string budget_reason;
    std::vector<std::pair<std::string, NCPoly>> ring;
    std::vector<ClosureLevel> levels;
    std::vector<Relation> relations;
    std::vector<Expression> expressions;

    nlohmann::json to_json(const Uea& U) const {
        using nlohmann::json;
        auto poly_json = [](const CommPoly& p) {
            json terms = json::array();
            for (const auto& [e, c] : p.terms()) terms.push_back({{"exponents", e}, {"coefficient", c.str()}});
            return json{{"text", p.str()}, {"terms", terms}};
        };
        json j;
        j["algebra"] = algebra;
        j["copies"] = copies;
        j["verdict"] = verdict;
        j["k_star"] = k_star ? json(*k_star) : json(nullptr);
        if (!budget_reason.empty()) j["budget_reason"] = budget_reason;
        json ringj = json::array();
        for (const auto& [s, v] : ring) ringj.push_back({{"symbol", s}, {"value", U.render(v)}});
        j["central_ring"] = ringj;
        json gens = json::array();
        if (!levels.empty())
            for (const auto& m : levels[0].members) gens.push_back({{"label", m.label.str()}, {"value", U.render(m.value)}});
        j["intermediates"] = gens;
        json sets = json::array(), generated = json::array();
        for (const auto& lv : levels) {
            json s = json::array();
            for (const auto& m : lv.members) s.push_back(m.label.str());
            sets.push_back(s);
            generated.push_back(lv.generated);
        }
        j["sets"] = sets;
        j["generated"] = generated;
        json rels = json::array();
        for (const auto& r : relations) {
            json terms = json::array();
            for (const auto& t : r.terms) terms.push_back({{"coefficient", poly_json(t.coefficient)}, {"label", t.label}});
            rels.push_back({{"kind", kind_name(r.kind)}, {"terms", terms}});
        }
        j["relations"] = rels;
        json exprs = json::array();
        for (const auto& e : expressions) {
            json terms = json::array();
            for (const auto& t : e.terms) terms.push_back({{"coefficient", poly_json(t.coefficient)}, {"factors", t.factors}});
            exprs.push_back({{"lhs_label", e.lhs_label}, {"multiplier", poly_json(e.multiplier)}, {"rhs_terms", terms}});
        }
        j["expressions"] = exprs;
        return j;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "algebra " << algebra << ", " << copies << " copies\n";
        os << "verdict " << verdict;
        if (k_star) os << " (k* = " << *k_star << ")";
        if (!budget_reason.empty()) os << ": " << budget_reason;
        os << "\n";
        for (std::size_t k = 0; k < levels.size(); ++k) {
            os << "N" << k << " (" << levels[k].generated << " generated):";
            for (const auto& m : levels[k].members) os << " " << m.label.str();
            os << "\n";
        }
        os << "relations:\n";
        for (const auto& r : relations) os << "  [" << kind_name(r.kind) << "] " << r.str() << "\n";
        os << "expressions:\n";
        for (const auto& e : expressions) os << "  " << e.str() << "\n";
        return os.str();
    }
};

namespace detail {

inline std::string pair_label(const NestedLabel& a, const NestedLabel& b) { return "[" + a.str() + "," + b.str() + "]"; }

// Pairs of intermediates for the first level, one orientation each: cyclic
// successors first ((12,23), (23,13), (13,12) for three copies), then other
// distinct subsets, then same subset with different families.
inline std::vector<std::pair<int, int>> first_level_pairs(const std::vector<ClosureMember>& n0, int npairs) {
    struct Key {
        int cls, ri, rj, pi, pj;
        bool operator<(const Key& o) const {
            return std::tie(cls, ri, rj, pi, pj) < std::tie(o.cls, o.ri, o.rj, o.pi, o.pj);
        }
    };
    std::vector<std::pair<Key, std::pair<int, int>>> all;
    for (int i = 0; i < static_cast<int>(n0.size()); ++i)
        for (int j = 0; j < static_cast<int>(n0.size()); ++j) {
            if (i == j) continue;
            int ri = i / npairs, pi = i % npairs, rj = j / npairs, pj = j % npairs;
            int cls = pj == (pi + 1) % npairs ? 0 : (pi != pj ? 1 : 2);
            all.push_back({{cls, ri, rj, pi, pj}, {i, j}});
        }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, int>> out;
    std::set<std::pair<int, int>> seen;
    for (const auto& [k, ij] : all)
        if (seen.insert(std::minmax(ij.first, ij.second)).second) out.push_back(ij);
    return out;
}

}  // namespace detail

// Closure search over two-index intermediate Casimirs of the given families.
class ClosureEngine {
public:
    // Families are operators in copy 1; their intermediates come from X_i -> X_i^[S].
    ClosureEngine(const LieAlgebra& L, const std::vector<NCPoly>& families, ClosureConfig cfg)
        : ClosureEngine(L, static_cast<int>(families.size()), operator_intermediates(families), std::move(cfg)) {}

    ClosureEngine(const LieAlgebra& L, int nfamilies, IntermediateFn build, ClosureConfig cfg)
        : L_(L), cfg_(std::move(cfg)), U_(L, cfg_.copies, UeaOptions{cfg_.budget_terms}), nfamilies_(nfamilies) {
        if (cfg_.copies < 2) throw std::invalid_argument("closure needs at least two copies");
        if (cfg_.depth_limit < 0) throw std::invalid_argument("depth limit must be >= 0");
        pairs_ = pair_subsets(cfg_.copies);
        ClosureLevel n0;
        for (int r = 0; r < nfamilies_; ++r)
            for (const auto& S : pairs_) n0.members.push_back({NestedLabel{{{r + 1, S}}}, build(U_, r, S)});
        n0.generated = static_cast<int>(n0.members.size());
        levels_.push_back(std::move(n0));
        std::vector<NCPoly> check;
        for (const auto& m : levels_[0].members) check.push_back(m.value);
        ring_ = cfg_.ring == RingKind::casimirs ? casimir_ring(U_, nfamilies_, build, check) : central_generator_ring(U_);
    }

    const Uea& uea() const { return U_; }
    const CentralRing& ring() const { return ring_; }
    const std::vector<ClosureLevel>& levels() const { return levels_; }

    ClosureReport run() {
        ClosureReport rep;
        rep.algebra = L_.name();
        rep.copies = cfg_.copies;
        for (int i = 0; i < ring_.size(); ++i) rep.ring.emplace_back(ring_.symbols[i], ring_.values[i]);
        try {
            record_ring_relations(rep);
            for (int k = 0;; ++k) {
                if (k + 1 > cfg_.depth_limit) {
                    rep.verdict = "budget-exceeded";
                    rep.budget_reason = "depth limit " + std::to_string(cfg_.depth_limit) + " reached";
                    break;
                }
                auto cands = next_candidates(k);
                if (k == 0 && cands.empty()) {
                    rep.verdict = "abelian";
                    rep.k_star = 0;
                    express_all_pairs(rep, 0);
                    break;
                }
                build_level(rep, k + 1, cands);
                if (closes_at(rep, k, cands)) {
                    levels_.pop_back();  // the test level is not part of the closed set
                    rep.k_star = k;
                    rep.verdict = "closes-at-depth-" + std::to_string(k);
                    break;
                }
            }
        } catch (const BudgetExceeded& e) {
            rep.verdict = "budget-exceeded";
            rep.budget_reason = e.what();
            rep.k_star.reset();
        } catch (const std::bad_alloc&) {
            rep.verdict = "budget-exceeded";
            rep.budget_reason = "out of memory";
            rep.k_star.reset();
        }
        rep.levels = levels_;
        rep.expressions.clear();
        for (const auto& [key, ex] : expressions_) rep.expressions.push_back(ex);
        std::sort(rep.expressions.begin(), rep.expressions.end(),
                  [&](const Expression& a, const Expression& b) { return order_.at(a.lhs_label) < order_.at(b.lhs_label); });
        return rep;
    }

    // Element for any nested label over the intermediates.
    NCPoly value_of(const NestedLabel& label) const {
        NCPoly v = n0_value(label.entries.back());
        for (int k = static_cast<int>(label.entries.size()) - 2; k >= 0; --k)
            v = U_.commutator(n0_value(label.entries[k]), v);
        return v;
    }

private:
    struct Candidate {
        NestedLabel label;
        NCPoly value;
        int outer;  // index into N0
        int inner;  // index into N_k
    };

    LieAlgebra L_;
    ClosureConfig cfg_;
    Uea U_;
    int nfamilies_;
    std::vector<CopySet> pairs_;
    CentralRing ring_;
    std::vector<ClosureLevel> levels_;
    std::map<std::string, Expression> expressions_;
    std::map<std::string, int> order_;
    std::set<std::string> failed_at_;  // "label@k"

    void say(const std::string& msg) const {
        if (cfg_.progress) cfg_.progress(msg);
    }

    NCPoly n0_value(const std::pair<int, CopySet>& e) const {
        for (const auto& m : levels_.front().members)
            if (m.label.entries.front() == e) return m.value;
        throw std::invalid_argument("label refers to an unknown intermediate Casimir");
    }

    std::vector<LabeledElement> labeled(const std::vector<ClosureMember>& ms) const {
        std::vector<LabeledElement> out;
        for (const auto& m : ms) out.push_back({m.label.str(), m.value});
        return out;
    }

    std::vector<LabeledElement> union_upto(int k) const {
        std::vector<LabeledElement> out;
        for (int a = 0; a <= k && a < static_cast<int>(levels_.size()); ++a) {
            auto l = labeled(levels_[a].members);
            out.insert(out.end(), l.begin(), l.end());
        }
        return out;
    }

    void record_ring_relations(ClosureReport& rep) {
        if (cfg_.ring != RingKind::casimirs) return;
        // total Casimir against two- and one-index ones, with rational coefficients
        CentralRing none = make_central_ring(U_, {}, {}, {});
        const int npairs = static_cast<int>(pairs_.size());
        for (int r = 0; r < nfamilies_; ++r) {
            std::vector<LabeledElement> elems;
            int per = U_.copies() + 1;
            elems.push_back({ring_.symbols[r * per + U_.copies()], ring_.values[r * per + U_.copies()]});
            for (int p = 0; p < npairs; ++p) {
                const auto& m = levels_[0].members[r * npairs + p];
                elems.push_back({m.label.str(), m.value});
            }
            for (int a = 0; a < U_.copies(); ++a) elems.push_back({ring_.symbols[r * per + a], ring_.values[r * per + a]});
            for (auto& rel : find_relations(U_, elems, none, 0, cfg_.solver_entries).relations) {
                for (auto& t : rel.terms) t.coefficient = CommPoly::constant(ring_.symbols, t.coefficient.terms().begin()->second);
                rep.relations.push_back(std::move(rel));
            }
        }
    }

    std::vector<Candidate> next_candidates(int k) {
        std::vector<Candidate> out;
        const auto& n0 = levels_[0].members;
        const auto& nk = levels_[k].members;
        std::uint64_t level_terms = 0;
        auto push = [&](int i, int j) {
            NCPoly v = U_.commutator(n0[i].value, nk[j].value);
            if (v.is_zero()) return;
            level_terms += v.size();
            // the per-element cap alone lets a wide level grow without bound
            if (cfg_.budget_terms && level_terms > cfg_.budget_terms)
                throw BudgetExceeded("depth " + std::to_string(k + 1) + " commutators exceed " +
                                     std::to_string(cfg_.budget_terms) + " terms in total");
            out.push_back({NestedLabel::bracket(n0[i].label, nk[j].label), std::move(v), i, j});
        };
        if (k == 0) {
            for (const auto& [i, j] : detail::first_level_pairs(n0, static_cast<int>(pairs_.size()))) push(i, j);
        } else {
            for (int j = 0; j < static_cast<int>(nk.size()); ++j)
                for (int i = 0; i < static_cast<int>(n0.size()); ++i) push(i, j);
        }
        say("depth " + std::to_string(k + 1) + ": " + std::to_string(out.size()) + " nonzero commutators, " +
            std::to_string(level_terms) + " terms");
        return out;
    }

    void build_level(ClosureReport& rep, int level, const std::vector<Candidate>& cands) {
        std::vector<LabeledElement> elems;
        for (const auto& c : cands) elems.push_back({c.label.str(), c.value});
        auto found = find_relations(U_, elems, ring_, cfg_.relation_c_deg, cfg_.solver_entries);
        std::set<int> pruned(found.dependent.begin(), found.dependent.end());
        for (auto& r : found.relations) rep.relations.push_back(std::move(r));
        std::vector<int> survivors;
        for (int i = 0; i < static_cast<int>(cands.size()); ++i)
            if (!pruned.count(i)) survivors.push_back(i);
        ClosureLevel lv;
        lv.generated = static_cast<int>(cands.size());
        bool field = cfg_.g_deg == 1 && ring_.slot_bound() && ring_.size() > 0 && ring_.size() <= ExpressOptions{}.field_max_symbols;
        if (field && !survivors.empty()) {
            // drop survivors in the span, over the field of central fractions,
            // of lower levels and earlier survivors
            auto basis = union_upto(level - 1);
            const int nlow = static_cast<int>(basis.size());
            for (int i : survivors) basis.push_back(elems[i]);
            std::vector<NCPoly> vals;
            for (const auto& b : basis) vals.push_back(b.value);
            FieldSolver fs(U_, ring_.slots, ring_.symbols, vals);
            std::set<int> indep(fs.independent().begin(), fs.independent().end());
            std::vector<int> kept_surv;
            for (std::size_t s = 0; s < survivors.size(); ++s) {
                int b = nlow + static_cast<int>(s);
                if (indep.count(b)) {
                    kept_surv.push_back(survivors[s]);
                    continue;
                }
                std::vector<LabeledElement> sub(basis.begin(), basis.begin() + b);
                Expresser ex(U_, sub, ring_, 1, std::max(cfg_.c_deg, 64), true);
                auto e = ex.express(elems[survivors[s]].value, elems[survivors[s]].label);
                if (!e) {
                    kept_surv.push_back(survivors[s]);
                    continue;
                }
                Relation rel{e->projective() ? RelationKind::projective_expression : RelationKind::central_coefficient, {}};
                rel.terms.push_back({e->multiplier, e->lhs_label});
                for (const auto& t : e->terms) rel.terms.push_back({-t.coefficient, t.factors.front()});
                if (std::all_of(rel.terms.begin(), rel.terms.end(),
                                [](const RelationTerm& t) { return detail::all_constant(t.coefficient); }))
                    rel.kind = RelationKind::linear;
                rep.relations.push_back(std::move(rel));
            }
            survivors = kept_surv;
        }
        for (int i : survivors) lv.members.push_back({cands[i].label, cands[i].value});
        std::string names;
        for (const auto& m : lv.members) names += " " + m.label.str();
        say("N" + std::to_string(level) + ": " + std::to_string(lv.generated) + " generated, kept" + names);
        levels_.push_back(std::move(lv));
    }

    bool try_express(Expresser& ex, const std::string& label, const NCPoly& target, int k) {
        if (expressions_.count(label)) return true;
        if (!order_.count(label)) order_[label] = static_cast<int>(order_.size());
        auto e = ex.express(target, label);
        if (!e) {
            say("  not expressible at depth " + std::to_string(k) + ": " + label);
            return false;
        }
        expressions_.emplace(label, std::move(*e));
        return true;
    }

    // All [N_a, N_b] with a <= b <= k, distinct members, expressible over N_0..N_k.
    bool closes_at(ClosureReport&, int k, const std::vector<Candidate>& cands) {
        auto basis = union_upto(k);
        Expresser ex(U_, basis, ring_, cfg_.g_deg, cfg_.c_deg, cfg_.projective,
                     ExpressOptions{0, cfg_.solver_entries, 4});
        const auto& n0 = levels_[0].members;
        const auto& nk = levels_[k].members;
        // [N0, N_k] first: these are the next-level candidates
        if (k > 0) {
            std::map<std::pair<int, int>, const Candidate*> cand_of;
            for (const auto& c : cands) cand_of[{c.outer, c.inner}] = &c;
            for (int j = 0; j < static_cast<int>(nk.size()); ++j)
                for (int i = 0; i < static_cast<int>(n0.size()); ++i) {
                    auto it = cand_of.find({i, j});
                    NCPoly v = it != cand_of.end() ? it->second->value : NCPoly{};
                    if (!try_express(ex, detail::pair_label(n0[i].label, nk[j].label), v, k)) return false;
                }
        }
        return express_pairs(ex, k);
    }

    bool express_pairs(Expresser& ex, int k) {
        for (int a = 0; a <= k; ++a)
            for (int b = a; b <= k; ++b) {
                const auto& na = levels_[a].members;
                const auto& nb = levels_[b].members;
                for (int i = 0; i < static_cast<int>(na.size()); ++i)
                    for (int j = a == b ? i + 1 : 0; j < static_cast<int>(nb.size()); ++j) {
                        std::string label = detail::pair_label(na[i].label, nb[j].label);
                        if (expressions_.count(label)) continue;
                        if (!try_express(ex, label, U_.commutator(na[i].value, nb[j].value), k)) return false;
                    }
            }
        return true;
    }

    void express_all_pairs(ClosureReport&, int k) {
        auto basis = union_upto(k);
        Expresser ex(U_, basis, ring_, cfg_.g_deg, cfg_.c_deg, cfg_.projective, ExpressOptions{0, cfg_.solver_entries, 4});
        express_pairs(ex, k);
    }
};

inline ClosureReport close_algebra(const LieAlgebra& L, const std::vector<NCPoly>& families, const ClosureConfig& cfg) {
    ClosureEngine engine(L, families, cfg);
    return engine.run();
}

}  // namespace casimir
