#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "comm_poly.hpp"
#include "errors.hpp"
#include "lie_algebra.hpp"
#include "ncpoly.hpp"

namespace casimir {

// (copy, index), both 1-based; ordered copy-major.
struct GeneratorId {
    int copy = 1;
    int index = 1;
    friend bool operator<(const GeneratorId& a, const GeneratorId& b) {
        return a.copy != b.copy ? a.copy < b.copy : a.index < b.index;
    }
    friend bool operator==(const GeneratorId& a, const GeneratorId& b) {
        return a.copy == b.copy && a.index == b.index;
    }
};

struct UeaOptions {
    std::uint64_t budget_terms = 5'000'000;
    std::size_t cache_limit = 4'000'000;
};

// Enveloping algebra of n commuting copies of a Lie algebra. Normal ordering
// works copy by copy: generators of different copies commute, so a product of
// monomials factors into independent single-copy products, each memoized.
class Uea {
public:
    Uea(LieAlgebra L, int copies, UeaOptions opts = {})
        : L_(std::move(L)), copies_(copies), d_(L_.dim()), opts_(opts) {
        if (copies_ < 1) throw std::invalid_argument("copies must be >= 1");
        if (copies_ * d_ > kMaxGenerators)
            throw std::invalid_argument("too many generators (copies x dim > " + std::to_string(kMaxGenerators) + ")");
        central_.assign(d_, false);
        for (int i = 0; i < d_; ++i) central_[i] = L_.is_central(i + 1);
        structure_.resize(static_cast<std::size_t>(d_) * d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                for (const auto& t : L_.bracket(i + 1, j + 1)) structure_[i * d_ + j].emplace_back(t.k - 1, t.c);
    }

    const LieAlgebra& algebra() const { return L_; }
    int copies() const { return copies_; }
    int dim() const { return d_; }
    int num_generators() const { return copies_ * d_; }
    const UeaOptions& options() const { return opts_; }
    void set_budget_terms(std::uint64_t b) { opts_.budget_terms = b; }

    int slot(const GeneratorId& g) const {
        if (g.copy < 1 || g.copy > copies_ || g.index < 1 || g.index > d_)
            throw IndexOutOfRange("generator id out of range");
        return (g.copy - 1) * d_ + (g.index - 1);
    }
    GeneratorId id_of(int slot) const { return {slot / d_ + 1, slot % d_ + 1}; }
    bool is_central_slot(int slot) const { return central_[slot % d_]; }

    NCPoly one() const { return NCPoly::constant(Rational(1)); }
    NCPoly constant(const Rational& c) const { return NCPoly::constant(c); }

    NCPoly generator(int index, int copy = 1) const {
        Monomial m;
        m.e[slot({copy, index})] = 1;
        return NCPoly::monomial(m);
    }

    // X_index^[copy] raised to an integer power; negative powers only for central generators.
    NCPoly generator_power(int index, int copy, int exponent) const {
        int s = slot({copy, index});
        if (exponent < 0 && !is_central_slot(s)) throw std::domain_error("cannot invert a non-central generator");
        if (exponent > 127 || exponent < -127) throw BudgetExceeded("exponent overflow");
        Monomial m;
        m.e[s] = static_cast<std::int8_t>(exponent);
        return NCPoly::monomial(m);
    }

    bool is_central_monomial(const Monomial& m) const {
        for (int s = 0; s < num_generators(); ++s)
            if (m.e[s] && !is_central_slot(s)) return false;
        return true;
    }

    // True if every term is supported on central generators only.
    bool is_central_element(const NCPoly& p) const {
        for (const auto& t : p.terms())
            if (!is_central_monomial(t.first)) return false;
        return true;
    }

    NCPoly multiply(const NCPoly& p, const NCPoly& q) const {
        std::lock_guard<std::mutex> lock(mu_);
        maybe_trim_caches();
        if (p.is_zero() || q.is_zero()) return NCPoly();
        TermAccumulator acc(std::min<std::size_t>(p.size() * q.size(), 1u << 16));
        std::size_t n = 0;
        for (const auto& [s, cs] : p.terms())
            for (const auto& [t, ct] : q.terms()) {
                mul_monomials(s, t, cs * ct, acc);
                if ((++n & 1023) == 0) check_budget(acc.size());
            }
        check_budget(acc.size());
        return NCPoly(acc.take_sorted());
    }

    NCPoly commutator(const NCPoly& p, const NCPoly& q) const {
        std::lock_guard<std::mutex> lock(mu_);
        maybe_trim_caches();
        if (p.is_zero() || q.is_zero()) return NCPoly();
        std::vector<std::uint32_t> mq;
        mq.reserve(q.size());
        for (const auto& t : q.terms()) mq.push_back(active_copies(t.first));
        TermAccumulator acc(1u << 12);
        std::size_t n = 0;
        for (const auto& [s, cs] : p.terms()) {
            std::uint32_t ms = active_copies(s);
            if (!ms) continue;
            for (std::size_t k = 0; k < q.size(); ++k) {
                if (!(ms & mq[k])) continue;
                const auto& [t, ct] = q.terms()[k];
                Rational c = cs * ct;
                mul_monomials(s, t, c, acc);
                mul_monomials(t, s, -c, acc);
                if ((++n & 1023) == 0) check_budget(acc.size());
            }
        }
        check_budget(acc.size());
        return NCPoly(acc.take_sorted());
    }

    NCPoly power(const NCPoly& p, int k) const {
        if (k < 0) return power(inverse(p), -k);
        NCPoly r = one();
        for (int i = 0; i < k; ++i) r = multiply(r, p);
        return r;
    }

    // Inverse of a single central monomial term (localization).
    NCPoly inverse(const NCPoly& p) const {
        if (p.size() != 1 || !is_central_monomial(p.terms()[0].first))
            throw std::domain_error("only single central monomials are invertible");
        Monomial m;
        for (int s = 0; s < kMaxGenerators; ++s) m.e[s] = static_cast<std::int8_t>(-p.terms()[0].first.e[s]);
        return NCPoly::monomial(m, p.terms()[0].second.inverse());
    }

    // Product of generators in the given order.
    NCPoly word(const std::vector<GeneratorId>& w) const {
        NCPoly r = one();
        for (const auto& g : w) r = multiply(r, generator(g.index, g.copy));
        return r;
    }

    // Symmetrization: each monomial maps to the average of its distinct orderings.
    // P is over x_1..x_d (variable position = generator index).
    NCPoly symmetrize(const CommPoly& P, int copy = 1) const {
        if (P.nvars() != d_) throw std::invalid_argument("symmetrize expects d variables");
        std::vector<NCPoly> images;
        for (int i = 1; i <= d_; ++i) images.push_back(generator(i, copy));
        return substitute(P, images);
    }

    // Template monomials expand as the symmetrized average of the assigned elements.
    NCPoly substitute(const CommPoly& tmpl, const std::vector<NCPoly>& assignment) const {
        if (static_cast<int>(assignment.size()) != tmpl.nvars()) throw UnassignedSymbol("template arity mismatch");
        NCPoly out;
        for (const auto& [e, c] : tmpl.terms()) {
            std::vector<int> letters;
            for (int i = 0; i < tmpl.nvars(); ++i)
                for (int k = 0; k < e[i]; ++k) letters.push_back(i);
            NCPoly sum;
            long count = 0;
            do {
                NCPoly prod = one();
                for (int v : letters) prod = multiply(prod, assignment[v]);
                sum += prod;
                ++count;
            } while (std::next_permutation(letters.begin(), letters.end()));
            out += sum * (c / Rational(count));
        }
        return out;
    }

    NCPoly substitute(const CommPoly& tmpl, const std::map<std::string, NCPoly>& assignment) const {
        std::vector<NCPoly> a;
        for (const auto& v : tmpl.vars()) {
            auto it = assignment.find(v);
            if (it == assignment.end()) throw UnassignedSymbol("unassigned template symbol: " + v);
            a.push_back(it->second);
        }
        return substitute(tmpl, a);
    }

    // Drop terms supported entirely on the given slots (constants included).
    NCPoly reduce_mod_center(const NCPoly& p, const std::set<int>& central_slots) const {
        TermList out;
        for (const auto& t : p.terms()) {
            bool pure = true;
            for (int s = 0; s < num_generators() && pure; ++s)
                if (t.first.e[s] && !central_slots.count(s)) pure = false;
            if (!pure) out.push_back(t);
        }
        return NCPoly(std::move(out));
    }

    NCPoly reduce_mod_center(const NCPoly& p) const {
        std::set<int> c;
        for (int s = 0; s < num_generators(); ++s)
            if (is_central_slot(s)) c.insert(s);
        return reduce_mod_center(p, c);
    }

    // [phi_i, phi_j] == scale * C_ij^k phi_k for every i<j.
    bool verify_embedding(const LieAlgebra& target, const std::vector<NCPoly>& phi,
                          const std::optional<NCPoly>& scale = std::nullopt) const {
        if (static_cast<int>(phi.size()) != target.dim()) return false;
        for (int i = 1; i <= target.dim(); ++i)
            for (int j = i + 1; j <= target.dim(); ++j) {
                NCPoly rhs;
                for (const auto& t : target.bracket(i, j)) rhs += phi[t.k - 1] * t.c;
                if (scale) rhs = multiply(*scale, rhs);
                if (commutator(phi[i - 1], phi[j - 1]) != rhs) return false;
            }
        return true;
    }

    // Apply the algebra map sending source slot s to images[s] (source terms are
    // read in PBW slot order); negative exponents need invertible images.
    NCPoly map_generators(const NCPoly& p, const std::vector<NCPoly>& images) const {
        NCPoly out;
        std::map<std::pair<int, int>, NCPoly> powers;
        auto pw = [&](int s, int k) -> const NCPoly& {
            auto key = std::make_pair(s, k);
            auto it = powers.find(key);
            if (it == powers.end()) it = powers.emplace(key, power(images.at(s), k)).first;
            return it->second;
        };
        for (const auto& [m, c] : p.terms()) {
            NCPoly prod = constant(c);
            for (int s = 0; s < kMaxGenerators; ++s)
                if (m.e[s]) prod = multiply(prod, pw(s, m.e[s]));
            out += prod;
        }
        return out;
    }

    // Canonical text: terms by ascending degree, then larger exponents on earlier
    // generators first; generators as X{index}^[{copy}] with ^{exp} when exp != 1.
    std::string render(const NCPoly& p) const {
        if (p.is_zero()) return "0";
        std::vector<const Term*> order;
        for (const auto& t : p.terms()) order.push_back(&t);
        std::sort(order.begin(), order.end(), [](const Term* a, const Term* b) { return canonical_less(a->first, b->first); });
        std::ostringstream os;
        bool first = true;
        for (const Term* t : order) {
            Rational c = t->second;
            if (first) {
                if (c.sign() < 0) {
                    os << "-";
                    c = -c;
                }
            } else {
                os << (c.sign() < 0 ? " - " : " + ");
                if (c.sign() < 0) c = -c;
            }
            first = false;
            if (t->first.is_one()) {
                os << c.str();
                continue;
            }
            if (!c.is_one()) os << c.str() << "*";
            os << render_monomial(t->first);
        }
        return os.str();
    }

    std::string render_monomial(const Monomial& m) const {
        std::ostringstream os;
        bool first = true;
        for (int s = 0; s < num_generators(); ++s) {
            if (!m.e[s]) continue;
            if (!first) os << "*";
            first = false;
            GeneratorId g = id_of(s);
            os << "X" << g.index << "^[" << g.copy << "]";
            if (m.e[s] != 1) os << "^" << static_cast<int>(m.e[s]);
        }
        return first ? std::string("1") : os.str();
    }

    static bool canonical_less(const Monomial& a, const Monomial& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.e > b.e;
    }

    std::size_t cache_entries() const { return gen_cache_.size() + pair_cache_.size(); }

private:
    struct GenKey {
        Monomial m;
        int j;
        friend bool operator==(const GenKey& a, const GenKey& b) { return a.j == b.j && a.m == b.m; }
    };
    struct GenKeyHash {
        std::size_t operator()(const GenKey& k) const { return MonomialHash()(k.m) ^ (static_cast<std::size_t>(k.j) * 0x9e3779b97f4a7c15ull); }
    };
    struct PairKey {
        Monomial a, b;
        friend bool operator==(const PairKey& x, const PairKey& y) { return x.a == y.a && x.b == y.b; }
    };
    struct PairKeyHash {
        std::size_t operator()(const PairKey& k) const {
            return MonomialHash()(k.a) * 31 + MonomialHash()(k.b);
        }
    };

    LieAlgebra L_;
    int copies_;
    int d_;
    UeaOptions opts_;
    std::vector<bool> central_;
    std::vector<std::vector<std::pair<int, Rational>>> structure_;  // [i*d+j] -> (k, c), 0-based

    mutable std::mutex mu_;
    mutable std::unordered_map<GenKey, TermList, GenKeyHash> gen_cache_;
    mutable std::unordered_map<PairKey, TermList, PairKeyHash> pair_cache_;

    void check_budget(std::size_t n) const {
        if (n > opts_.budget_terms) throw BudgetExceeded("term budget exceeded (" + std::to_string(n) + " terms)");
    }

    void maybe_trim_caches() const {
        if (gen_cache_.size() + pair_cache_.size() > opts_.cache_limit) {
            gen_cache_.clear();
            pair_cache_.clear();
        }
    }

    std::uint32_t active_copies(const Monomial& m) const {
        std::uint32_t mask = 0;
        for (int c = 0; c < copies_; ++c)
            for (int i = 0; i < d_; ++i)
                if (m.e[c * d_ + i] && !central_[i]) {
                    mask |= 1u << c;
                    break;
                }
        return mask;
    }

    // Highest / lowest non-central local index with positive exponent at offset base.
    int last_nc(const Monomial& m, int base) const {
        for (int i = d_ - 1; i >= 0; --i)
            if (!central_[i] && m.e[base + i]) return i;
        return -1;
    }
    int first_nc(const Monomial& m, int base) const {
        for (int i = 0; i < d_; ++i)
            if (!central_[i] && m.e[base + i]) return i;
        return d_;
    }

    void split_local(const Monomial& u, Monomial& cpart, Monomial& npart) const {
        cpart = Monomial{};
        npart = Monomial{};
        for (int i = 0; i < d_; ++i) {
            if (central_[i])
                cpart.e[i] = u.e[i];
            else
                npart.e[i] = u.e[i];
        }
    }

    static void bump(Monomial& m, int i, int by) {
        int v = m.e[i] + by;
        if (v > 127 || v < -127) throw BudgetExceeded("exponent overflow");
        m.e[i] = static_cast<std::int8_t>(v);
    }

    // u * x_j for a local monomial u without central factors.
    const TermList& mulgen(const Monomial& u, int j) const {
        GenKey key{u, j};
        auto it = gen_cache_.find(key);
        if (it != gen_cache_.end()) return it->second;
        TermList res;
        int k = central_[j] ? -1 : last_nc(u, 0);
        if (k <= j) {
            Monomial m = u;
            bump(m, j, 1);
            res.emplace_back(m, Rational(1));
        } else {
            // u x_j = (w x_j) x_k + w [x_k, x_j] with u = w x_k
            Monomial w = u;
            bump(w, k, -1);
            TermAccumulator acc;
            const TermList& A = mulgen(w, j);
            Monomial cp, np;
            for (const auto& [t, c] : A) {
                split_local(t, cp, np);
                const TermList& B = mulgen(np, k);
                for (const auto& [s, d] : B) acc.add(s + cp, c * d);
            }
            for (const auto& [l, cl] : structure_[k * d_ + j]) {
                if (central_[l]) {
                    Monomial m = w;
                    bump(m, l, 1);
                    acc.add(m, cl);
                } else {
                    const TermList& B = mulgen(w, l);
                    for (const auto& [s, d] : B) acc.add(s, cl * d);
                }
            }
            res = acc.take_sorted();
        }
        return gen_cache_.emplace(key, std::move(res)).first->second;
    }

    // nu * nv for local monomials without central factors.
    const TermList& mul_local(const Monomial& nu, const Monomial& nv) const {
        PairKey key{nu, nv};
        auto it = pair_cache_.find(key);
        if (it != pair_cache_.end()) return it->second;
        TermList res;
        int j = first_nc(nv, 0);
        if (j == d_ || last_nc(nu, 0) <= j) {
            res.emplace_back(nu + nv, Rational(1));
        } else {
            Monomial rest = nv;
            bump(rest, j, -1);
            TermAccumulator acc;
            const TermList& A = mulgen(nu, j);
            Monomial cp, np;
            for (const auto& [t, c] : A) {
                split_local(t, cp, np);
                if (rest.is_one() || last_nc(np, 0) <= first_nc(rest, 0)) {
                    acc.add(t + rest, c);
                    continue;
                }
                const TermList& B = mul_local(np, rest);
                for (const auto& [s, d] : B) acc.add(s + cp, c * d);
            }
            res = acc.take_sorted();
        }
        return pair_cache_.emplace(key, std::move(res)).first->second;
    }

    void mul_monomials(const Monomial& s, const Monomial& t, const Rational& c, TermAccumulator& acc) const {
        int reorder[kMaxGenerators];
        int nre = 0;
        for (int cp = 0; cp < copies_; ++cp) {
            int base = cp * d_;
            if (last_nc(s, base) > first_nc(t, base)) reorder[nre++] = cp;
        }
        Monomial base = s + t;
        if (nre == 0) {
            acc.add(base, c);
            return;
        }
        const TermList* lists[kMaxGenerators];
        for (int r = 0; r < nre; ++r) {
            int off = reorder[r] * d_;
            Monomial ls, lt;
            for (int i = 0; i < d_; ++i) {
                if (central_[i]) continue;
                ls.e[i] = s.e[off + i];
                lt.e[i] = t.e[off + i];
                base.e[off + i] = 0;
            }
            lists[r] = &mul_local(ls, lt);
        }
        expand(base, c, lists, reorder, nre, 0, acc);
    }

    void expand(const Monomial& base, const Rational& c, const TermList* const* lists, const int* reorder, int nre,
                int r, TermAccumulator& acc) const {
        if (r == nre) {
            acc.add(base, c);
            return;
        }
        int off = reorder[r] * d_;
        for (const auto& [m, k] : *lists[r]) {
            Monomial b = base;
            for (int i = 0; i < d_; ++i)
                if (m.e[i]) bump(b, off + i, m.e[i]);
            expand(b, c * k, lists, reorder, nre, r + 1, acc);
        }
    }
};

}  // namespace casimir
