#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace casimir::modp {

using u64 = std::uint64_t;

inline u64 mul(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }
inline u64 add(u64 a, u64 b, u64 p) {
    u64 s = a + b;
    return s >= p ? s - p : s;
}
inline u64 sub(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
inline u64 neg(u64 a, u64 p) { return a ? p - a : 0; }
inline u64 pow(u64 a, u64 e, u64 p) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mul(r, a, p);
        a = mul(a, a, p);
        e >>= 1;
    }
    return r;
}
inline u64 inv(u64 a, u64 p) {
    if (a == 0) throw std::domain_error("inverse of zero modulo prime");
    return pow(a, p - 2, p);
}
inline u64 from_int(long long v, u64 p) {
    long long r = v % static_cast<long long>(p);
    return static_cast<u64>(r < 0 ? r + static_cast<long long>(p) : r);
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (n % q == 0) return n == q;
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// i-th prime below 2^62, descending.
inline u64 prime(std::size_t i) {
    static std::mutex mu;
    static std::vector<u64> cache;
    std::lock_guard<std::mutex> lock(mu);
    u64 next = cache.empty() ? (1ull << 62) - 1 : cache.back() - 2;
    while (cache.size() <= i) {
        while (!is_prime(next)) next -= 2;
        cache.push_back(next);
        next -= 2;
    }
    return cache[i];
}

// Wang's reconstruction: n/d == a mod m with |n|, d <= sqrt(m/2).
inline std::optional<Rational> reconstruct(const mpz_class& a, const mpz_class& m) {
    mpz_class bound;
    mpz_class half = m / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    mpz_class r0 = m, r1 = a, t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        mpz_class t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
    if (g != 1) return std::nullopt;
    if (t1 < 0) {
        t1 = -t1;
        r1 = -r1;
    }
    return Rational(mpq_class(r1, t1));
}

// Reduced row echelon form mod p with dense rows; pivot = first nonzero column.
class Echelon {
public:
    Echelon(int ncols, u64 p) : ncols_(ncols), p_(p), pivot_row_(ncols, -1) {}

    int rank() const { return static_cast<int>(rows_.size()); }
    u64 prime() const { return p_; }

    // v is reduced in place; returns true if it was independent (and is now a row).
    bool insert(std::vector<u64> v) {
        reduce(v);
        int c = 0;
        while (c < ncols_ && v[c] == 0) ++c;
        if (c == ncols_) return false;
        u64 s = inv(v[c], p_);
        for (int k = c; k < ncols_; ++k)
            if (v[k]) v[k] = mul(v[k], s, p_);
        for (auto& row : rows_) {
            u64 a = row[c];
            if (!a) continue;
            for (int k = c; k < ncols_; ++k)
                if (v[k]) row[k] = sub(row[k], mul(a, v[k], p_), p_);
        }
        pivot_row_[c] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(v));
        return true;
    }

    bool insert_sparse(const std::vector<std::pair<int, u64>>& entries) {
        std::vector<u64> v(ncols_, 0);
        for (const auto& [c, a] : entries) v[c] = add(v[c], a, p_);
        return insert(std::move(v));
    }

    void reduce(std::vector<u64>& v) const {
        for (int c = 0; c < ncols_; ++c) {
            if (!v[c]) continue;
            int r = pivot_row_[c];
            if (r < 0) continue;
            u64 a = v[c];
            const auto& row = rows_[r];
            for (int k = c; k < ncols_; ++k)
                if (row[k]) v[k] = sub(v[k], mul(a, row[k], p_), p_);
        }
    }

    std::vector<int> pivots() const {
        std::vector<int> out;
        for (int c = 0; c < ncols_; ++c)
            if (pivot_row_[c] >= 0) out.push_back(c);
        return out;
    }

    // Rows in pivot order.
    std::vector<std::vector<u64>> rows() const {
        std::vector<std::vector<u64>> out;
        for (int c = 0; c < ncols_; ++c)
            if (pivot_row_[c] >= 0) out.push_back(rows_[pivot_row_[c]]);
        return out;
    }

    // Reduced echelon basis of the solution space of row.x = 0.
    std::vector<std::vector<u64>> nullspace() const {
        Echelon ns(ncols_, p_);
        for (int f = 0; f < ncols_; ++f) {
            if (pivot_row_[f] >= 0) continue;
            std::vector<u64> v(ncols_, 0);
            v[f] = 1;
            for (const auto& row : rows_) {
                int c = 0;
                while (!row[c]) ++c;
                if (row[f]) v[c] = neg(row[f], p_);
            }
            ns.insert(std::move(v));
        }
        return ns.rows();
    }

private:
    int ncols_;
    u64 p_;
    std::vector<int> pivot_row_;
    std::vector<std::vector<u64>> rows_;
};

}  // namespace casimir::modp

namespace casimir {

// Exact reduced echelon nullspace basis of a sparse rational system
// (rows are equations over ncols unknowns). Solved modulo word-size primes,
// lifted by Chinese remaindering and rational reconstruction, and accepted
// only after the candidate basis annihilates every row exactly.
inline std::vector<SparseVec> exact_nullspace(const std::vector<SparseVec>& rows, int ncols,
                                              std::uint64_t entry_budget = 100'000'000) {
    if (ncols == 0) return {};
    if (static_cast<std::uint64_t>(ncols) * static_cast<std::uint64_t>(ncols) > entry_budget)
        throw BudgetExceeded("linear system too large (" + std::to_string(ncols) + " unknowns)");
    std::vector<int> best_pivots;
    int best_rank = -1;
    std::vector<std::vector<mpz_class>> acc;  // residues lifted so far
    mpz_class modulus = 1;
    for (std::size_t pi = 0; pi < 64; ++pi) {
        modp::u64 p = modp::prime(pi);
        modp::Echelon E(ncols, p);
        bool bad = false;
        try {
            for (const auto& row : rows) {
                std::vector<std::pair<int, modp::u64>> e;
                e.reserve(row.size());
                for (const auto& [c, r] : row) e.emplace_back(c, r.mod(p));
                E.insert_sparse(e);
                if (E.rank() == ncols) break;
            }
        } catch (const std::domain_error&) {
            bad = true;
        }
        if (bad) continue;
        if (E.rank() == ncols) return {};
        auto ns = E.nullspace();
        modp::Echelon nsE(ncols, p);
        for (const auto& v : ns) nsE.insert(v);
        std::vector<int> piv = nsE.pivots();
        // a good prime has maximal rank; ties must agree on the pivot pattern
        if (E.rank() > best_rank) {
            best_rank = E.rank();
            best_pivots = piv;
            acc.assign(ns.size(), std::vector<mpz_class>(ncols));
            modulus = 1;
        } else if (E.rank() < best_rank || piv != best_pivots) {
            continue;
        }
        mpz_class mp(static_cast<unsigned long>(p));
        mpz_class inv_m;
        bool first = modulus == 1;
        if (!first) {
            mpz_class mm = modulus % mp;
            mpz_invert(inv_m.get_mpz_t(), mm.get_mpz_t(), mp.get_mpz_t());
        }
        for (std::size_t r = 0; r < ns.size(); ++r)
            for (int c = 0; c < ncols; ++c) {
                mpz_class a(static_cast<unsigned long>(ns[r][c]));
                if (first) {
                    acc[r][c] = a;
                } else {
                    // x = acc + modulus * ((a - acc) * modulus^-1 mod p)
                    mpz_class t = (a - acc[r][c]) * inv_m;
                    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), mp.get_mpz_t());
                    acc[r][c] += modulus * t;
                }
            }
        modulus *= mp;
        std::vector<SparseVec> cand;
        bool ok = true;
        for (std::size_t r = 0; r < ns.size() && ok; ++r) {
            SparseVec v;
            for (int c = 0; c < ncols && ok; ++c) {
                if (acc[r][c] == 0) continue;
                auto q = modp::reconstruct(acc[r][c], modulus);
                if (!q) ok = false;
                else v.emplace_back(c, *q);
            }
            cand.push_back(std::move(v));
        }
        if (!ok) continue;
        // exact check
        std::vector<std::vector<Rational>> dense(cand.size(), std::vector<Rational>(ncols));
        for (std::size_t r = 0; r < cand.size(); ++r)
            for (const auto& [c, q] : cand[r]) dense[r][c] = q;
        for (const auto& row : rows) {
            for (std::size_t r = 0; r < cand.size() && ok; ++r) {
                Rational s;
                for (const auto& [c, a] : row)
                    if (!dense[r][c].is_zero()) s += a * dense[r][c];
                if (!s.is_zero()) ok = false;
            }
            if (!ok) break;
        }
        if (ok) return cand;
    }
    throw BudgetExceeded("modular nullspace did not stabilize");
}

}  // namespace casimir
