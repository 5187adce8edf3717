#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace casimir {

// Sparse vector: strictly increasing column indices, no zero entries.
using SparseVec = std::vector<std::pair<int, Rational>>;

inline SparseVec sparse_axpy(const SparseVec& x, const Rational& a, const SparseVec& y) {
    // x + a*y
    SparseVec out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.push_back(x[i++]);
        } else if (i == x.size() || y[j].first < x[i].first) {
            out.emplace_back(y[j].first, a * y[j].second);
            ++j;
        } else {
            Rational v = x[i].second + a * y[j].second;
            if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

inline Rational sparse_get(const SparseVec& v, int col) {
    auto it = std::lower_bound(v.begin(), v.end(), col,
                               [](const std::pair<int, Rational>& e, int c) { return e.first < c; });
    if (it != v.end() && it->first == col) return it->second;
    return Rational();
}

// Scale to coprime integers with a positive first entry.
inline SparseVec primitive_integer(const SparseVec& v) {
    if (v.empty()) return v;
    mpz_class l = 1, g = 0;
    for (const auto& [c, r] : v) {
        mpz_class d = r.denominator();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    std::vector<mpz_class> ints;
    ints.reserve(v.size());
    for (const auto& [c, r] : v) {
        mpz_class n = r.numerator() * (l / r.denominator());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        ints.push_back(std::move(n));
    }
    if (ints.front() < 0) g = -g;
    SparseVec out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i].first, Rational(mpz_class(ints[i] / g)));
    return out;
}

// Incremental reduced row echelon form over the rationals. Pivot of a row is
// its smallest column; rows stay fully reduced with unit pivots.
class Echelon {
public:
    explicit Echelon(int ncols) : ncols_(ncols), pivot_of_col_(ncols, -1) {}

    int ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    bool is_pivot(int col) const { return pivot_of_col_[col] >= 0; }

    SparseVec reduce(SparseVec v) const {
        // rows are fully reduced, so one left-to-right pass suffices
        std::size_t pos = 0;
        while (pos < v.size()) {
            int c = v[pos].first;
            int r = pivot_of_col_[c];
            if (r < 0) {
                ++pos;
                continue;
            }
            Rational a = -v[pos].second;
            v = sparse_axpy(v, a, rows_[r]);
            // entries before pos are unaffected since the pivot row starts at c
        }
        return v;
    }

    // Returns true if v was independent of the current rows.
    bool insert(const SparseVec& v0) {
        SparseVec v = reduce(v0);
        if (v.empty()) return false;
        Rational inv = v.front().second.inverse();
        for (auto& e : v) e.second *= inv;
        int c = v.front().first;
        for (auto& row : rows_) {
            Rational a = sparse_get(row, c);
            if (!a.is_zero()) row = sparse_axpy(row, -a, v);
        }
        pivot_of_col_[c] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(v));
        entries_ += rows_.back().size();
        if (entry_budget_ && entries_ > entry_budget_) throw BudgetExceeded("solver entry budget exceeded");
        return true;
    }

    void set_entry_budget(std::uint64_t b) { entry_budget_ = b; }

    // Rows ordered by pivot column.
    std::vector<SparseVec> rows() const {
        std::vector<SparseVec> out;
        for (int c = 0; c < ncols_; ++c)
            if (pivot_of_col_[c] >= 0) out.push_back(rows_[pivot_of_col_[c]]);
        return out;
    }

    std::vector<int> pivots() const {
        std::vector<int> out;
        for (int c = 0; c < ncols_; ++c)
            if (pivot_of_col_[c] >= 0) out.push_back(c);
        return out;
    }

    // Basis of {x : row.x = 0 for all rows}, itself in reduced echelon form.
    std::vector<SparseVec> nullspace() const {
        std::vector<SparseVec> raw;
        for (int f = 0; f < ncols_; ++f) {
            if (pivot_of_col_[f] >= 0) continue;
            std::map<int, Rational> acc;
            acc[f] = Rational(1);
            for (const auto& row : rows_) {
                Rational a = sparse_get(row, f);
                if (!a.is_zero()) acc[row.front().first] = -a;
            }
            raw.emplace_back(acc.begin(), acc.end());
        }
        Echelon e(ncols_);
        for (const auto& v : raw) e.insert(v);
        return e.rows();
    }

private:
    int ncols_;
    std::vector<int> pivot_of_col_;
    std::vector<SparseVec> rows_;
    std::uint64_t entries_ = 0;
    std::uint64_t entry_budget_ = 0;
};

inline int rank_of(const std::vector<SparseVec>& rows, int ncols) {
    Echelon e(ncols);
    for (const auto& r : rows) e.insert(r);
    return e.rank();
}

}  // namespace casimir
