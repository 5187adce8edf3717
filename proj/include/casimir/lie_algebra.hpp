#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace casimir {

struct StructureTerm {
    int k;  // 1-based
    Rational c;
    friend bool operator==(const StructureTerm& a, const StructureTerm& b) { return a.k == b.k && a.c == b.c; }
};

using BracketValue = std::vector<StructureTerm>;

struct BracketEntry {
    int i;
    int j;
    BracketValue terms;
};

struct JacobiFailure {
    int i, j, k;
    BracketValue residual;
};

class LieAlgebra {
public:
    LieAlgebra() = default;

    // Builds without checking Jacobi; index and duplicate errors still throw.
    static LieAlgebra unchecked(std::string name, int dim, const std::vector<BracketEntry>& entries) {
        if (dim < 1) throw ValidationError("dimension must be positive");
        LieAlgebra L;
        L.name_ = std::move(name);
        L.dim_ = dim;
        L.table_.assign(static_cast<std::size_t>(dim) * dim, {});
        std::set<std::pair<int, int>> seen;
        for (const auto& e : entries) {
            if (e.i < 1 || e.j < 1 || e.i > dim || e.j > dim)
                throw ValidationError("bracket index out of range: (" + std::to_string(e.i) + "," +
                                      std::to_string(e.j) + ")");
            if (e.i >= e.j) throw ValidationError("only i<j bracket entries are allowed");
            if (!seen.insert({e.i, e.j}).second)
                throw ValidationError("duplicate bracket entry (" + std::to_string(e.i) + "," +
                                      std::to_string(e.j) + ")");
            std::map<int, Rational> acc;
            for (const auto& t : e.terms) {
                if (t.k < 1 || t.k > dim) throw ValidationError("structure constant index out of range");
                acc[t.k] += t.c;
            }
            BracketValue v, neg;
            for (auto& [k, c] : acc) {
                if (c.is_zero()) continue;
                v.push_back({k, c});
                neg.push_back({k, -c});
            }
            L.table_[L.slot(e.i, e.j)] = std::move(v);
            L.table_[L.slot(e.j, e.i)] = std::move(neg);
        }
        L.central_.assign(dim, true);
        for (int i = 1; i <= dim; ++i)
            for (int j = 1; j <= dim; ++j)
                if (!L.table_[L.slot(i, j)].empty()) L.central_[i - 1] = false;
        return L;
    }

    // Validating constructor: throws ValidationError on a Jacobi failure.
    static LieAlgebra make(std::string name, int dim, const std::vector<BracketEntry>& entries) {
        LieAlgebra L = unchecked(std::move(name), dim, entries);
        auto diag = L.validate();
        if (!diag.empty()) {
            const auto& f = diag.front();
            throw ValidationError("Jacobi identity fails for triple (" + std::to_string(f.i) + "," +
                                  std::to_string(f.j) + "," + std::to_string(f.k) + ")");
        }
        return L;
    }

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }

    const BracketValue& bracket(int i, int j) const {
        if (i < 1 || j < 1 || i > dim_ || j > dim_)
            throw IndexOutOfRange("generator index out of range");
        return table_[slot(i, j)];
    }

    bool is_central(int i) const { return central_.at(i - 1); }

    std::vector<int> center() const {
        std::vector<int> out;
        for (int i = 1; i <= dim_; ++i)
            if (central_[i - 1]) out.push_back(i);
        return out;
    }

    bool is_abelian() const { return static_cast<int>(center().size()) == dim_; }

    // Upper-triangle entries with nonzero brackets.
    std::vector<BracketEntry> entries() const {
        std::vector<BracketEntry> out;
        for (int i = 1; i <= dim_; ++i)
            for (int j = i + 1; j <= dim_; ++j)
                if (!bracket(i, j).empty()) out.push_back({i, j, bracket(i, j)});
        return out;
    }

    // [[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj] for every i<j<k.
    std::vector<JacobiFailure> validate() const {
        std::vector<JacobiFailure> out;
        for (int i = 1; i <= dim_; ++i)
            for (int j = i + 1; j <= dim_; ++j)
                for (int k = j + 1; k <= dim_; ++k) {
                    std::map<int, Rational> acc;
                    auto nest = [&](int a, int b, int c) {
                        for (const auto& t : bracket(a, b))
                            for (const auto& u : bracket(t.k, c)) acc[u.k] += t.c * u.c;
                    };
                    nest(i, j, k);
                    nest(j, k, i);
                    nest(k, i, j);
                    BracketValue residual;
                    for (auto& [idx, c] : acc)
                        if (!c.is_zero()) residual.push_back({idx, c});
                    if (!residual.empty()) out.push_back({i, j, k, residual});
                }
        return out;
    }

    // d minus the generic rank of (sum_k C_ij^k x_k), sampled at random integer points.
    int invariant_count(int samples = 3, unsigned seed = 12345) const {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<long long> dist(-1000000, 1000000);
        int best = 0;
        for (int s = 0; s < std::max(samples, 3); ++s) {
            std::vector<Rational> x(dim_);
            for (auto& v : x) v = Rational(dist(rng));
            best = std::max(best, structure_rank_at(x));
        }
        return dim_ - best;
    }

    int structure_rank_at(const std::vector<Rational>& x) const {
        std::vector<SparseVec> rows;
        for (int i = 1; i <= dim_; ++i) {
            SparseVec row;
            for (int j = 1; j <= dim_; ++j) {
                Rational v;
                for (const auto& t : bracket(i, j)) v += t.c * x[t.k - 1];
                if (!v.is_zero()) row.emplace_back(j - 1, v);
            }
            rows.push_back(std::move(row));
        }
        return rank_of(rows, dim_);
    }

    // Integer weight vectors w with w_k = w_i + w_j whenever C_ij^k != 0.
    // Every such grading is inherited by the enveloping algebra.
    std::vector<std::vector<long long>> gradings() const {
        Echelon e(dim_);
        for (int i = 1; i <= dim_; ++i)
            for (int j = i + 1; j <= dim_; ++j)
                for (const auto& t : bracket(i, j)) {
                    std::map<int, Rational> acc;
                    acc[t.k - 1] += Rational(1);
                    acc[i - 1] -= Rational(1);
                    acc[j - 1] -= Rational(1);
                    SparseVec row;
                    for (auto& [c, v] : acc)
                        if (!v.is_zero()) row.emplace_back(c, v);
                    e.insert(row);
                }
        std::vector<std::vector<long long>> out;
        for (const auto& v : e.nullspace()) {
            SparseVec p = primitive_integer(v);
            std::vector<long long> w(dim_, 0);
            for (const auto& [c, r] : p) w[c] = r.small_num();
            out.push_back(std::move(w));
        }
        return out;
    }

    friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
        return a.dim_ == b.dim_ && a.table_ == b.table_;
    }

private:
    std::string name_;
    int dim_ = 0;
    std::vector<BracketValue> table_;
    std::vector<bool> central_;

    std::size_t slot(int i, int j) const { return static_cast<std::size_t>(i - 1) * dim_ + (j - 1); }
};

}  // namespace casimir
