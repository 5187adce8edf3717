#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "comm_poly.hpp"
#include "errors.hpp"
#include "modular.hpp"
#include "uea.hpp"

namespace casimir {

namespace upoly {

using modp::u64;
using Poly = std::vector<u64>;  // low to high, no trailing zeros

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly mul(const Poly& a, const Poly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = modp::add(r[i + j], modp::mul(a[i], b[j], p), p);
    trim(r);
    return r;
}

inline Poly sub(Poly a, const Poly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = modp::sub(a[i], b[i], p);
    trim(a);
    return a;
}

inline Poly scale(Poly a, u64 s, u64 p) {
    for (auto& c : a) c = modp::mul(c, s, p);
    trim(a);
    return a;
}

inline void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r, u64 p) {
    r = a;
    q.clear();
    if (deg(r) < deg(b)) return;
    q.assign(r.size() - b.size() + 1, 0);
    u64 li = modp::inv(b.back(), p);
    for (int k = deg(r) - deg(b); k >= 0; --k) {
        u64 c = modp::mul(r[k + b.size() - 1], li, p);
        q[k] = c;
        if (!c) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = modp::sub(r[k + j], modp::mul(c, b[j], p), p);
    }
    trim(q);
    trim(r);
}

inline Poly monic(Poly a, u64 p) {
    if (a.empty()) return a;
    return scale(a, modp::inv(a.back(), p), p);
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    while (!b.empty()) {
        Poly q, r;
        divmod(a, b, q, r, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

inline u64 eval(const Poly& a, u64 x, u64 p) {
    u64 r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = modp::add(modp::mul(r, x, p), a[i], p);
    return r;
}

// Interpolating polynomial through (xs[i], ys[i]) in monomial form.
inline Poly interpolate(const std::vector<u64>& xs, const std::vector<u64>& ys, u64 p) {
    std::size_t n = xs.size();
    std::vector<u64> c = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i)
            c[i] = modp::mul(modp::sub(c[i], c[i - 1], p), modp::inv(modp::sub(xs[i], xs[i - j], p), p), p);
    // Horner on the Newton form
    Poly r;
    for (std::size_t i = n; i-- > 0;) {
        Poly t(r.size() + 1, 0);
        for (std::size_t k = 0; k < r.size(); ++k) {
            t[k + 1] = modp::add(t[k + 1], r[k], p);
            t[k] = modp::sub(t[k], modp::mul(r[k], xs[i], p), p);
        }
        t[0] = modp::add(t[0], c[i], p);
        trim(t);
        r = std::move(t);
    }
    return r;
}

inline Poly from_roots(const std::vector<u64>& xs, u64 p) {
    Poly r{1};
    for (u64 x : xs) r = mul(r, Poly{modp::neg(x, p), 1}, p);
    return r;
}

// n/d with deg n <= N, deg d <= D, d monic, from the first N+D+1 samples;
// the remaining samples must agree.
inline std::optional<std::pair<Poly, Poly>> rational_fit(const std::vector<u64>& xs, const std::vector<u64>& ys, int N,
                                                         int D, u64 p) {
    std::size_t m = static_cast<std::size_t>(N + D + 1);
    if (xs.size() < m) return std::nullopt;
    std::vector<u64> fx(xs.begin(), xs.begin() + m), fy(ys.begin(), ys.begin() + m);
    Poly r0 = from_roots(fx, p), r1 = interpolate(fx, fy, p);
    Poly t0, t1{1};
    while (deg(r1) > N) {
        Poly q, r;
        divmod(r0, r1, q, r, p);
        Poly t2 = sub(t0, mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (t1.empty() || deg(t1) > D) return std::nullopt;
    Poly g = gcd(r1, t1, p);
    Poly q, rem;
    if (deg(g) > 0) {
        divmod(r1, g, q, rem, p);
        r1 = q;
        divmod(t1, g, q, rem, p);
        t1 = q;
    }
    u64 li = modp::inv(t1.back(), p);
    Poly num = scale(r1, li, p), den = scale(t1, li, p);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        u64 dv = eval(den, xs[i], p);
        if (!dv || modp::mul(ys[i], dv, p) != eval(num, xs[i], p)) return std::nullopt;
    }
    return std::make_pair(num, den);
}

}  // namespace upoly

namespace detail {

using modp::u64;

// Monomial-basis coefficients of the polynomial taking `values` on the grid
// axes[0] x ... x axes[n-1] (row-major, axis 0 slowest).
inline std::vector<u64> tensor_interpolate(const std::vector<std::vector<u64>>& axes, std::vector<u64> values, u64 p) {
    const int n = static_cast<int>(axes.size());
    std::vector<std::size_t> stride(n, 1);
    for (int j = n - 2; j >= 0; --j) stride[j] = stride[j + 1] * axes[j + 1].size();
    for (int j = 0; j < n; ++j) {
        std::size_t m = axes[j].size();
        std::size_t total = values.size();
        for (std::size_t base = 0; base < total; ++base) {
            if ((base / stride[j]) % m != 0) continue;
            std::vector<u64> ys(m);
            for (std::size_t k = 0; k < m; ++k) ys[k] = values[base + k * stride[j]];
            upoly::Poly c = upoly::interpolate(axes[j], ys, p);
            for (std::size_t k = 0; k < m; ++k) values[base + k * stride[j]] = k < c.size() ? c[k] : 0;
        }
    }
    return values;
}

using ModPoly = std::map<Exponents, u64>;

inline ModPoly modpoly_mul(const ModPoly& a, const ModPoly& b, u64 p) {
    ModPoly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            u64& slot = r[e];
            slot = modp::add(slot, modp::mul(ca, cb, p), p);
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second ? std::next(it) : r.erase(it);
    return r;
}

}  // namespace detail

// Expressions over K = Q(z), z the central generators of a ring, for targets
// in the K-span of a fixed list of elements. Values of the unique K-linear
// coefficients are sampled by specializing z modulo a prime; the common
// denominator P and numerators Q_c are rebuilt by univariate rational fitting
// along lines and tensor-grid interpolation, lifted to Q, and accepted only
// after exact re-expansion P*t == sum Q_c*b_c.
class FieldSolver {
public:
    struct Result {
        CommPoly multiplier;
        std::vector<CommPoly> coefficients;  // one per basis element; zero for dependent ones
    };

    // z_slots: central generator slots treated as the coefficient field; names label them.
    FieldSolver(const Uea& U, std::vector<int> z_slots, std::vector<std::string> z_names, std::vector<NCPoly> basis,
                std::uint64_t seed = 0x5eedULL)
        : U_(U), zslots_(std::move(z_slots)), znames_(std::move(z_names)), basis_values_(std::move(basis)), rng_(seed) {
        nz_ = static_cast<int>(zslots_.size());
        for (const auto& b : basis_values_) basis_.push_back(split(b, true));
        choose_prime(0);
        select_rows();
    }

    const std::vector<int>& independent() const { return indep_; }
    int rank() const { return static_cast<int>(indep_.size()); }

    // Probabilistic membership in the K-span (exact results always go through solve).
    bool in_span(const NCPoly& t) {
        if (t.is_zero()) return true;
        Split s = split(t, false);
        if (s.outside) return false;
        for (int attempt = 0; attempt < 4; ++attempt) {
            auto z = random_point();
            auto q = solve_at(s, z);
            if (!q) continue;
            return residual_zero(s, z, *q);
        }
        return false;
    }

    std::optional<Result> solve(const NCPoly& target) {
        Result res;
        res.multiplier = CommPoly::constant(znames_, Rational(1));
        res.coefficients.assign(basis_.size(), CommPoly(znames_));
        if (target.is_zero()) return res;
        if (indep_.empty()) return std::nullopt;
        Split s = split(target, false);
        if (s.outside) return std::nullopt;
        if (!in_span(target)) return std::nullopt;
        lifted_.clear();
        lift_mod_ = 1;
        for (int pi = 0; pi < 24; ++pi) {
            choose_prime(pi);
            std::optional<ModResult> mr;
            for (int attempt = 0; attempt < 3 && !mr; ++attempt) mr = solve_mod(s);
            if (!mr) continue;
            lift(*mr);
            auto exact = reconstruct_all();
            if (!exact) continue;
            if (verify(target, *exact)) {
                for (std::size_t k = 0; k < indep_.size(); ++k) res.coefficients[indep_[k]] = exact->second[k];
                res.multiplier = exact->first;
                normalize(res);
                return res;
            }
        }
        throw BudgetExceeded("projective solve did not stabilize");
    }

private:
    using u64 = modp::u64;
    struct ZTerm {
        std::vector<int> e;
        Rational c;
        u64 cm = 0;
    };
    struct Split {
        std::vector<std::vector<ZTerm>> rows;  // indexed by global row id
        bool outside = false;
        int maxdeg = 0;
    };
    struct ModResult {
        std::map<Exponents, u64> P;
        std::vector<std::map<Exponents, u64>> Q;
    };

    const Uea& U_;
    std::vector<int> zslots_;
    std::vector<std::string> znames_;
    std::vector<NCPoly> basis_values_;
    std::mt19937_64 rng_;
    int nz_ = 0;
    u64 p_ = 0;
    std::map<Monomial, int> row_of_;
    std::vector<Split> basis_;
    std::vector<int> indep_;
    std::vector<int> sel_rows_;
    std::vector<int> maxexp_;

    // Chinese remaindering state, keyed by (0 for P or c+1 for Q_c, exponent)
    std::map<std::pair<int, Exponents>, mpz_class> lifted_;
    mpz_class lift_mod_ = 1;
    std::vector<std::size_t> lift_sizes_;

    Split split(const NCPoly& p, bool extend_rows) {
        Split s;
        for (const auto& [m, c] : p.terms()) {
            Monomial rest = m;
            std::vector<int> e(nz_);
            int d = 0;
            for (int i = 0; i < nz_; ++i) {
                e[i] = m.e[zslots_[i]];
                if (e[i] < 0) throw std::domain_error("negative central exponent in field solve");
                d += e[i];
                rest.e[zslots_[i]] = 0;
            }
            auto it = row_of_.find(rest);
            if (it == row_of_.end()) {
                if (!extend_rows) {
                    s.outside = true;
                    continue;
                }
                it = row_of_.emplace(rest, static_cast<int>(row_of_.size())).first;
            }
            if (static_cast<int>(s.rows.size()) <= it->second) s.rows.resize(it->second + 1);
            s.rows[it->second].push_back({e, c, 0});
            s.maxdeg = std::max(s.maxdeg, d);
        }
        s.rows.resize(row_of_.size());
        refresh_mod(s);
        return s;
    }

    void refresh_mod(Split& s) const {
        if (!p_) return;
        for (auto& row : s.rows)
            for (auto& t : row) t.cm = t.c.mod(p_);
    }

    void choose_prime(int index) {
        p_ = modp::prime(static_cast<std::size_t>(index) + 7);
        for (auto& b : basis_) {
            b.rows.resize(row_of_.size());
            refresh_mod(b);
        }
        maxexp_.assign(nz_, 0);
        for (const auto& b : basis_)
            for (const auto& row : b.rows)
                for (const auto& t : row)
                    for (int i = 0; i < nz_; ++i) maxexp_[i] = std::max(maxexp_[i], t.e[i]);
    }

    u64 rand_mod() { return rng_() % (p_ - 1) + 1; }
    std::vector<u64> random_point() {
        std::vector<u64> z(nz_);
        for (auto& v : z) v = rand_mod();
        return z;
    }

    u64 eval_row(const std::vector<ZTerm>& row, const std::vector<std::vector<u64>>& pw) const {
        u64 acc = 0;
        for (const auto& t : row) {
            u64 v = t.cm;
            for (int i = 0; i < nz_ && v; ++i)
                if (t.e[i]) v = modp::mul(v, pw[i][t.e[i]], p_);
            acc = modp::add(acc, v, p_);
        }
        return acc;
    }

    std::vector<std::vector<u64>> powers(const std::vector<u64>& z, int extra) const {
        std::vector<std::vector<u64>> pw(nz_);
        for (int i = 0; i < nz_; ++i) {
            int top = std::max(maxexp_[i], extra);
            pw[i].assign(top + 1, 1);
            for (int k = 1; k <= top; ++k) pw[i][k] = modp::mul(pw[i][k - 1], z[i], p_);
        }
        return pw;
    }

    void select_rows() {
        const int R = static_cast<int>(row_of_.size());
        indep_.clear();
        sel_rows_.clear();
        if (R == 0) return;
        auto pw = powers(random_point(), 0);
        modp::Echelon E(R, p_);
        for (std::size_t c = 0; c < basis_.size(); ++c) {
            std::vector<u64> v(R, 0);
            for (int r = 0; r < R; ++r) v[r] = eval_row(basis_[c].rows[r], pw);
            if (E.insert(std::move(v))) indep_.push_back(static_cast<int>(c));
        }
        sel_rows_ = E.pivots();
    }

    // K-coefficients at a point, from the selected square subsystem.
    std::optional<std::vector<u64>> solve_at(const Split& t, const std::vector<u64>& z) const {
        const int r = static_cast<int>(indep_.size());
        int extra = t.maxdeg;
        auto pw = powers(z, extra);
        std::vector<std::vector<u64>> A(r, std::vector<u64>(r + 1));
        for (int i = 0; i < r; ++i) {
            int row = sel_rows_[i];
            for (int c = 0; c < r; ++c) A[i][c] = eval_row(basis_[indep_[c]].rows[row], pw);
            A[i][r] = row < static_cast<int>(t.rows.size()) ? eval_row(t.rows[row], pw) : 0;
        }
        for (int col = 0; col < r; ++col) {
            int piv = -1;
            for (int i = col; i < r; ++i)
                if (A[i][col]) {
                    piv = i;
                    break;
                }
            if (piv < 0) return std::nullopt;
            std::swap(A[piv], A[col]);
            u64 s = modp::inv(A[col][col], p_);
            for (int k = col; k <= r; ++k) A[col][k] = modp::mul(A[col][k], s, p_);
            for (int i = 0; i < r; ++i) {
                if (i == col || !A[i][col]) continue;
                u64 a = A[i][col];
                for (int k = col; k <= r; ++k) A[i][k] = modp::sub(A[i][k], modp::mul(a, A[col][k], p_), p_);
            }
        }
        std::vector<u64> q(r);
        for (int i = 0; i < r; ++i) q[i] = A[i][r];
        return q;
    }

    bool residual_zero(const Split& t, const std::vector<u64>& z, const std::vector<u64>& q) const {
        auto pw = powers(z, t.maxdeg);
        for (std::size_t row = 0; row < row_of_.size(); ++row) {
            u64 v = row < t.rows.size() ? eval_row(t.rows[row], pw) : 0;
            for (std::size_t c = 0; c < indep_.size(); ++c)
                v = modp::sub(v, modp::mul(q[c], eval_row(basis_[indep_[c]].rows[row], pw), p_), p_);
            if (v) return false;
        }
        return true;
    }

    std::vector<u64> point_on_line(const std::vector<u64>& base, const std::vector<u64>& dir, u64 s) const {
        std::vector<u64> z(nz_);
        for (int i = 0; i < nz_; ++i) z[i] = modp::add(base[i], modp::mul(s, dir[i], p_), p_);
        return z;
    }

    struct LineFit {
        std::vector<upoly::Poly> num, den;
        upoly::Poly common;
    };

    std::optional<LineFit> fit_line(const Split& t, const std::vector<u64>& base, const std::vector<u64>& dir, int N,
                                    int D) {
        const int r = static_cast<int>(indep_.size());
        const int m = N + D + 1 + 3;
        std::vector<u64> xs;
        std::vector<std::vector<u64>> ys(r);
        int guard = 0;
        while (static_cast<int>(xs.size()) < m && guard++ < 4 * m) {
            u64 s = rand_mod();
            auto q = solve_at(t, point_on_line(base, dir, s));
            if (!q) continue;
            xs.push_back(s);
            for (int c = 0; c < r; ++c) ys[c].push_back((*q)[c]);
        }
        if (static_cast<int>(xs.size()) < m) return std::nullopt;
        LineFit f;
        f.common = {1};
        for (int c = 0; c < r; ++c) {
            auto nd = upoly::rational_fit(xs, ys[c], N, D, p_);
            if (!nd) return std::nullopt;
            f.num.push_back(nd->first);
            f.den.push_back(nd->second);
            upoly::Poly g = upoly::gcd(f.common, nd->second, p_);
            upoly::Poly q, rem;
            upoly::divmod(upoly::mul(f.common, nd->second, p_), g, q, rem, p_);
            f.common = upoly::monic(q, p_);
        }
        return f;
    }

    std::optional<ModResult> solve_mod(const Split& t) {
        const int r = static_cast<int>(indep_.size());
        std::vector<u64> base = random_point(), dir = random_point();
        // degree discovery on one generic line
        std::optional<LineFit> probe;
        for (int bound = 8; bound <= 256 && !probe; bound *= 2) probe = fit_line(t, base, dir, bound, bound);
        if (!probe) return std::nullopt;
        const int delta = upoly::deg(probe->common);
        int qdeg = 0;
        std::vector<int> qdegs(r, -1);
        for (int c = 0; c < r; ++c) {
            if (probe->num[c].empty()) continue;
            qdegs[c] = upoly::deg(probe->num[c]) + delta - upoly::deg(probe->den[c]);
            qdeg = std::max(qdeg, qdegs[c]);
        }
        int nmax = 0;
        for (int c = 0; c < r; ++c) nmax = std::max(nmax, upoly::deg(probe->num[c]));

        ModResult out;
        if (delta == 0) {
            out.P[Exponents(nz_, 0)] = 1;
        } else {
            // lines z = (a_1..a_{n-1}, 0) + s*dir through a grid of bases
            std::vector<std::vector<u64>> gax(nz_);
            for (auto& ax : gax) {
                ax.clear();
                while (static_cast<int>(ax.size()) < delta + 1) {
                    u64 v = rand_mod();
                    if (std::find(ax.begin(), ax.end(), v) == ax.end()) ax.push_back(v);
                }
            }
            std::size_t lines = 1;
            for (int j = 0; j + 1 < nz_; ++j) lines *= gax[j].size();
            std::vector<u64> values(lines * gax[nz_ - 1].size());
            for (std::size_t li = 0; li < lines; ++li) {
                std::vector<u64> b(nz_, 0);
                std::size_t rem = li;
                for (int j = nz_ - 2; j >= 0; --j) {
                    b[j] = gax[j][rem % gax[j].size()];
                    rem /= gax[j].size();
                }
                auto f = fit_line(t, b, dir, nmax, delta);
                if (!f || upoly::deg(f->common) != delta) return std::nullopt;
                for (std::size_t k = 0; k < gax[nz_ - 1].size(); ++k)
                    values[li * gax[nz_ - 1].size() + k] = upoly::eval(f->common, gax[nz_ - 1][k], p_);
            }
            auto coef = detail::tensor_interpolate(gax, values, p_);
            // coefficients in (a_1..a_{n-1}, s); substitute s = z_n/dir_n, a_j = z_j - dir_j*s
            u64 inv_dn = modp::inv(dir[nz_ - 1], p_);
            std::vector<detail::ModPoly> lin(nz_);
            for (int j = 0; j + 1 < nz_; ++j) {
                Exponents e1(nz_, 0), en(nz_, 0);
                e1[j] = 1;
                en[nz_ - 1] = 1;
                lin[j][e1] = 1;
                u64 c = modp::neg(modp::mul(dir[j], inv_dn, p_), p_);
                if (c) lin[j][en] = c;
            }
            {
                Exponents en(nz_, 0);
                en[nz_ - 1] = 1;
                lin[nz_ - 1][en] = inv_dn;
            }
            std::vector<std::vector<detail::ModPoly>> lin_pow(nz_);
            for (int j = 0; j < nz_; ++j) {
                lin_pow[j].push_back({{Exponents(nz_, 0), 1}});
                for (int k = 1; k <= delta; ++k) lin_pow[j].push_back(detail::modpoly_mul(lin_pow[j].back(), lin[j], p_));
            }
            std::size_t total = coef.size();
            std::vector<std::size_t> stride(nz_, 1);
            for (int j = nz_ - 2; j >= 0; --j) stride[j] = stride[j + 1] * gax[j + 1].size();
            for (std::size_t idx = 0; idx < total; ++idx) {
                if (!coef[idx]) continue;
                detail::ModPoly term{{Exponents(nz_, 0), coef[idx]}};
                int tdeg = 0;
                for (int j = 0; j < nz_; ++j) {
                    int k = static_cast<int>((idx / stride[j]) % gax[j].size());
                    tdeg += k;
                    if (k) term = detail::modpoly_mul(term, lin_pow[j][k], p_);
                }
                if (tdeg > delta) return std::nullopt;
                for (const auto& [e, c] : term) {
                    u64& slot = out.P[e];
                    slot = modp::add(slot, c, p_);
                }
            }
            for (auto it = out.P.begin(); it != out.P.end();)
                it = it->second ? std::next(it) : out.P.erase(it);
            if (out.P.empty()) return std::nullopt;
        }
        // numerators on a tensor grid in z
        std::vector<std::vector<u64>> zax(nz_);
        for (auto& ax : zax) {
            while (static_cast<int>(ax.size()) < qdeg + 1) {
                u64 v = rand_mod();
                if (std::find(ax.begin(), ax.end(), v) == ax.end()) ax.push_back(v);
            }
        }
        std::size_t total = 1;
        for (const auto& ax : zax) total *= ax.size();
        std::vector<std::vector<u64>> qvals(r, std::vector<u64>(total));
        std::vector<std::size_t> stride(nz_, 1);
        for (int j = nz_ - 2; j >= 0; --j) stride[j] = stride[j + 1] * zax[j + 1].size();
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::vector<u64> z(nz_);
            for (int j = 0; j < nz_; ++j) z[j] = zax[j][(idx / stride[j]) % zax[j].size()];
            auto q = solve_at(t, z);
            if (!q) return std::nullopt;
            u64 pv = eval_modpoly(out.P, z);
            for (int c = 0; c < r; ++c) qvals[c][idx] = modp::mul(pv, (*q)[c], p_);
        }
        for (int c = 0; c < r; ++c) {
            auto coef = detail::tensor_interpolate(zax, qvals[c], p_);
            std::map<Exponents, u64> Q;
            for (std::size_t idx = 0; idx < total; ++idx) {
                if (!coef[idx]) continue;
                Exponents e(nz_);
                int d = 0;
                for (int j = 0; j < nz_; ++j) {
                    e[j] = static_cast<int>((idx / stride[j]) % zax[j].size());
                    d += e[j];
                }
                if (d > qdeg) return std::nullopt;
                Q[e] = coef[idx];
            }
            out.Q.push_back(std::move(Q));
        }
        // normalize by the leading (grlex) coefficient of P
        u64 lead = 0;
        Exponents lead_e;
        for (const auto& [e, c] : out.P)
            if (lead == 0 || GrlexDesc()(e, lead_e)) {
                lead = c;
                lead_e = e;
            }
        u64 s = modp::inv(lead, p_);
        for (auto& [e, c] : out.P) c = modp::mul(c, s, p_);
        for (auto& Q : out.Q)
            for (auto& [e, c] : Q) c = modp::mul(c, s, p_);
        return out;
    }

    u64 eval_modpoly(const std::map<Exponents, u64>& P, const std::vector<u64>& z) const {
        u64 acc = 0;
        for (const auto& [e, c] : P) {
            u64 v = c;
            for (int i = 0; i < nz_; ++i)
                if (e[i]) v = modp::mul(v, modp::pow(z[i], static_cast<u64>(e[i]), p_), p_);
            acc = modp::add(acc, v, p_);
        }
        return acc;
    }

    // Chinese remaindering of P (slot 0) and Q_c (slot c+1) coefficients.
    void lift(const ModResult& mr) {
        std::vector<std::size_t> sizes{mr.P.size()};
        for (const auto& Q : mr.Q) sizes.push_back(Q.size());
        std::map<std::pair<int, Exponents>, u64> cur;
        for (const auto& [e, c] : mr.P) cur[{0, e}] = c;
        for (std::size_t k = 0; k < mr.Q.size(); ++k)
            for (const auto& [e, c] : mr.Q[k]) cur[{static_cast<int>(k) + 1, e}] = c;
        bool same_shape = lift_mod_ != 1 && sizes == lift_sizes_;
        if (same_shape)
            for (const auto& [key, v] : cur)
                if (!lifted_.count(key)) same_shape = false;
        mpz_class mp(static_cast<unsigned long>(p_));
        if (!same_shape) {
            lifted_.clear();
            for (const auto& [key, v] : cur) lifted_[key] = mpz_class(static_cast<unsigned long>(v));
            lift_mod_ = mp;
            lift_sizes_ = sizes;
            return;
        }
        mpz_class mm = lift_mod_ % mp, inv_m;
        mpz_invert(inv_m.get_mpz_t(), mm.get_mpz_t(), mp.get_mpz_t());
        for (auto& [key, x] : lifted_) {
            mpz_class a(static_cast<unsigned long>(cur[key]));
            mpz_class t = (a - x) * inv_m;
            mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), mp.get_mpz_t());
            x += lift_mod_ * t;
        }
        lift_mod_ *= mp;
    }

    std::optional<std::pair<CommPoly, std::vector<CommPoly>>> reconstruct_all() const {
        CommPoly P(znames_);
        std::vector<CommPoly> Q(indep_.size(), CommPoly(znames_));
        for (const auto& [key, x] : lifted_) {
            auto q = modp::reconstruct(x, lift_mod_);
            if (!q) return std::nullopt;
            if (key.first == 0)
                P.add_term(key.second, *q);
            else
                Q[key.first - 1].add_term(key.second, *q);
        }
        return std::make_pair(P, Q);
    }

    NCPoly central_value(const CommPoly& c) const {
        TermList terms;
        for (const auto& [e, r] : c.terms()) {
            Monomial m;
            for (int i = 0; i < nz_; ++i) m.e[zslots_[i]] = static_cast<std::int8_t>(e[i]);
            terms.emplace_back(m, r);
        }
        std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        return NCPoly(std::move(terms));
    }

    bool verify(const NCPoly& target, const std::pair<CommPoly, std::vector<CommPoly>>& ex) const {
        NCPoly lhs = U_.multiply(central_value(ex.first), target);
        NCPoly rhs;
        for (std::size_t k = 0; k < indep_.size(); ++k)
            if (!ex.second[k].is_zero()) rhs += U_.multiply(central_value(ex.second[k]), basis_values_[indep_[k]]);
        return lhs == rhs;
    }

    // Primitive integer multiplier with positive leading coefficient.
    static void normalize(Result& r) {
        CommPoly pp = r.multiplier.primitive();
        Rational s = pp.terms().begin()->second / r.multiplier.terms().begin()->second;
        r.multiplier = pp;
        for (auto& q : r.coefficients) q *= s;
    }
};

}  // namespace casimir
