#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "monomial.hpp"

namespace casimir {

// Element of an enveloping algebra in PBW normal form. Terms are kept sorted by
// the raw monomial order with no zero coefficients, so equality is structural.
class NCPoly {
public:
    NCPoly() = default;
    explicit NCPoly(TermList sorted_terms) : terms_(std::move(sorted_terms)) {}

    static NCPoly constant(const Rational& c) {
        NCPoly p;
        if (!c.is_zero()) p.terms_.emplace_back(Monomial{}, c);
        return p;
    }
    static NCPoly monomial(const Monomial& m, const Rational& c = Rational(1)) {
        NCPoly p;
        if (!c.is_zero()) p.terms_.emplace_back(m, c);
        return p;
    }

    const TermList& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = -1;
        for (const auto& t : terms_) d = std::max(d, t.first.degree());
        return d;
    }

    Rational coefficient(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) return it->second;
        return Rational();
    }

    friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const NCPoly& a, const NCPoly& b) { return !(a == b); }

    friend NCPoly operator+(const NCPoly& a, const NCPoly& b) { return combine(a, Rational(1), b); }
    friend NCPoly operator-(const NCPoly& a, const NCPoly& b) { return combine(a, Rational(-1), b); }
    NCPoly& operator+=(const NCPoly& o) { return *this = combine(*this, Rational(1), o); }
    NCPoly& operator-=(const NCPoly& o) { return *this = combine(*this, Rational(-1), o); }
    NCPoly operator-() const { return *this * Rational(-1); }

    friend NCPoly operator*(NCPoly a, const Rational& s) {
        if (s.is_zero()) return NCPoly();
        for (auto& t : a.terms_) t.second *= s;
        return a;
    }
    friend NCPoly operator*(const Rational& s, NCPoly a) { return std::move(a) * s; }

    // a + s*b by merging sorted term lists.
    static NCPoly combine(const NCPoly& a, const Rational& s, const NCPoly& b) {
        if (s.is_zero() || b.is_zero()) return a;
        TermList out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        const auto& x = a.terms_;
        const auto& y = b.terms_;
        while (i < x.size() || j < y.size()) {
            if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
                out.push_back(x[i++]);
            } else if (i == x.size() || y[j].first < x[i].first) {
                out.emplace_back(y[j].first, s * y[j].second);
                ++j;
            } else {
                Rational v = x[i].second + s * y[j].second;
                if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return NCPoly(std::move(out));
    }

private:
    TermList terms_;
};

}  // namespace casimir
