#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace casimir {

using Exponents = std::vector<int>;

inline int exponents_degree(const Exponents& e) {
    int d = 0;
    for (int v : e) d += v;
    return d;
}

// Graded-lex, largest first: higher total degree first, then lexicographically
// larger exponent vector (x1 > x2 > ...).
struct GrlexDesc {
    bool operator()(const Exponents& a, const Exponents& b) const {
        int da = exponents_degree(a), db = exponents_degree(b);
        if (da != db) return da > db;
        return a > b;
    }
};

// Commutative polynomial over an ordered list of named variables.
class CommPoly {
public:
    using TermMap = std::map<Exponents, Rational, GrlexDesc>;

    CommPoly() = default;
    explicit CommPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static CommPoly constant(std::vector<std::string> vars, const Rational& c) {
        CommPoly p(std::move(vars));
        if (!c.is_zero()) p.terms_[Exponents(p.vars_.size(), 0)] = c;
        return p;
    }
    static CommPoly variable(std::vector<std::string> vars, int idx, const Rational& c = Rational(1)) {
        CommPoly p(std::move(vars));
        Exponents e(p.vars_.size(), 0);
        e.at(idx) = 1;
        p.add_term(e, c);
        return p;
    }
    static CommPoly monomial(std::vector<std::string> vars, Exponents e, const Rational& c = Rational(1)) {
        CommPoly p(std::move(vars));
        p.add_term(std::move(e), c);
        return p;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    int nvars() const { return static_cast<int>(vars_.size()); }
    int var_index(const std::string& name) const {
        for (int i = 0; i < nvars(); ++i)
            if (vars_[i] == name) return i;
        return -1;
    }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Exponents& e, const Rational& c) {
        if (c.is_zero()) return;
        if (static_cast<int>(e.size()) != nvars()) throw std::invalid_argument("exponent length mismatch");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Rational coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational() : it->second;
    }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, exponents_degree(e));
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = exponents_degree(terms_.begin()->first);
        for (const auto& [e, c] : terms_)
            if (exponents_degree(e) != d) return false;
        return true;
    }

    CommPoly& operator+=(const CommPoly& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    CommPoly& operator-=(const CommPoly& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    CommPoly& operator*=(const Rational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend CommPoly operator+(CommPoly a, const CommPoly& b) { return a += b; }
    friend CommPoly operator-(CommPoly a, const CommPoly& b) { return a -= b; }
    friend CommPoly operator*(CommPoly a, const Rational& s) { return a *= s; }
    friend CommPoly operator*(const Rational& s, CommPoly a) { return a *= s; }
    CommPoly operator-() const { return *this * Rational(-1); }

    friend CommPoly operator*(const CommPoly& a, const CommPoly& b) {
        a.check_compatible(b);
        CommPoly out(a.vars_.empty() ? b.vars_ : a.vars_);
        Exponents e(out.vars_.size());
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }
    CommPoly& operator*=(const CommPoly& o) { return *this = *this * o; }

    friend bool operator==(const CommPoly& a, const CommPoly& b) {
        return a.terms_ == b.terms_ && (a.terms_.empty() || a.vars_ == b.vars_);
    }
    friend bool operator!=(const CommPoly& a, const CommPoly& b) { return !(a == b); }

    CommPoly pow(int k) const {
        CommPoly r = constant(vars_, Rational(1));
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    CommPoly derivative(int var) const {
        CommPoly out(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents f = e;
            f[var] -= 1;
            out.add_term(f, c * Rational(e[var]));
        }
        return out;
    }

    CommPoly homogeneous_part(int deg) const {
        CommPoly out(vars_);
        for (const auto& [e, c] : terms_)
            if (exponents_degree(e) == deg) out.add_term(e, c);
        return out;
    }

    // Replace variable i by images[i]; all images share one variable list.
    CommPoly compose(const std::vector<CommPoly>& images) const {
        if (static_cast<int>(images.size()) != nvars()) throw std::invalid_argument("compose arity mismatch");
        std::vector<std::string> target = images.empty() ? std::vector<std::string>{} : images.front().vars();
        CommPoly out(target);
        for (const auto& [e, c] : terms_) {
            CommPoly t = constant(target, c);
            for (int i = 0; i < nvars(); ++i)
                if (e[i]) t = t * images[i].pow(e[i]);
            out += t;
        }
        return out;
    }

    // Same polynomial over a renamed or extended variable list.
    CommPoly relabel(const std::vector<std::string>& target) const {
        std::vector<int> where(nvars());
        for (int i = 0; i < nvars(); ++i) {
            auto it = std::find(target.begin(), target.end(), vars_[i]);
            if (it == target.end()) throw std::invalid_argument("variable missing in relabel: " + vars_[i]);
            where[i] = static_cast<int>(it - target.begin());
        }
        CommPoly out(target);
        for (const auto& [e, c] : terms_) {
            Exponents f(target.size(), 0);
            for (int i = 0; i < nvars(); ++i) f[where[i]] += e[i];
            out.add_term(f, c);
        }
        return out;
    }

    // Multiply by a rational so coefficients are coprime integers, leading one positive.
    CommPoly primitive() const {
        if (terms_.empty()) return *this;
        mpz_class l = 1, g = 0;
        for (const auto& [e, c] : terms_) {
            mpz_class d = c.denominator();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
        }
        for (const auto& [e, c] : terms_) {
            mpz_class n = c.numerator() * (l / c.denominator());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        }
        Rational scale = Rational(mpq_class(l, g));
        if (terms_.begin()->second.sign() < 0) scale = -scale;
        return *this * scale;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational a = c;
            if (!first) {
                os << (a.sign() < 0 ? " - " : " + ");
                if (a.sign() < 0) a = -a;
            } else if (a.sign() < 0) {
                os << "-";
                a = -a;
            }
            first = false;
            bool constant_term = exponents_degree(e) == 0 && std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
            if (constant_term) {
                os << a.str();
                continue;
            }
            if (!a.is_one()) os << a.str() << "*";
            bool firstf = true;
            for (int i = 0; i < nvars(); ++i) {
                if (e[i] == 0) continue;
                if (!firstf) os << "*";
                firstf = false;
                os << vars_[i];
                if (e[i] != 1) os << "^" << e[i];
            }
        }
        return os.str();
    }

private:
    std::vector<std::string> vars_;
    TermMap terms_;

    void check_compatible(const CommPoly& o) const {
        if (!vars_.empty() && !o.vars_.empty() && vars_ != o.vars_ && !o.terms_.empty() && !terms_.empty())
            throw std::invalid_argument("CommPoly variable lists differ");
    }
};

// All exponent vectors over n variables with total degree exactly d, grlex descending.
inline std::vector<Exponents> monomials_of_degree(int n, int d) {
    std::vector<Exponents> out;
    Exponents e(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n - 1) {
            e[pos] = left;
            out.push_back(e);
            return;
        }
        for (int v = left; v >= 0; --v) {
            e[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    if (n == 0) {
        if (d == 0) out.push_back(e);
        return out;
    }
    rec(0, d);
    return out;
}

// Degrees hi down to lo, each grlex descending.
inline std::vector<Exponents> monomials_up_to(int n, int lo, int hi) {
    std::vector<Exponents> out;
    for (int d = hi; d >= lo; --d) {
        auto part = monomials_of_degree(n, d);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace casimir
