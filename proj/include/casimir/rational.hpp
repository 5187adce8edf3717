#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>

namespace casimir {

// Exact rational in lowest terms. Values that fit in int64 num/den stay
// unboxed; anything larger is promoted to an mpq_class and demoted again
// when it shrinks, so every value has exactly one representation.
class Rational {
public:
    Rational() = default;
    Rational(int v) : num_(v) {}
    Rational(long v) { set_small_or_big(static_cast<__int128>(v), 1); }
    Rational(long long v) { set_small_or_big(static_cast<__int128>(v), 1); }
    Rational(long long n, long long d) {
        if (d == 0) throw std::domain_error("zero denominator");
        set_reduced(static_cast<__int128>(n), static_cast<__int128>(d));
    }
    explicit Rational(const mpz_class& z) { assign_big(mpq_class(z)); }
    explicit Rational(const mpq_class& q) {
        mpq_class c(q);
        c.canonicalize();
        assign_big(std::move(c));
    }
    explicit Rational(const std::string& text) {
        mpq_class q;
        if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
        if (q.get_den() == 0) throw std::domain_error("zero denominator");
        q.canonicalize();
        assign_big(std::move(q));
    }

    Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o) {
        if (this != &o) {
            num_ = o.num_;
            den_ = o.den_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    bool is_zero() const { return !big_ && num_ == 0; }
    bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
    bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
    bool is_small() const { return !big_; }
    int sign() const {
        if (big_) return sgn(*big_);
        return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
    }

    mpz_class numerator() const {
        if (big_) return big_->get_num();
        return to_mpz(num_);
    }
    mpz_class denominator() const {
        if (big_) return big_->get_den();
        return to_mpz(den_);
    }
    mpq_class to_mpq() const {
        if (big_) return *big_;
        mpq_class q(to_mpz(num_), to_mpz(den_));
        return q;
    }
    std::int64_t small_num() const { return num_; }
    std::int64_t small_den() const { return den_; }

    std::string str() const {
        if (big_) return big_->get_str();
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    Rational operator-() const {
        Rational r(*this);
        r.negate();
        return r;
    }
    void negate() {
        if (big_) {
            mpq_class q = -*big_;
            assign_big(std::move(q));
        } else {
            num_ = -num_;
        }
    }

    Rational& operator+=(const Rational& o) { return *this = add(*this, o); }
    Rational& operator-=(const Rational& o) { return *this = add(*this, -o); }
    Rational& operator*=(const Rational& o) { return *this = mul(*this, o); }
    Rational& operator/=(const Rational& o) { return *this = mul(*this, o.inverse()); }

    friend Rational operator+(const Rational& a, const Rational& b) { return add(a, b); }
    friend Rational operator-(const Rational& a, const Rational& b) { return add(a, -b); }
    friend Rational operator*(const Rational& a, const Rational& b) { return mul(a, b); }
    friend Rational operator/(const Rational& a, const Rational& b) { return mul(a, b.inverse()); }

    Rational inverse() const {
        if (is_zero()) throw std::domain_error("division by zero");
        if (big_) {
            mpq_class q = 1 / *big_;
            Rational r;
            r.assign_big(std::move(q));
            return r;
        }
        Rational r;
        if (num_ < 0) {
            r.num_ = -den_;
            r.den_ = -num_;
        } else {
            r.num_ = den_;
            r.den_ = num_;
        }
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (a.big_ || b.big_) {
            if (!a.big_ || !b.big_) return false;
            return *a.big_ == *b.big_;
        }
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
        }
        return a.to_mpq() < b.to_mpq();
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

    std::size_t hash() const {
        if (big_) return std::hash<std::string>()(big_->get_str());
        return std::hash<std::int64_t>()(num_) * 1000003u ^ std::hash<std::int64_t>()(den_);
    }

    // Residue modulo a prime below 2^62; the denominator must be a unit.
    std::uint64_t mod(std::uint64_t p) const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;

    static constexpr std::int64_t kMax = INT64_MAX;

    static bool fits(__int128 v) { return v <= kMax && v >= -kMax; }

    static mpz_class to_mpz(__int128 v) {
        bool neg = v < 0;
        unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
        std::uint64_t limbs[2] = {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m >> 64)};
        mpz_class z;
        mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
        if (neg) z = -z;
        return z;
    }

    static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
        while (b != 0) {
            unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
        while (b != 0) {
            std::uint64_t t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static std::uint64_t uabs(std::int64_t v) {
        return v < 0 ? -static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
    }

    void set_small_or_big(__int128 n, __int128 d) {
        if (fits(n) && fits(d)) {
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
            big_.reset();
        } else {
            mpq_class q(to_mpz(n), to_mpz(d));
            big_ = std::make_unique<mpq_class>(std::move(q));
        }
    }

    void set_reduced(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            big_.reset();
            return;
        }
        unsigned __int128 un = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
        unsigned __int128 g = gcd128(un, static_cast<unsigned __int128>(d));
        if (g > 1) {
            n /= static_cast<__int128>(g);
            d /= static_cast<__int128>(g);
        }
        set_small_or_big(n, d);
    }

    void assign_big(mpq_class q) {
        if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
            long n = q.get_num().get_si();
            long d = q.get_den().get_si();
            if (n != INT64_MIN) {
                num_ = n;
                den_ = d;
                big_.reset();
                return;
            }
        }
        num_ = 0;
        den_ = 1;
        big_ = std::make_unique<mpq_class>(std::move(q));
    }

    static Rational add(const Rational& a, const Rational& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (!a.big_ && !b.big_) {
            Rational r;
            if (a.den_ == 1 && b.den_ == 1) {
                r.set_small_or_big(static_cast<__int128>(a.num_) + b.num_, 1);
                if (!r.big_ && r.num_ == 0) r.den_ = 1;
                return r;
            }
            std::uint64_t g = gcd64(static_cast<std::uint64_t>(a.den_), static_cast<std::uint64_t>(b.den_));
            if (g == 1) {
                __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
                __int128 d = static_cast<__int128>(a.den_) * b.den_;
                if (n == 0) return Rational();
                r.set_small_or_big(n, d);
                return r;
            }
            std::int64_t ad = a.den_ / static_cast<std::int64_t>(g);
            std::int64_t bd = b.den_ / static_cast<std::int64_t>(g);
            __int128 t = static_cast<__int128>(a.num_) * bd + static_cast<__int128>(b.num_) * ad;
            if (t == 0) return Rational();
            unsigned __int128 ut = t < 0 ? -static_cast<unsigned __int128>(t) : static_cast<unsigned __int128>(t);
            std::uint64_t g2 = gcd64(static_cast<std::uint64_t>(ut % g), g);
            __int128 n = t / static_cast<__int128>(g2);
            __int128 d = static_cast<__int128>(ad) * (b.den_ / static_cast<std::int64_t>(g2));
            r.set_small_or_big(n, d);
            return r;
        }
        Rational r;
        r.assign_big(a.to_mpq() + b.to_mpq());
        return r;
    }

    static Rational mul(const Rational& a, const Rational& b) {
        if (a.is_zero() || b.is_zero()) return Rational();
        if (!a.big_ && !b.big_) {
            Rational r;
            if (a.den_ == 1 && b.den_ == 1) {
                r.set_small_or_big(static_cast<__int128>(a.num_) * b.num_, 1);
                return r;
            }
            std::uint64_t g1 = gcd64(uabs(a.num_), static_cast<std::uint64_t>(b.den_));
            std::uint64_t g2 = gcd64(uabs(b.num_), static_cast<std::uint64_t>(a.den_));
            __int128 n = static_cast<__int128>(a.num_ / static_cast<std::int64_t>(g1)) *
                         (b.num_ / static_cast<std::int64_t>(g2));
            __int128 d = static_cast<__int128>(a.den_ / static_cast<std::int64_t>(g2)) *
                         (b.den_ / static_cast<std::int64_t>(g1));
            r.set_small_or_big(n, d);
            return r;
        }
        Rational r;
        r.assign_big(a.to_mpq() * b.to_mpq());
        return r;
    }
};

inline std::uint64_t Rational::mod(std::uint64_t p) const {
    auto reduce = [p](const mpz_class& z) {
        mpz_class m;
        mpz_fdiv_r_ui(m.get_mpz_t(), z.get_mpz_t(), p);
        return static_cast<std::uint64_t>(m.get_ui());
    };
    std::uint64_t n;
    std::uint64_t d;
    if (big_) {
        n = reduce(big_->get_num());
        d = reduce(big_->get_den());
    } else {
        __int128 nn = num_ % static_cast<__int128>(p);
        if (nn < 0) nn += p;
        n = static_cast<std::uint64_t>(nn);
        d = static_cast<std::uint64_t>(den_) % p;
    }
    if (d == 0) throw std::domain_error("denominator vanishes modulo prime");
    if (d == 1) return n;
    // d^(p-2) by square-and-multiply
    unsigned __int128 result = 1, base = d;
    std::uint64_t e = p - 2;
    while (e) {
        if (e & 1) result = (result * base) % p;
        base = (base * base) % p;
        e >>= 1;
    }
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(n) * result) % p);
}

}  // namespace casimir

template <>
struct std::hash<casimir::Rational> {
    std::size_t operator()(const casimir::Rational& r) const { return r.hash(); }
};
