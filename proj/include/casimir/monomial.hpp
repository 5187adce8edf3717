#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace casimir {

inline constexpr int kMaxGenerators = 48;

// Exponent vector over generator slots (copy-major, then index). The PBW
// word is implied by the slot order, so no ordering data is stored.
struct Monomial {
    std::array<std::int8_t, kMaxGenerators> e{};

    int degree() const {
        int d = 0;
        for (auto v : e) d += v;
        return d;
    }
    bool is_one() const {
        for (auto v : e)
            if (v) return false;
        return true;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e != b.e; }
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.e < b.e; }

    Monomial& operator+=(const Monomial& o) {
        for (int i = 0; i < kMaxGenerators; ++i) {
            int v = e[i] + o.e[i];
            if (v > 127 || v < -127) throw BudgetExceeded("exponent overflow");
            e[i] = static_cast<std::int8_t>(v);
        }
        return *this;
    }
    friend Monomial operator+(Monomial a, const Monomial& b) { return a += b; }
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const {
        std::uint64_t w[kMaxGenerators / 8];
        std::memcpy(w, m.e.data(), sizeof(w));
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto x : w) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<std::size_t>(h ^ (h >> 33));
    }
};

using Term = std::pair<Monomial, Rational>;
using TermList = std::vector<Term>;

// Accumulates coefficient sums keyed by monomial, dropping cancellations at the end.
class TermAccumulator {
public:
    explicit TermAccumulator(std::size_t reserve = 0) {
        if (reserve) map_.reserve(reserve);
    }
    void add(const Monomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = map_.try_emplace(m, c);
        if (!fresh) it->second += c;
    }
    std::size_t size() const { return map_.size(); }
    TermList take_sorted() {
        TermList out;
        out.reserve(map_.size());
        for (auto& [m, c] : map_)
            if (!c.is_zero()) out.emplace_back(m, std::move(c));
        map_.clear();
        std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        return out;
    }

private:
    std::unordered_map<Monomial, Rational, MonomialHash> map_;
};

}  // namespace casimir
