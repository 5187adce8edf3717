#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "comm_poly.hpp"
#include "errors.hpp"
#include "lie_algebra.hpp"
#include "uea.hpp"

namespace casimir {

using CopySet = std::vector<int>;  // sorted, nonempty

struct CasimirLabel {
    int r = 1;
    CopySet subset;

    std::string str() const {
        std::string s = "C^(" + std::to_string(r) + ")_{";
        for (int a : subset) s += std::to_string(a);
        return s + "}";
    }
};

struct LabeledElement {
    std::string label;
    NCPoly value;
};

inline void check_subset(const Uea& U, const CopySet& S) {
    if (S.empty()) throw std::invalid_argument("copy subset must be nonempty");
    for (std::size_t k = 0; k < S.size(); ++k) {
        if (S[k] < 1 || S[k] > U.copies()) throw IndexOutOfRange("copy index out of range");
        if (k && S[k] <= S[k - 1]) throw std::invalid_argument("copy subset must be strictly increasing");
    }
}

// X_i^[S] = sum over a in S of X_i^[a].
inline NCPoly summed_generator(const Uea& U, int i, const CopySet& S) {
    check_subset(U, S);
    NCPoly out;
    for (int a : S) out += U.generator(i, a);
    return out;
}

// Images of the copy-1 generators under X_i -> X_i^[S], indexed by slot.
inline std::vector<NCPoly> summed_images(const Uea& U, const CopySet& S) {
    std::vector<NCPoly> images(U.num_generators());
    for (int i = 1; i <= U.dim(); ++i) images[U.slot({1, i})] = summed_generator(U, i, S);
    return images;
}

// C_S from a commutative pattern, each monomial symmetrized over summed generators.
inline NCPoly intermediate_casimir(const Uea& U, const CommPoly& pattern, const CopySet& S) {
    std::vector<NCPoly> a;
    for (int i = 1; i <= U.dim(); ++i) a.push_back(summed_generator(U, i, S));
    return U.substitute(pattern, a);
}

// C_S from a copy-1 operator by the homomorphism X_i -> X_i^[S]; keeps any
// normal-ordering choice (such as dropped central terms) of the operator.
inline NCPoly intermediate_from_operator(const Uea& U, const NCPoly& op, const CopySet& S) {
    return U.map_generators(op, summed_images(U, S));
}

inline std::vector<CopySet> all_subsets(int n) {
    std::vector<CopySet> out;
    for (int size = 1; size <= n; ++size)
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != size) continue;
            CopySet s;
            for (int a = 0; a < n; ++a)
                if (mask & (1u << a)) s.push_back(a + 1);
            out.push_back(s);
        }
    return out;
}

// Pairs in the order (12), (23), (13) for three copies; lexicographic beyond.
inline std::vector<CopySet> pair_subsets(int n) {
    if (n == 3) return {{1, 2}, {2, 3}, {1, 3}};
    std::vector<CopySet> out;
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) out.push_back({a, b});
    return out;
}

// One labeled element per (family r, subset S). Families are copy-1 operators.
inline std::vector<LabeledElement> intermediate_casimirs(const Uea& U, const std::vector<NCPoly>& families,
                                                         const std::vector<CopySet>& subsets) {
    std::vector<LabeledElement> out;
    for (std::size_t r = 0; r < families.size(); ++r)
        for (const auto& S : subsets)
            out.push_back({CasimirLabel{static_cast<int>(r) + 1, S}.str(), intermediate_from_operator(U, families[r], S)});
    return out;
}

inline std::vector<LabeledElement> intermediate_casimirs_from_patterns(const Uea& U,
                                                                       const std::vector<CommPoly>& patterns,
                                                                       const std::vector<CopySet>& subsets) {
    std::vector<LabeledElement> out;
    for (std::size_t r = 0; r < patterns.size(); ++r)
        for (const auto& S : subsets)
            out.push_back({CasimirLabel{static_cast<int>(r) + 1, S}.str(), intermediate_casimir(U, patterns[r], S)});
    return out;
}

// Multiplier m (a central monomial) and m*p with every exponent nonnegative,
// using the smallest such power per generator.
inline std::pair<NCPoly, NCPoly> clear_central_denominators(const Uea& U, const NCPoly& p) {
    Monomial shift;
    for (const auto& [m, c] : p.terms())
        for (int s = 0; s < U.num_generators(); ++s)
            if (m.e[s] < 0) shift.e[s] = std::max<std::int8_t>(shift.e[s], static_cast<std::int8_t>(-m.e[s]));
    NCPoly mult = NCPoly::monomial(shift);
    return {mult, U.multiply(mult, p)};
}

// Rescaled images X''_i = scale^-1 X'_i of a Levi factor inside U(g), with
// per-copy embeddings into the n-copy algebra.
struct VirtualCopy {
    LieAlgebra levi;
    NCPoly scale;                      // in copy 1
    std::vector<NCPoly> defs;          // X'_i in copy 1
    std::vector<NCPoly> rescaled;      // X''_i in copy 1

    // X''_i in copy a.
    NCPoly in_copy(const Uea& U, int i, int a) const {
        return U.map_generators(rescaled.at(i - 1), copy_images(U, a));
    }
    // X''_i^[S].
    NCPoly summed(const Uea& U, int i, const CopySet& S) const {
        check_subset(U, S);
        NCPoly out;
        for (int a : S) out += in_copy(U, i, a);
        return out;
    }

    static std::vector<NCPoly> copy_images(const Uea& U, int a) {
        std::vector<NCPoly> images(U.num_generators());
        for (int i = 1; i <= U.dim(); ++i) images[U.slot({1, i})] = U.generator(i, a);
        return images;
    }
};

inline VirtualCopy virtual_copy(const Uea& U, const LieAlgebra& levi, const std::vector<NCPoly>& defs,
                                const NCPoly& scale) {
    if (scale.size() != 1 || !U.is_central_monomial(scale.terms()[0].first))
        throw EmbeddingCheckFailed("scale must be a single central monomial");
    if (!U.verify_embedding(levi, defs, scale)) throw EmbeddingCheckFailed("definitions do not satisfy the scaled relations");
    NCPoly s_inv = U.inverse(scale);
    VirtualCopy vc{levi, scale, defs, {}};
    for (const auto& d : defs) vc.rescaled.push_back(U.multiply(s_inv, d));
    if (!U.verify_embedding(levi, vc.rescaled)) throw EmbeddingCheckFailed("rescaled generators fail the relations");
    return vc;
}

// Symmetrized pattern over X''^[S].
inline NCPoly virtual_casimir(const Uea& U, const VirtualCopy& vc, const CommPoly& pattern, const CopySet& S) {
    std::vector<NCPoly> a;
    for (int i = 1; i <= vc.levi.dim(); ++i) a.push_back(vc.summed(U, i, S));
    return U.substitute(pattern, a);
}

}  // namespace casimir
