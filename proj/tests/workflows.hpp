#pragma once

#include <casimir/catalog.hpp>
#include <casimir/closure.hpp>
#include <casimir/copies.hpp>
#include <casimir/parsing.hpp>

#include <map>
#include <memory>

namespace support {

// Levi images of sl2 inside U(sl2 + n31), scaled by the central X4.
inline std::vector<casimir::NCPoly> sl2_n31_defs(const casimir::Uea& U) {
    using casimir::parse_ncpoly;
    return {parse_ncpoly(U, "X4*X1 + X6^2/2"), parse_ncpoly(U, "X4*X2 + X5*X6 - X4/2"),
            parse_ncpoly(U, "X4*X3 - X5^2/2")};
}

// Intermediate Casimirs of the rescaled virtual sl2 copy in sl2 + n31.
inline casimir::IntermediateFn sl2_n31_virtual_intermediates() {
    using namespace casimir;
    Uea U1(catalog_algebra("sl2_n31"), 1);
    auto vc = std::make_shared<VirtualCopy>(virtual_copy(U1, catalog_algebra("sl2"), sl2_n31_defs(U1), U1.generator(4)));
    auto pattern = std::make_shared<CommPoly>(parse_commpoly(coordinate_names(3), "x2^2 + 4*x1*x3"));
    return [vc, pattern](const Uea& U, int, const CopySet& S) { return virtual_casimir(U, *vc, *pattern, S); };
}

// Subalgebra Y1 = X2, Y2 = X5, Y3 = X1 of n55 with Z1 = Y1^2, Z2 = Y2^2,
// Z3 = Y1 Y2 - Y3/2, rescaled by Z4 = Y3 to W_i = Z4^-1 Z_i.
struct N55Workflow {
    casimir::Uea U{casimir::catalog_algebra("n55"), 3};
    casimir::LieAlgebra w =
        casimir::LieAlgebra::make("w", 3, casimir::parse_bracket_table(3, "1,2: 4*X3; 1,3: 2*X1; 2,3: -2*X2"));
    casimir::CommPoly pattern = casimir::parse_commpoly(casimir::coordinate_names(3), "x3^2 - x1*x2");
    casimir::VirtualCopy vc = casimir::virtual_copy(
        U, w, {casimir::parse_ncpoly(U, "X2^2"), casimir::parse_ncpoly(U, "X5^2"), casimir::parse_ncpoly(U, "X2*X5 - X1/2")},
        U.generator(1));

    casimir::NCPoly C(const casimir::CopySet& S) const { return casimir::virtual_casimir(U, vc, pattern, S); }
    // Central weight prod_{a in S} (Y3^[a])^2 times C_S.
    casimir::NCPoly Cbar(const casimir::CopySet& S) const {
        casimir::NCPoly w = U.one();
        for (int a : S) w = U.multiply(w, U.generator_power(1, a, 2));
        return U.multiply(w, C(S));
    }
};

inline const N55Workflow& n55() {
    static const N55Workflow w;
    return w;
}

// One copy of the n61 realization with central values (a1, a2, a3) on (x, p).
inline std::vector<casimir::CommPoly> n61_realization(const std::vector<std::string>& vars, const std::string& x,
                                                      const std::string& p, casimir::Rational a1, casimir::Rational a2,
                                                      casimir::Rational a3, int momentum_sign = 1) {
    std::map<std::string, casimir::Rational> par{
        {"a1", a1}, {"a2", a2}, {"a3", a3}, {"a3a2", a3 / a2}, {"s", casimir::Rational(momentum_sign)}};
    std::vector<std::string> text{"a1",
                                  "a2",
                                  "a3",
                                  "a2*" + x,
                                  "s*" + p + " + a2*" + x + " + a2*a3*" + x + "^2",
                                  "a3a2*" + p + " + (a3 - a1)*" + x + " + a3^2*" + x + "^2"};
    std::vector<casimir::CommPoly> out;
    for (const auto& t : text) out.push_back(casimir::parse_commpoly(vars, t, par));
    return out;
}

struct N61Params {
    casimir::Rational a[3], b[3], c[3];
};

inline const std::vector<N61Params> kN61Params{
    {{1, 2, 3}, {0, 1, -1}, {2, 3, 1}},
    {{casimir::Rational(1, 2), -1, 4}, {3, 2, casimir::Rational(-2, 3)}, {-1, 5, 0}},
    {{0, casimir::Rational(7, 3), -2}, {1, -4, 1}, {5, casimir::Rational(1, 2), 3}},
};

// Classical n61 Casimir x1 x4 + x2 x6 - x3 x5 of the copies in S.
inline casimir::CommPoly n61_classical_casimir(const std::vector<std::vector<casimir::CommPoly>>& xi,
                                               const casimir::CopySet& S) {
    std::vector<casimir::CommPoly> s(6, casimir::CommPoly(xi.front().front().vars()));
    for (int a : S)
        for (int i = 0; i < 6; ++i) s[i] += xi[a - 1][i];
    return s[0] * s[3] + s[1] * s[5] - s[2] * s[4];
}

}  // namespace support
