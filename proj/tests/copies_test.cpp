#include <gtest/gtest.h>

#include <casimir/catalog.hpp>
#include <casimir/copies.hpp>
#include <casimir/invariants.hpp>
#include <casimir/parsing.hpp>

#include "support.hpp"
#include "workflows.hpp"

using namespace casimir;

namespace {

NCPoly P(const Uea& U, const std::string& s, int copy = 1) { return parse_ncpoly(U, s, copy); }

}  // namespace

TEST(Subsets, Enumeration) {
    EXPECT_EQ(all_subsets(3), (std::vector<CopySet>{{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}}));
    EXPECT_EQ(pair_subsets(3), (std::vector<CopySet>{{1, 2}, {2, 3}, {1, 3}}));
    EXPECT_EQ(pair_subsets(4).size(), 6u);
    EXPECT_EQ(all_subsets(4).size(), 15u);
}

TEST(SummedGenerator, SumsOverCopies) {
    Uea U(catalog_algebra("sl2"), 3);
    EXPECT_EQ(summed_generator(U, 2, {1, 3}), P(U, "X2^[1] + X2^[3]"));
    EXPECT_THROW(summed_generator(U, 1, {}), std::invalid_argument);
    EXPECT_THROW(summed_generator(U, 1, {2, 1}), std::invalid_argument);
    EXPECT_THROW(summed_generator(U, 1, {4}), IndexOutOfRange);
}

TEST(IntermediateCasimirs, LabelsAndValues) {
    Uea U(catalog_algebra("sl2"), 3);
    auto els = intermediate_casimirs(U, support::catalog_operators(U, "sl2"), all_subsets(3));
    ASSERT_EQ(els.size(), 7u);
    EXPECT_EQ(els[0].label, "C^(1)_{1}");
    EXPECT_EQ(els[3].label, "C^(1)_{12}");
    EXPECT_EQ(els[6].label, "C^(1)_{123}");
    EXPECT_EQ(els[1].value, P(U, "X2^2 + 4*X1*X3 + 2*X2", 2));
    CommPoly pat = parse_commpoly(coordinate_names(3), "x2^2 + 4*x1*x3");
    EXPECT_EQ(els[3].value, intermediate_casimir(U, pat, {1, 2}));
}

// Sl2 sum identity: C_123 = C_12 + C_13 + C_23 - C_1 - C_2 - C_3.
TEST(IntermediateCasimirs, Sl2SumIdentity) {
    Uea U(catalog_algebra("sl2"), 3);
    NCPoly op = support::catalog_operators(U, "sl2")[0];
    auto C = [&](CopySet S) { return intermediate_from_operator(U, op, S); };
    EXPECT_EQ(C({1, 2, 3}), C({1, 2}) + C({1, 3}) + C({2, 3}) - C({1}) - C({2}) - C({3}));
}

// C_S commutes with the diagonal generators X_i^[S], with C_T for T inside S,
// and with C_T for T disjoint from S.
TEST(IntermediateCasimirs, CommutationProperties) {
    for (const auto& name : catalog_names()) {
        Uea U(catalog_algebra(name), 3);
        for (const auto& op : support::catalog_operators(U, name)) {
            std::map<CopySet, NCPoly> C;
            for (const auto& S : all_subsets(3)) C[S] = intermediate_from_operator(U, op, S);
            for (const auto& [S, CS] : C) {
                for (int i = 1; i <= U.dim(); ++i)
                    EXPECT_TRUE(U.commutator(summed_generator(U, i, S), CS).is_zero()) << name;
                for (const auto& [T, CT] : C) {
                    bool nested = std::includes(S.begin(), S.end(), T.begin(), T.end());
                    bool disjoint = std::none_of(T.begin(), T.end(), [&](int a) {
                        return std::find(S.begin(), S.end(), a) != S.end();
                    });
                    if (nested || disjoint) {
                        EXPECT_TRUE(U.commutator(CS, CT).is_zero()) << name;
                    }
                }
            }
        }
    }
}

TEST(IntermediateCasimirs, PatternAndOperatorAgreeWithoutCenterReduction) {
    for (const std::string name : {"sl2", "so13", "n55"}) {
        LieAlgebra L = catalog_algebra(name);
        Uea U(L, 2);
        for (const auto& c : catalog_entry(name).casimirs) {
            CommPoly pat = parse_commpoly(coordinate_names(L.dim()), c.pattern);
            NCPoly op = U.symmetrize(pat);
            for (const auto& S : all_subsets(2))
                EXPECT_EQ(intermediate_casimir(U, pat, S), intermediate_from_operator(U, op, S)) << name;
        }
    }
}

TEST(ClearCentralDenominators, MinimalPowers) {
    Uea U(catalog_algebra("n55"), 2);
    NCPoly p = P(U, "X1^[1]^-2*X2^[1] + X1^[1]^-1*X1^[2]^-1*X3^[2] + X4^[1]");
    auto [m, cleared] = clear_central_denominators(U, p);
    EXPECT_EQ(m, P(U, "X1^[1]^2*X1^[2]"));
    EXPECT_EQ(cleared, P(U, "X1^[2]*X2^[1] + X1^[1]*X3^[2] + X1^[1]^2*X1^[2]*X4^[1]"));
    auto [one, same] = clear_central_denominators(U, P(U, "X2*X3"));
    EXPECT_EQ(one, U.one());
    EXPECT_EQ(same, P(U, "X2*X3"));
}

TEST(VirtualCopy, Sl2InN31) {
    Uea U(catalog_algebra("sl2_n31"), 3);
    LieAlgebra sl2 = catalog_algebra("sl2");
    VirtualCopy vc = virtual_copy(U, sl2, support::sl2_n31_defs(U), U.generator(4));
    ASSERT_EQ(vc.rescaled.size(), 3u);
    EXPECT_EQ(vc.rescaled[0], P(U, "X1 + X4^-1*X6^2/2"));
    EXPECT_EQ(vc.in_copy(U, 1, 2), P(U, "X1^[2] + X4^[2]^-1*X6^[2]^2/2"));
    CommPoly pat = parse_commpoly(coordinate_names(3), "x2^2 + 4*x1*x3");
    // Rescaled Casimir: C / Y1 - 3/4
    NCPoly C = P(U, catalog_entry("sl2_n31").casimirs[0].op);
    EXPECT_EQ(virtual_casimir(U, vc, pat, {1}), U.multiply(U.inverse(U.generator(4)), C) - P(U, "3/4"));
    for (const auto& S : all_subsets(3)) {
        NCPoly VS = virtual_casimir(U, vc, pat, S);
        for (int i = 1; i <= 3; ++i) EXPECT_TRUE(U.commutator(vc.summed(U, i, S), VS).is_zero());
    }
}

TEST(VirtualCopy, RejectsBadScale) {
    Uea U(catalog_algebra("sl2_n31"), 1);
    LieAlgebra sl2 = catalog_algebra("sl2");
    EXPECT_THROW(virtual_copy(U, sl2, support::sl2_n31_defs(U), U.generator(5)), EmbeddingCheckFailed);
    EXPECT_THROW(virtual_copy(U, sl2, support::sl2_n31_defs(U), P(U, "2*X4")), EmbeddingCheckFailed);
    auto defs = support::sl2_n31_defs(U);
    std::swap(defs[0], defs[2]);
    EXPECT_THROW(virtual_copy(U, sl2, defs, U.generator(4)), EmbeddingCheckFailed);
}

TEST(N55Subalgebra, SingleCopyCasimirIsCentralConstant) {
    const auto& w = support::n55();
    EXPECT_EQ(w.C({1}), P(w.U, "-3/4"));
    EXPECT_EQ(w.Cbar({2}), P(w.U, "-3/4*X1^[2]^2"));
}

TEST(N55Subalgebra, PairElementInOriginalGenerators) {
    const auto& w = support::n55();
    const Uea& U = w.U;
    NCPoly expected = P(U,
                        "-X1^[1]*X1^[2]*X5^[1]^2*X2^[2]^2 + 2*X1^[1]*X1^[2]*X2^[1]*X5^[1]*X2^[2]*X5^[2]"
                        " - X1^[1]*X1^[2]*X2^[1]^2*X5^[2]^2 - X1^[1]^2*X1^[2]*X2^[2]*X5^[2]"
                        " - X1^[1]*X1^[2]^2*X2^[1]*X5^[1] - X1^[1]^2*X1^[2]^2");
    EXPECT_EQ(w.Cbar({1, 2}), expected);
}

TEST(N55Subalgebra, TotalElementCollapsesOntoPairs) {
    const auto& w = support::n55();
    const Uea& U = w.U;
    NCPoly C1 = w.Cbar({1}), C2 = w.Cbar({2}), C3 = w.Cbar({3});
    auto m = [&](std::initializer_list<NCPoly> f) {
        NCPoly r = U.one();
        for (const auto& x : f) r = U.multiply(r, x);
        return r;
    };
    Rational k(-4, 3);
    NCPoly rhs = m({C3, w.Cbar({1, 2})}) * k + m({C2, w.Cbar({1, 3})}) * k + m({C1, w.Cbar({2, 3})}) * k -
                 m({C1, C2, C3}) * Rational(48, 9);
    EXPECT_EQ(w.Cbar({1, 2, 3}), rhs);
}

TEST(N55Subalgebra, CubicAlgebraWithFactor128Over9) {
    const auto& w = support::n55();
    const Uea& U = w.U;
    NCPoly C1 = w.Cbar({1}), C2 = w.Cbar({2}), C3 = w.Cbar({3});
    NCPoly C12 = w.Cbar({1, 2}), C23 = w.Cbar({2, 3}), C13 = w.Cbar({1, 3});
    auto m = [&](std::initializer_list<NCPoly> f) {
        NCPoly r = U.one();
        for (const auto& x : f) r = U.multiply(r, x);
        return r;
    };
    NCPoly D1223 = U.commutator(C12, C23), D2313 = U.commutator(C23, C13), D1312 = U.commutator(C13, C12);
    EXPECT_FALSE(D1223.is_zero());
    EXPECT_EQ(m({C1, C3, D1223}), m({C1, C2, D2313}));
    EXPECT_EQ(m({C1, C2, D2313}), m({C2, C3, D1312}));
    EXPECT_TRUE(U.commutator(D1223, D2313).is_zero());
    EXPECT_TRUE(U.commutator(D1223, D1312).is_zero());
    Rational k(128, 9);
    EXPECT_EQ(U.commutator(C12, D1223), (m({C1, C2, C23, C12}) - m({C2, C2, C12, C13})) * k);
    EXPECT_EQ(U.commutator(C23, D1223), (m({C2, C2, C13, C23}) - m({C2, C3, C23, C12})) * k);
    EXPECT_EQ(U.commutator(C13, D1223), (m({C2, C3, C12, C13}) - m({C1, C2, C13, C23})) * k);
    EXPECT_EQ(U.commutator(C12, D2313), (m({C1, C3, C23, C12}) - m({C2, C3, C12, C13})) * k);
    EXPECT_EQ(U.commutator(C23, D2313), (m({C2, C3, C13, C23}) - m({C3, C3, C23, C12})) * k);
    EXPECT_EQ(U.commutator(C13, D2313), (m({C3, C3, C12, C13}) - m({C1, C3, C13, C23})) * k);
    EXPECT_EQ(U.commutator(C12, D1312), (m({C1, C1, C23, C12}) - m({C1, C2, C12, C13})) * k);
    EXPECT_EQ(U.commutator(C23, D1312), (m({C1, C2, C13, C23}) - m({C1, C3, C23, C12})) * k);
    EXPECT_EQ(U.commutator(C13, D1312), (m({C1, C3, C12, C13}) - m({C1, C1, C13, C23})) * k);
}
