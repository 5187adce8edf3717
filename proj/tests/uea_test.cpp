#include <gtest/gtest.h>

#include <casimir/catalog.hpp>
#include <casimir/invariants.hpp>
#include <casimir/parsing.hpp>
#include <casimir/uea.hpp>

#include <random>

#include "oracle.hpp"
#include "support.hpp"

using namespace casimir;

namespace {

NCPoly P(const Uea& U, const std::string& s) { return parse_ncpoly(U, s); }

}  // namespace

TEST(Multiply, Sl2Reordering) {
    Uea U(catalog_algebra("sl2"), 1);
    EXPECT_EQ(U.multiply(U.generator(3), U.generator(1)), P(U, "X1*X3 + X2"));
    EXPECT_EQ(U.render(U.multiply(U.generator(3), U.generator(1))), "X2^[1] + X1^[1]*X3^[1]");
    EXPECT_EQ(U.multiply(U.generator(1), U.generator(1)), U.generator_power(1, 1, 2));
}

TEST(Multiply, CopiesCommute) {
    Uea U(catalog_algebra("sl2"), 2);
    NCPoly p = U.multiply(U.generator(3, 2), U.generator(1, 1));
    EXPECT_EQ(p, U.multiply(U.generator(1, 1), U.generator(3, 2)));
    EXPECT_EQ(U.render(p), "X1^[1]*X3^[2]");
}

TEST(Multiply, BudgetIsEnforced) {
    Uea U(catalog_algebra("sl2"), 3, UeaOptions{20});
    NCPoly big = P(U, "X1^[1] + X2^[1] + X3^[1] + X1^[2] + X2^[2] + X3^[2]");
    EXPECT_THROW(U.power(big, 4), BudgetExceeded);
}

TEST(Commutator, CasimirCommutesWithSl2) {
    Uea U(catalog_algebra("sl2"), 1);
    NCPoly C = P(U, "X2^2 + 4*X1*X3 + 2*X2");
    for (int i = 1; i <= 3; ++i) EXPECT_TRUE(U.commutator(U.generator(i), C).is_zero());
}

TEST(Commutator, SelfCommutatorVanishes) {
    Uea U(catalog_algebra("s6183"), 2);
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        NCPoly p = support::random_element(U, rng, 4, 3);
        EXPECT_TRUE(U.commutator(p, p).is_zero());
    }
}

TEST(Commutator, TwoIndexIntermediatesOfSl2DoNotCommute) {
    Uea U(catalog_algebra("sl2"), 3);
    CommPoly pat = parse_commpoly(coordinate_names(3), "x2^2 + 4*x1*x3");
    auto sum = [&](int a, int b) {
        std::vector<NCPoly> s;
        for (int i = 1; i <= 3; ++i) s.push_back(U.generator(i, a) + U.generator(i, b));
        return U.substitute(pat, s);
    };
    EXPECT_FALSE(U.commutator(sum(1, 2), sum(2, 3)).is_zero());
}

TEST(Symmetrize, Sl2Casimir) {
    Uea U(catalog_algebra("sl2"), 1);
    auto vars = coordinate_names(3);
    EXPECT_EQ(U.symmetrize(parse_commpoly(vars, "x2^2 + 4*x1*x3")), P(U, "X2^2 + 4*X1*X3 + 2*X2"));
    EXPECT_EQ(U.symmetrize(parse_commpoly(vars, "x1")), U.generator(1));
    // (X1 X2 + X2 X1) / 2 = X1 X2 - [X1, X2] / 2
    EXPECT_EQ(U.symmetrize(parse_commpoly(vars, "x1*x2")), P(U, "X1*X2 - X1"));
}

TEST(Symmetrize, DiffersFromOrderedSubstitutionInLowerDegree) {
    std::mt19937 rng(11);
    for (const auto& name : catalog_names()) {
        LieAlgebra L = catalog_algebra(name);
        Uea U(L, 1);
        auto vars = coordinate_names(L.dim());
        std::uniform_int_distribution<int> var(0, L.dim() - 1), deg(1, 4);
        for (int t = 0; t < 10; ++t) {
            Exponents e(L.dim(), 0);
            int d = deg(rng);
            for (int k = 0; k < d; ++k) ++e[var(rng)];
            CommPoly m = CommPoly::monomial(vars, e);
            NCPoly ordered = U.one();
            for (int i = 0; i < L.dim(); ++i) ordered = U.multiply(ordered, U.generator_power(i + 1, 1, e[i]));
            NCPoly diff = U.symmetrize(m) - ordered;
            if (!diff.is_zero()) {
                EXPECT_LT(diff.degree(), d) << name;
            }
        }
    }
}

TEST(Substitute, SummedGeneratorsGiveTwoIndexCasimir) {
    Uea U(catalog_algebra("sl2"), 3);
    CommPoly pat = parse_commpoly(coordinate_names(3), "x2^2 + 4*x1*x3");
    std::vector<NCPoly> s;
    for (int i = 1; i <= 3; ++i) s.push_back(U.generator(i, 1) + U.generator(i, 2));
    NCPoly expected = P(U, "(X2^[1] + X2^[2])^2 + 4*(X1^[1] + X1^[2])*(X3^[1] + X3^[2]) + 2*(X2^[1] + X2^[2])");
    EXPECT_EQ(U.substitute(pat, s), expected);
}

TEST(Substitute, IdentityAssignmentIsSymmetrization) {
    Uea U(catalog_algebra("s6183"), 1);
    CommPoly pat = parse_commpoly(coordinate_names(6), catalog_entry("s6183").casimirs[0].pattern);
    std::vector<NCPoly> id;
    for (int i = 1; i <= 6; ++i) id.push_back(U.generator(i));
    EXPECT_EQ(U.substitute(pat, id), U.symmetrize(pat));
}

TEST(Substitute, VirtualCopyGivesScaledCasimir) {
    Uea U(catalog_algebra("sl2_n31"), 1);
    CommPoly pat = parse_commpoly(coordinate_names(3), "x2^2 + 4*x1*x3");
    std::vector<NCPoly> defs{P(U, "X4*X1 + X6^2/2"), P(U, "X4*X2 + X5*X6 - X4/2"), P(U, "X4*X3 - X5^2/2")};
    NCPoly C = P(U, catalog_entry("sl2_n31").casimirs[0].op);
    EXPECT_EQ(U.substitute(pat, defs), U.multiply(U.generator(4), C) - P(U, "3/4*X4^2"));
}

TEST(Substitute, MissingSymbolIsReported) {
    Uea U(catalog_algebra("sl2"), 1);
    CommPoly pat = parse_commpoly({"a", "b"}, "a*b");
    EXPECT_THROW(U.substitute(pat, std::map<std::string, NCPoly>{{"a", U.generator(1)}}), UnassignedSymbol);
}

TEST(ReduceModCenter, DropsPurelyCentralTerms) {
    for (const std::string name : {"s6160", "s6183"}) {
        LieAlgebra L = catalog_algebra(name);
        Uea U(L, 1);
        const auto& c = catalog_entry(name).casimirs[0];
        NCPoly sym = U.symmetrize(parse_commpoly(coordinate_names(6), c.pattern));
        NCPoly reduced = U.reduce_mod_center(sym);
        EXPECT_NE(sym, reduced) << name;
        EXPECT_EQ(reduced, P(U, c.op)) << name;
    }
    Uea U(catalog_algebra("sl2"), 1);
    NCPoly C = P(U, "X2^2 + 4*X1*X3 + 2*X2");
    EXPECT_EQ(U.reduce_mod_center(C), C);
}

TEST(VerifyEmbedding, ScaledLeviImage) {
    Uea U(catalog_algebra("sl2_n31"), 1);
    std::vector<NCPoly> defs{P(U, "X4*X1 + X6^2/2"), P(U, "X4*X2 + X5*X6 - X4/2"), P(U, "X4*X3 - X5^2/2")};
    LieAlgebra sl2 = catalog_algebra("sl2");
    EXPECT_TRUE(U.verify_embedding(sl2, defs, U.generator(4)));
    EXPECT_FALSE(U.verify_embedding(sl2, defs));
    for (const auto& d : defs) EXPECT_TRUE(U.commutator(U.generator(4), d).is_zero());
}

TEST(VerifyEmbedding, IdentityOnSl2) {
    Uea U(catalog_algebra("sl2"), 1);
    EXPECT_TRUE(U.verify_embedding(catalog_algebra("sl2"), {U.generator(1), U.generator(2), U.generator(3)}));
}

TEST(VerifyEmbedding, LocalizedN55Subalgebra) {
    Uea U(catalog_algebra("n55"), 1);
    // Y1 = X2, Y2 = X5, Y3 = X1; W_i = Z4^-1 Z_i
    std::vector<NCPoly> W{P(U, "X1^-1*X2^2"), P(U, "X1^-1*X5^2"), P(U, "X1^-1*(X2*X5 - X1/2)")};
    LieAlgebra target = LieAlgebra::make("w", 3, parse_bracket_table(3, "1,2: 4*X3; 1,3: 2*X1; 2,3: -2*X2"));
    EXPECT_TRUE(U.verify_embedding(target, W));
}

TEST(Localization, InverseOfCentralGenerator) {
    Uea U(catalog_algebra("n61"), 2);
    for (int i = 1; i <= 3; ++i)
        for (int a = 1; a <= 2; ++a) {
            NCPoly z = U.generator(i, a), zi = U.inverse(z);
            EXPECT_EQ(U.multiply(zi, z), U.one());
            EXPECT_EQ(U.multiply(z, zi), U.one());
            for (const auto& g : all_generators(U)) EXPECT_TRUE(U.commutator(zi, g).is_zero());
        }
    EXPECT_THROW(U.inverse(U.generator(4)), std::domain_error);
}

// Associativity and the Jacobi identity on random triples, every catalog algebra.
TEST(Properties, AssociativityAndJacobi) {
    std::mt19937 rng(2024);
    for (const auto& name : catalog_names()) {
        Uea U(catalog_algebra(name), 2);
        for (int t = 0; t < 100; ++t) {
            NCPoly p = support::random_element(U, rng), q = support::random_element(U, rng),
                   r = support::random_element(U, rng);
            ASSERT_EQ(U.multiply(U.multiply(p, q), r), U.multiply(p, U.multiply(q, r))) << name;
            NCPoly jac = U.commutator(U.commutator(p, q), r) + U.commutator(U.commutator(q, r), p) +
                         U.commutator(U.commutator(r, p), q);
            ASSERT_TRUE(jac.is_zero()) << name;
        }
    }
}

TEST(Properties, CommutatorLowersDegree) {
    std::mt19937 rng(99);
    for (const auto& name : catalog_names()) {
        Uea U(catalog_algebra(name), 2);
        for (int t = 0; t < 30; ++t) {
            NCPoly p = support::random_element(U, rng, 3, 3), q = support::random_element(U, rng, 3, 3);
            if (p.degree() < 1 || q.degree() < 1) continue;
            NCPoly c = U.commutator(p, q);
            if (!c.is_zero()) {
                EXPECT_LE(c.degree(), p.degree() + q.degree() - 1) << name;
            }
        }
    }
}

// Normal ordering of random words against two independent rewriting oracles.
TEST(Properties, NormalOrderingMatchesRewritingOracles) {
    std::mt19937 rng(5);
    int words = 0;
    for (const auto& name : catalog_names()) {
        LieAlgebra L = catalog_algebra(name);
        Uea U(L, 2);
        oracle::Table T(L);
        std::uniform_int_distribution<int> slot(0, U.num_generators() - 1), len(0, 6);
        for (int t = 0; t < 120; ++t) {
            int n = len(rng);
            oracle::Word w;
            std::vector<GeneratorId> ids;
            for (int k = 0; k < n; ++k) {
                w.push_back(slot(rng));
                ids.push_back(U.id_of(w.back()));
            }
            auto lib = oracle::as_exponent_map(U.word(ids), U.num_generators());
            auto left = oracle::as_exponent_map(oracle::normal_form_leftmost(T, w), U.num_generators());
            auto bubble = oracle::as_exponent_map(oracle::normal_form_bubble(T, w), U.num_generators());
            ASSERT_EQ(lib, left) << name;
            ASSERT_EQ(lib, bubble) << name;
            ++words;
        }
    }
    EXPECT_GE(words, 1000);
}
