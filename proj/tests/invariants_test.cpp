#include <gtest/gtest.h>

#include <casimir/catalog.hpp>
#include <casimir/invariants.hpp>
#include <casimir/parsing.hpp>

#include <random>

#include "oracle.hpp"
#include "support.hpp"
#include "workflows.hpp"

using namespace casimir;

namespace {

CommPoly F(int dim, const std::string& s) { return parse_commpoly(coordinate_names(dim), s); }

// Products of basis elements with total degree `deg`.
std::vector<CommPoly> products_of_degree(const std::vector<CommPoly>& basis, int deg) {
    std::vector<CommPoly> out;
    std::function<void(std::size_t, int, const CommPoly&)> go = [&](std::size_t from, int left, const CommPoly& acc) {
        if (left == 0) {
            out.push_back(acc);
            return;
        }
        for (std::size_t g = from; g < basis.size(); ++g) {
            int d = basis[g].total_degree();
            if (d >= 1 && d <= left) go(g, left - d, acc * basis[g]);
        }
    };
    go(0, deg, CommPoly::constant(basis.front().vars(), Rational(1)));
    return out;
}

// Whether `target` is a linear combination of `spanning`, decided by the oracle nullspace.
bool in_invariant_algebra(const InvariantBasis& B, const CommPoly& target) {
    return support::in_span(products_of_degree(B.polys, target.total_degree()), target);
}

bool annihilated(const LieAlgebra& L, const CommPoly& P) {
    for (const auto& f : coadjoint_fields(L))
        if (!apply_field(f, P).is_zero()) return false;
    return true;
}

CommPoly random_poly(const std::vector<std::string>& vars, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-3, 3), ex(0, 2);
    CommPoly out(vars);
    for (int t = 0; t < 4; ++t) {
        Exponents e(vars.size());
        for (auto& x : e) x = ex(rng);
        out.add_term(e, Rational(coef(rng)));
    }
    return out;
}

}  // namespace

TEST(CoadjointFields, Sl2) {
    auto f = coadjoint_fields(catalog_algebra("sl2"));
    ASSERT_EQ(f.size(), 3u);
    EXPECT_TRUE(f[0][0].is_zero());
    EXPECT_EQ(f[0][1], F(3, "2*x1"));
    EXPECT_EQ(f[0][2], F(3, "-x2"));
    EXPECT_EQ(f[2][1], F(3, "-2*x3"));
}

TEST(PolynomialInvariants, Sl2) {
    auto B = polynomial_invariants(catalog_algebra("sl2"), 2);
    ASSERT_EQ(B.polys.size(), 1u);
    EXPECT_EQ(B.polys[0], F(3, "x2^2 + 4*x1*x3"));
}

TEST(PolynomialInvariants, N55) {
    LieAlgebra L = catalog_algebra("n55");
    auto B = polynomial_invariants(L, 3);
    EXPECT_EQ(B.polys.size(), 3u);
    for (const std::string s : {"x1", "2*x1*x3 - x2^2", "x2^3 + 3*x1^2*x4 - 3*x1*x2*x3"})
        EXPECT_TRUE(in_invariant_algebra(B, F(5, s))) << s;
    EXPECT_FALSE(in_invariant_algebra(B, F(5, "x2^2")));
}

TEST(PolynomialInvariants, So13SpansBothQuadratics) {
    LieAlgebra L = catalog_algebra("so13");
    auto space = invariant_space(L, 2);
    EXPECT_EQ(space.size(), 2u);
    for (const std::string s : {"x1*x4 + x2*x5 + x3*x6", "x1^2 + x2^2 + x3^2 - x4^2 - x5^2 - x6^2"})
        EXPECT_TRUE(support::in_span(space, F(6, s))) << s;
}

TEST(PolynomialInvariants, N61IncludesCentralGenerators) {
    auto B = polynomial_invariants(catalog_algebra("n61"), 2);
    for (const std::string s : {"x1", "x2", "x3", "x1*x4 + x2*x6 - x3*x5"})
        EXPECT_TRUE(in_invariant_algebra(B, F(6, s))) << s;
    auto ops = casimir_operators(catalog_algebra("n61"), 2, false);
    Uea U(catalog_algebra("n61"), 1);
    EXPECT_NE(std::find(ops.begin(), ops.end(), parse_ncpoly(U, "X1*X4 + X2*X6 - X3*X5")), ops.end());
}

TEST(PolynomialInvariants, RejectsDegreeZero) {
    EXPECT_THROW(polynomial_invariants(catalog_algebra("sl2"), 0), std::invalid_argument);
}

// Every computed invariant is killed by every field; every catalog pattern is in the span.
TEST(PolynomialInvariants, CatalogProperties) {
    for (const auto& name : catalog_names()) {
        LieAlgebra L = catalog_algebra(name);
        const auto& entry = catalog_entry(name);
        auto B = polynomial_invariants(L, entry.closure.invariant_degree);
        for (const auto& P : B.polys) EXPECT_TRUE(annihilated(L, P)) << name;
        for (const auto& c : entry.casimirs) {
            CommPoly pat = F(L.dim(), c.pattern);
            EXPECT_TRUE(annihilated(L, pat)) << name;
            EXPECT_TRUE(in_invariant_algebra(B, pat)) << name << ": " << c.pattern;
        }
    }
}

TEST(CasimirOperators, S6160CenterReduced) {
    Uea U(catalog_algebra("s6160"), 1);
    auto ops = casimir_operators(catalog_algebra("s6160"), 2, true);
    EXPECT_EQ(ops, (std::vector<NCPoly>{parse_ncpoly(U, "2*X1*X6 + 2*X3*X5 - X2^2")}));
}

TEST(CasimirOperators, CommuteWithEveryGenerator) {
    for (const auto& name : catalog_names()) {
        LieAlgebra L = catalog_algebra(name);
        Uea U(L, 2);
        for (const auto& C : casimir_operators(L, catalog_entry(name).closure.invariant_degree, false))
            EXPECT_TRUE(casimir_check(U, C, all_generators(U))) << name;
        for (int copy = 1; copy <= 2; ++copy)
            for (const auto& C : support::catalog_operators(U, name, copy))
                EXPECT_TRUE(casimir_check(U, C, all_generators(U))) << name;
    }
}

TEST(CasimirCheck, DetectsNonCentralElement) {
    Uea U(catalog_algebra("sl2"), 1);
    EXPECT_FALSE(casimir_check(U, parse_ncpoly(U, "X2^2 + 4*X1*X3"), all_generators(U)));
}

TEST(PoissonBracket, CanonicalPair) {
    std::vector<std::string> v{"x", "p"};
    auto x = parse_commpoly(v, "x"), p = parse_commpoly(v, "p");
    EXPECT_EQ(poisson_bracket(x, p, {{0, 1}}), parse_commpoly(v, "1"));
    EXPECT_EQ(poisson_bracket(parse_commpoly(v, "x^2"), parse_commpoly(v, "p^2"), {{0, 1}}), parse_commpoly(v, "4*x*p"));
}

TEST(PoissonBracket, AntisymmetryJacobiLeibniz) {
    std::vector<std::string> v{"x1", "p1", "x2", "p2"};
    std::vector<std::pair<int, int>> pairs{{0, 1}, {2, 3}};
    std::mt19937 rng(17);
    auto pb = [&](const CommPoly& a, const CommPoly& b) { return poisson_bracket(a, b, pairs); };
    for (int t = 0; t < 40; ++t) {
        CommPoly f = random_poly(v, rng), g = random_poly(v, rng), h = random_poly(v, rng);
        EXPECT_TRUE((pb(f, g) + pb(g, f)).is_zero());
        EXPECT_TRUE((pb(pb(f, g), h) + pb(pb(g, h), f) + pb(pb(h, f), g)).is_zero());
        EXPECT_EQ(pb(f, g * h), pb(f, g) * h + g * pb(f, h));
    }
}

TEST(Realization, N61AtSampleParameters) {
    LieAlgebra L = catalog_algebra("n61");
    std::vector<std::string> v{"x", "p"};
    for (const auto& P : support::kN61Params) {
        EXPECT_TRUE(verify_realization(L, support::n61_realization(v, "x", "p", P.a[0], P.a[1], P.a[2]), {{0, 1}}));
        EXPECT_FALSE(verify_realization(L, support::n61_realization(v, "x", "p", P.a[0], P.a[1], P.a[2], -1), {{0, 1}}));
    }
}

TEST(Realization, WrongArity) {
    std::vector<std::string> v{"x", "p"};
    auto rho = support::n61_realization(v, "x", "p", 1, 2, 3);
    rho.pop_back();
    EXPECT_FALSE(verify_realization(catalog_algebra("n61"), rho, {{0, 1}}));
}

// Three copies on (x_a, p_a): the two-index Casimirs have constant mutual
// brackets and Poisson-commute with the total Casimir.
TEST(Realization, N61ThreeCopyClassicalBrackets) {
    std::vector<std::string> v{"x1", "p1", "x2", "p2", "x3", "p3"};
    std::vector<std::pair<int, int>> pairs{{0, 1}, {2, 3}, {4, 5}};
    for (const auto& P : support::kN61Params) {
        std::vector<std::vector<CommPoly>> xi{support::n61_realization(v, "x1", "p1", P.a[0], P.a[1], P.a[2]),
                                              support::n61_realization(v, "x2", "p2", P.b[0], P.b[1], P.b[2]),
                                              support::n61_realization(v, "x3", "p3", P.c[0], P.c[1], P.c[2])};
        auto C = [&](const CopySet& S) { return support::n61_classical_casimir(xi, S); };
        CommPoly C12 = C({1, 2}), C13 = C({1, 3}), C23 = C({2, 3}), C123 = C({1, 2, 3});
        for (int a = 1; a <= 3; ++a) EXPECT_TRUE(C({a}).is_zero());
        EXPECT_EQ(C123, C12 + C13 + C23);
        const auto &a = P.a, &b = P.b, &c = P.c;
        Rational k = a[0] * (b[2] * c[1] - b[1] * c[2]) + a[1] * (b[0] * c[2] - b[2] * c[0]) +
                     a[2] * (c[0] * b[1] - b[0] * c[1]);
        CommPoly K = CommPoly::constant(v, k);
        EXPECT_EQ(poisson_bracket(C12, C23, pairs), K);
        EXPECT_EQ(poisson_bracket(C23, C13, pairs), K);
        EXPECT_EQ(poisson_bracket(C13, C12, pairs), K);
        for (const auto& Cab : {C12, C13, C23}) EXPECT_TRUE(poisson_bracket(Cab, C123, pairs).is_zero());
    }
}
