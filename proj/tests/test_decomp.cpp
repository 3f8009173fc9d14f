#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cycalc/decomp.hpp"
#include "test_util.hpp"

using namespace cycalc;
using namespace cycalc::testing;

namespace {

template <class F>
std::vector<std::string> names(const ComponentSet<F>& C) {
    std::vector<std::string> out;
    for (const auto& P : C.primes) out.push_back(P.to_string());
    return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST(MinimalPrimes, Examples) {
    auto R = q_ring({"x", "y"});
    EXPECT_EQ(names(minimal_primes(I(R, {"x*y"}))), (Strings{"[x]", "[y]"}));
    EXPECT_EQ(names(minimal_primes(I(R, {"x^2", "x*y"}))), (Strings{"[x]"}));
    auto S = q_ring({"x"});
    EXPECT_EQ(names(minimal_primes(I(S, {"x^2 - 1"}))), (Strings{"[x + 1]", "[x - 1]"}));
    EXPECT_EQ(minimal_primes(I(S, {"x^2 - 1"})).provenance, Provenance::Computed);
}

TEST(MinimalPrimes, MoreShapes) {
    auto R = q_ring({"x", "y"});
    EXPECT_EQ(names(minimal_primes(I(R, {"y^2 - x^3"}))), (Strings{"[x^3 - y^2]"}));
    EXPECT_EQ(names(minimal_primes(I(R, {"x^2 - y^2"}))), (Strings{"[x + y]", "[x - y]"}));
    EXPECT_EQ(names(minimal_primes(I(R, {"x*y*(x - y)"}))), (Strings{"[x]", "[x - y]", "[y]"}));
    EXPECT_EQ(names(minimal_primes(I(R, {"(x - y)^2"}))), (Strings{"[x - y]"}));
    EXPECT_EQ(names(minimal_primes(I(R, {"x^2 - 2", "y^2 - 2"}))), (Strings{"[x + y, y^2 - 2]", "[x - y, y^2 - 2]"}));
    EXPECT_EQ(names(minimal_primes(I(R, {"x^2 + y^2 - 1"}))), (Strings{"[x^2 + y^2 - 1]"}));
    EXPECT_EQ(names(minimal_primes(I(R, {"0"}))), (Strings{"[0]"}));
    auto S = q_ring({"x", "y", "z"});
    EXPECT_EQ(names(minimal_primes(I(S, {"x*z", "y*z"}))), (Strings{"[z]", "[y, x]"}));
    EXPECT_EQ(names(minimal_primes(I(S, {"x - y^2", "z - y^3"}))).size(), 1u);
    EXPECT_EQ(names(minimal_primes(I(S, {"x*y - z^2"}))), (Strings{"[x*y - z^2]"}));
}

TEST(MinimalPrimes, UnitIdealRejected) {
    auto R = q_ring({"x"});
    EXPECT_THROW(minimal_primes(I(R, {"1"})), Error);
}

TEST(MinimalPrimes, OverPrimeField) {
    auto R = fp_ring(5, {"x", "y"});
    EXPECT_EQ(names(minimal_primes(I(R, {"x^2 + 1"}))), (Strings{"[x + 2]", "[x + 3]"}));
    auto S = fp_ring(7, {"x", "y"});
    EXPECT_EQ(names(minimal_primes(I(S, {"x^2 + 1", "y"}))), (Strings{"[y, x^2 + 1]"}));
}

TEST(MinimalPrimes, IdempotentOnLeaves) {
    auto R = q_ring({"x", "y", "z"});
    std::vector<std::vector<std::string>> cases = {
        {"x*y*z"}, {"x^2*y - y", "z*y"}, {"x^2 - y^2", "z^2 - 1"}, {"x*y - z", "x*z - y"}, {"(x - 1)^2*y", "z^3"}};
    for (const auto& gens : cases) {
        auto C = minimal_primes(I(R, gens));
        for (const auto& P : C.primes) {
            auto D = minimal_primes(P);
            ASSERT_EQ(D.primes.size(), 1u);
            EXPECT_EQ(D.primes.front(), P);
            EXPECT_TRUE(P.contains(I(R, gens)));
        }
        EXPECT_TRUE(verify_components(I(R, gens), C.primes).ok);
    }
}

TEST(MinimalPrimes, MonomialIdealsMatchSubsetBruteForce) {
    std::mt19937_64 rng(3);
    auto R = q_ring({"a", "b", "c", "d"});
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Poly<Rationals>> gens;
        std::uniform_int_distribution<int> e(0, 2), count(1, 4);
        int k = count(rng);
        for (int i = 0; i < k; ++i) {
            Monomial m(4);
            for (auto& x : m) x = e(rng);
            if (total_degree(m) == 0) m[0] = 1;
            gens.push_back(Poly<Rationals>::monomial(R, m, 1));
        }
        Ideal<Rationals> J(R, gens);
        std::vector<Ideal<Rationals>> containing;
        for (int s = 1; s < 16; ++s) {
            std::vector<Poly<Rationals>> vs;
            for (int v = 0; v < 4; ++v)
                if (s >> v & 1) vs.push_back(Poly<Rationals>::variable(R, v));
            Ideal<Rationals> Ps(R, vs);
            if (Ps.contains(J)) containing.push_back(Ps);
        }
        std::set<std::string> expected;
        for (const auto& A : containing) {
            bool minimal = true;
            for (const auto& B : containing)
                if (!(A == B) && A.contains(B)) minimal = false;
            if (minimal) expected.insert(A.canonical());
        }
        std::set<std::string> got;
        for (const auto& P : minimal_primes(J).primes) got.insert(P.canonical());
        EXPECT_EQ(got, expected);
    }
}

namespace {

template <class T>
using PointSet = std::set<std::vector<T>>;

PointSet<long> points_of(const std::vector<Poly<PrimeField>>& gens, const RingPtr<PrimeField>& R) {
    const long p = R->field().characteristic();
    const std::size_t n = R->nvars();
    PointSet<long> out;
    std::vector<long> pt(n, 0);
    for (;;) {
        std::vector<Poly<PrimeField>> vals;
        for (auto c : pt) vals.push_back(Poly<PrimeField>::constant(R, c));
        if (std::all_of(gens.begin(), gens.end(), [&](const auto& g) { return g.substitute(vals).is_zero(); }))
            out.insert(pt);
        std::size_t k = 0;
        while (k < n && ++pt[k] == p) pt[k++] = 0;
        if (k == n) break;
    }
    return out;
}

}  // namespace

TEST(MinimalPrimes, RationalPointsMatchBruteForceOverFp) {
    struct Case {
        std::uint32_t p;
        std::vector<std::string> vars;
        std::vector<std::string> gens;
    };
    std::vector<Case> cases = {
        {5, {"x", "y"}, {"x*y"}},
        {5, {"x", "y"}, {"x^2 - y^2", "x*y - 1"}},
        {7, {"x", "y"}, {"y^2 - x^3 - 1"}},
        {7, {"x", "y", "z"}, {"x*z", "y*z", "x^2 - 2"}},
        {13, {"x", "y"}, {"x^3 - x", "y^2 - x"}},
        {13, {"x", "y", "z"}, {"x*y - z", "z^2 - 1"}},
        {5, {"x", "y", "z"}, {"x^2 + y^2 + z^2", "x + y + z"}},
        {7, {"x", "y"}, {"(x - y)^2*(x + 1)", "y^3 - y"}},
    };
    for (const auto& c : cases) {
        auto R = fp_ring(c.p, c.vars);
        auto J = I(R, c.gens);
        SCOPED_TRACE(J.to_string());
        auto C = minimal_primes(J);
        PointSet<long> from_primes;
        for (const auto& P : C.primes) {
            auto s = points_of(P.basis(), R);
            from_primes.insert(s.begin(), s.end());
        }
        EXPECT_EQ(from_primes, points_of(J.gens(), R)) << J.to_string();
    }
}

TEST(VerifyComponents, Examples) {
    auto R = q_ring({"x", "y"});
    EXPECT_TRUE(verify_components(I(R, {"x*y"}), {I(R, {"x"}), I(R, {"y"})}).ok);
    auto bad = verify_components(I(R, {"x*y"}), {I(R, {"x"})});
    EXPECT_FALSE(bad.ok);
    EXPECT_EQ(bad.reason, "⋂C ⊄ √I fails for x");
    auto cmp = verify_components(I(R, {"x"}), {I(R, {"x"}), I(R, {"x", "y"})});
    EXPECT_FALSE(cmp.ok);
    EXPECT_EQ(cmp.reason, "not incomparable");
    EXPECT_FALSE(verify_components(I(R, {"x"}), {I(R, {"y"})}).ok);
}

TEST(SchemeDesc, PureDimension) {
    auto R = q_ring({"x", "y", "z"});
    auto X = make_scheme(I(R, {"x*z", "y*z"}));
    auto p = is_pure_dimensional(X);
    EXPECT_FALSE(p.pure);
    auto S = q_ring({"x", "y"});
    auto Y = is_pure_dimensional(make_scheme(I(S, {"x*y"})));
    EXPECT_TRUE(Y.pure);
    EXPECT_EQ(Y.dim, 1);
    auto Z = is_pure_dimensional(make_scheme(Ideal<Rationals>::zero(q_ring({"x"}))));
    EXPECT_TRUE(Z.pure);
    EXPECT_EQ(Z.dim, 1);
}

TEST(SchemeDesc, CertifiedComponents) {
    auto R = q_ring({"x", "y"});
    auto X = make_certified_scheme(I(R, {"x*y"}), "X", std::vector{I(R, {"y"}), I(R, {"x"})});
    EXPECT_EQ(X.comps().provenance, Provenance::CertifiedByFixture);
    EXPECT_EQ(X.comps().primes.front(), I(R, {"x"}));
    EXPECT_THROW(make_certified_scheme(I(R, {"x*y"}), "X", std::vector{I(R, {"x"})}), Error);
}
