#include <gtest/gtest.h>

#include <random>

#include "cycalc/meromorphic.hpp"
#include "test_util.hpp"

using namespace cycalc;
using namespace cycalc::testing;

namespace {

template <class F>
MeroFn<F> mero(const Ideal<F>& X, const std::string& a, const std::string& b) {
    return make_mero(X, P(X.ring(), a), P(X.ring(), b));
}

}  // namespace

TEST(NonZeroDivisor, Examples) {
    auto R = q_ring({"x", "y"});
    EXPECT_FALSE(is_nonzerodivisor(I(R, {"x*y"}), P(R, "x")));
    EXPECT_EQ(ideal_quotient(I(R, {"x*y"}), P(R, "x")), I(R, {"y"}));
    EXPECT_TRUE(is_nonzerodivisor(I(R, {"x*y"}), P(R, "x + y")));
    EXPECT_TRUE(is_nonzerodivisor(Ideal<Rationals>::zero(R), P(R, "1")));
    EXPECT_FALSE(is_nonzerodivisor(I(R, {"x^2", "x*y"}), P(R, "y")));
    EXPECT_TRUE(is_nonzerodivisor(I(R, {"x^2", "x*y"}), P(R, "y - 1")));
}

TEST(MeroFn, ZeroDivisorDenominatorRejected) {
    auto R = q_ring({"x", "y"});
    try {
        mero(I(R, {"x*y"}), "x", "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "denominator is a zero-divisor");
    }
}

TEST(MeroFn, Arithmetic) {
    auto R = q_ring({"x", "y"});
    auto cusp = I(R, {"y^2 - x^3"});
    auto r = mero(cusp, "y", "x");
    auto one = mero(cusp, "1", "1");
    EXPECT_TRUE(mero_equal(mero_mul(r, mero_inverse(r)), one));
    EXPECT_EQ(mero_mul(r, mero(cusp, "x", "1")).to_string(), "(y)/(1)");
    auto inv = mero_inverse(mero(cusp, "x + 1", "y - 2"));
    EXPECT_EQ(inv.to_string(), "(y - 2)/(x + 1)");
    EXPECT_TRUE(mero_equal(mero(cusp, "y", "x"), mero(cusp, "x^2", "y")));
    EXPECT_FALSE(mero(I(R, {"x*y"}), "x", "1").invertible);
    EXPECT_THROW(mero_inverse(mero(I(R, {"x*y"}), "x", "1")), Error);
}

TEST(RestrictMero, Examples) {
    auto R = q_ring({"x", "y"});
    auto r = mero(I(R, {"x*y"}), "x + y", "1");
    EXPECT_EQ(restrict_mero(r, I(R, {"x"})).to_string(), "(y)/(1)");
    EXPECT_EQ(restrict_mero(r, I(R, {"y"})).to_string(), "(x)/(1)");
    auto s = mero(I(R, {"y - x^2"}), "x*y", "y + 1");
    EXPECT_TRUE(mero_equal(restrict_mero(s, I(R, {"y - x^2"})), s));
}

TEST(WeilDivisor, Examples) {
    auto R = q_ring({"x", "y"});
    auto cusp = make_scheme(I(R, {"y^2 - x^3"}));
    EXPECT_EQ(weil_divisor(cusp, mero(cusp.ideal, "y", "x")).to_string(), "1*[y, x]");
    auto lines = make_scheme(I(R, {"x*y"}));
    EXPECT_EQ(weil_divisor(lines, mero(lines.ideal, "x + y", "1")).to_string(), "2*[y, x]");
    EXPECT_EQ(weil_divisor(lines, mero(lines.ideal, "1", "1")).to_string(), "0");
    auto dbl = make_scheme(I(R, {"x^2"}));
    EXPECT_EQ(weil_divisor(dbl, mero(dbl.ideal, "y", "1")).to_string(), "2*[y, x]");
}

TEST(WeilDivisor, AgreesWithOrderSum) {
    auto R = q_ring({"x", "y"});
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> cases = {
        {"y^2 - x^3", {{"y", "x"}, {"x - 1", "y + 1"}, {"x^2 + y", "1"}}},
        {"x*y", {{"x + y", "1"}, {"x - y", "x + y - 1"}}},
        {"x^2", {{"y", "1"}, {"y^2 - 1", "y + 3"}}},
        {"0", {{"x*y", "x - y"}, {"x^2 + y^2 - 1", "x"}}},
    };
    for (const auto& [gens, fns] : cases) {
        auto X = make_scheme(I(R, {gens}));
        for (const auto& [a, b] : fns) {
            auto r = mero(X.ideal, a, b);
            EXPECT_EQ(weil_divisor(X, r), divisor_by_orders(X, r)) << gens << " " << a << "/" << b;
        }
    }
}

TEST(WeilDivisor, MultiplicativeAndRepresentativeIndependent) {
    auto R = q_ring({"x", "y"});
    auto X = make_scheme(I(R, {"x*y*(x + y - 2)"}));
    std::vector<std::pair<std::string, std::string>> fns = {
        {"x - y", "1"}, {"x + 2*y - 1", "x - 2*y + 3"}, {"x^2 + y^2 - 4", "x - y + 1"}, {"y - 3", "x + 5"}};
    for (const auto& [a, b] : fns)
        for (const auto& [c, d] : fns) {
            auto r = mero(X.ideal, a, b), s = mero(X.ideal, c, d);
            EXPECT_EQ(weil_divisor(X, mero_mul(r, s)), weil_divisor(X, r) + weil_divisor(X, s));
        }
    auto r = mero(X.ideal, "x - y", "1");
    auto scaled = make_mero(X.ideal, r.num * P(R, "x - y + 7"), r.den * P(R, "x - y + 7"));
    EXPECT_EQ(weil_divisor(X, scaled), weil_divisor(X, r));
}

TEST(WeilDivisor, NoHeightZeroComponents) {
    auto R = q_ring({"x", "y"});
    auto X = make_scheme(I(R, {"x^2*y"}));
    auto d = weil_divisor(X, mero(X.ideal, "x + y - 1", "x - y + 2"));
    for (const auto& t : d.terms()) {
        EXPECT_EQ(t.dim, 0);
        for (const auto& Pp : X.comps().primes) EXPECT_FALSE(t.prime == Pp);
    }
}

TEST(Support, Examples) {
    auto R = q_ring({"x", "y"});
    auto cusp = make_scheme(I(R, {"y^2 - x^3"}));
    auto s = support(cusp, mero(cusp.ideal, "y", "x"));
    ASSERT_EQ(s.exact.size(), 1u);
    EXPECT_EQ(s.exact.front(), I(R, {"x", "y"}));
    EXPECT_EQ(s.zeros, I(R, {"y^2 - x^3", "y"}));
    EXPECT_EQ(s.poles, I(R, {"y^2 - x^3", "x"}));
    auto t = support(cusp, mero(cusp.ideal, "1", "1"));
    EXPECT_TRUE(t.exact.empty());
    EXPECT_TRUE(t.zeros.is_unit());
}

TEST(FindNzd, Examples) {
    auto R = q_ring({"x", "y"});
    EXPECT_EQ(find_nzd_in_ideal(I(R, {"x*y"}), I(R, {"x", "y"})), P(R, "x + y"));
    try {
        find_nzd_in_ideal(I(R, {"x*y"}), I(R, {"x"}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "annihilator nonzero: no such element exists");
    }
    EXPECT_EQ(find_nzd_in_ideal(Ideal<Rationals>::zero(R), I(R, {"x"})), P(R, "x"));
    try {
        find_nzd_in_ideal(I(R, {"x*y"}), I(R, {"x", "y"}), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "search budget exceeded");
    }
}

TEST(KxSheaf, Examples) {
    auto R = q_ring({"x"});
    auto z = Ideal<Rationals>::zero(R);
    auto cover = make_cover(z, {P(R, "x"), P(R, "x - 1")});
    auto one = LocalFraction<Rationals>{P(R, "1"), P(R, "1")};
    EXPECT_TRUE(kx_sheaf_check(cover, mero(z, "1", "1"), {one, one}).holds());
    auto r = mero(z, "x - 2", "1");
    auto rep = kx_sheaf_check(cover, r, {{P(R, "x^2 - 2*x"), P(R, "x")}, {P(R, "x - 2"), P(R, "1")}});
    EXPECT_TRUE(rep.holds());
    auto bad = kx_sheaf_check(cover, r, {{P(R, "x - 2"), P(R, "1")}, {P(R, "x - 3"), P(R, "1")}});
    EXPECT_FALSE(bad.holds());
    EXPECT_EQ(bad.failing_charts(), "2");
    EXPECT_FALSE(kx_sheaf_check(cover, mero(z, "x", "1"), {one, one}).holds());
}

TEST(KxSheaf, ChartTorsionAndExponentBudget) {
    auto R = q_ring({"x", "y"});
    auto X = I(R, {"x*y"});
    auto cover = make_cover(X, {P(R, "x"), P(R, "y"), P(R, "x + y - 1")});
    auto r = mero(X, "x + y", "1");
    std::vector<LocalFraction<Rationals>> locals = {
        {P(R, "x"), P(R, "1")}, {P(R, "y"), P(R, "1")}, {P(R, "x + y"), P(R, "1")}};
    EXPECT_TRUE(kx_sheaf_check(cover, r, locals).holds());
    auto Y = I(R, {"x^20*y"});
    auto cover2 = make_cover(Y, {P(R, "x"), P(R, "x - 1")});
    auto s = mero(Y, "y + 1", "1");
    EXPECT_THROW(kx_sheaf_check(cover2, s, {{P(R, "1"), P(R, "1")}, {P(R, "y + 1"), P(R, "1")}}), Error);
}

TEST(Prop32, Examples) {
    auto R = q_ring({"x", "y"});
    auto lines = make_scheme(I(R, {"x*y"}));
    auto a = check_prop32(lines, mero(lines.ideal, "x + y", "1"));
    EXPECT_TRUE(a.holds());
    EXPECT_EQ(a.lhs.to_string(), "2*[y, x]");
    ASSERT_EQ(a.parts.size(), 2u);
    EXPECT_EQ(a.parts[0].divisor.to_string(), "1*[y, x]");
    auto dbl = make_scheme(I(R, {"x^2"}));
    auto b = check_prop32(dbl, mero(dbl.ideal, "y", "1"));
    EXPECT_TRUE(b.holds());
    ASSERT_EQ(b.parts.size(), 1u);
    EXPECT_EQ(b.parts[0].length, 2);
    auto c = check_prop32(make_scheme(I(R, {"y - x^2"})), mero(I(R, {"y - x^2"}), "x - 1", "y + 1"));
    EXPECT_TRUE(c.holds());
    auto three = make_scheme(I(R, {"x*y*(x - y - 1)"}));
    EXPECT_TRUE(check_prop32(three, mero(three.ideal, "x + 2*y", "x - 3*y + 1")).holds());
}

TEST(Prop32, RestrictionsCommuteWithCharts) {
    auto R = q_ring({"x", "y"});
    auto X = I(R, {"x*y"});
    auto r = mero(X, "x + y - 2", "x - y + 1");
    auto Xf = saturate(X, P(R, "x - 3"));
    for (const auto& Pp : minimal_primes(X).primes) {
        auto first = restrict_mero(r, Pp);
        auto Pf = saturate(Pp, P(R, "x - 3"));
        EXPECT_TRUE(Pf.contains(first.num * r.den - r.num * first.den));
        EXPECT_TRUE(Xf.contains(X));
    }
}
