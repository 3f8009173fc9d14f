#include <gtest/gtest.h>

#include "cycalc/flat.hpp"
#include "test_util.hpp"

using namespace cycalc;
using namespace cycalc::testing;

namespace {

using Q = Rationals;

struct World {
    RingPtr<Q> A1 = q_ring({"t"});
    RingPtr<Q> A2 = q_ring({"x", "y"});
    RingPtr<Q> U = q_ring({"x", "y", "s"});
    SchemeDesc<Q> line = make_scheme(Ideal<Q>::zero(A1), "A1");
    SchemeDesc<Q> plane = make_scheme(Ideal<Q>::zero(A2), "A2");

    FlatMap<Q> projection() const {
        return make_flat_map<Q>("pr", plane, line, {P(A2, "x")}, 1, {FlatKind::AffineSpaceProjection, {}, {}});
    }
    FlatMap<Q> square() const {
        auto X = make_scheme(Ideal<Q>::zero(q_ring({"x"})), "A1x");
        return make_flat_map<Q>("sq", X, line, {P(X.ring(), "x^2")}, 0,
                                {FlatKind::FreeWithBasis, {}, {P(X.ring(), "1"), P(X.ring(), "x")}});
    }
    FlatMap<Q> immersion() const {
        auto D = make_scheme(I(U, {"x*s - 1"}), "Dx");
        return make_flat_map<Q>("j", D, plane, {P(U, "x"), P(U, "y")}, 0, {FlatKind::OpenImmersion, P(A2, "x"), {}});
    }
};

MeroFn<Q> mero(const Ideal<Q>& X, const std::string& a, const std::string& b) {
    return make_mero(X, P(X.ring(), a), P(X.ring(), b));
}

}  // namespace

TEST(PullbackMero, Examples) {
    World w;
    auto pr = w.projection();
    EXPECT_EQ(pullback_mero(pr, mero(w.line.ideal, "t", "1")).to_string(), "(x)/(1)");
    auto sq = w.square();
    EXPECT_EQ(pullback_mero(sq, mero(w.line.ideal, "t", "t - 1")).to_string(), "(x^2)/(x^2 - 1)");
    auto id = identity_map(w.plane);
    auto r = mero(w.plane.ideal, "x*y - 1", "x + y");
    EXPECT_TRUE(mero_equal(pullback_mero(id, r), r));
}

TEST(PullbackMero, NonFlatDetected) {
    World w;
    auto X = make_scheme(I(w.A2, {"x*y"}));
    auto f = make_flat_map<Q>("bad", X, w.line, {P(w.A2, "x")}, 0, {});
    try {
        pullback_mero(f, mero(w.line.ideal, "t", "1"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "pullback not a non-zerodivisor: declared map is not flat");
    }
}

TEST(PullbackCycle, Examples) {
    World w;
    EXPECT_EQ(pullback_cycle(w.projection(), Cycle<Q>::of(I(w.A1, {"t"}))).to_string(), "1*[x]");
    EXPECT_EQ(pullback_cycle(w.square(), Cycle<Q>::of(I(w.A1, {"t"}))).to_string(), "2*[x]");
    EXPECT_EQ(pullback_cycle(w.square(), Cycle<Q>::of(I(w.A1, {"t - 1"}))).to_string(), "1*[x + 1] + 1*[x - 1]");
    EXPECT_EQ(pullback_cycle(w.square(), Cycle<Q>::of(I(w.A1, {"t + 1"}))).to_string(), "1*[x^2 + 1]");
}

TEST(PullbackCycle, OpenImmersionAgreesWithRestriction) {
    World w;
    auto j = w.immersion();
    auto alpha = Cycle<Q>::of(I(w.A2, {"x"}), 2) + Cycle<Q>::of(I(w.A2, {"x - y"})) + Cycle<Q>::of(I(w.A2, {"y - 1", "x - 2"}), -3);
    auto pulled = pullback_cycle(j, alpha);
    auto restricted = restrict_cycle(alpha, P(w.A2, "x"), w.plane.ideal);
    Cycle<Q> contracted(w.A2);
    for (const auto& t : pulled.terms()) contracted.add(map_ideal(eliminate(t.prime, {2}), w.A2, {0, 1, 2}), t.coeff);
    EXPECT_EQ(contracted, restricted);
}

TEST(PullbackCycle, DimensionGuard) {
    World w;
    auto X = make_scheme(I(w.A2, {"x*y"}));
    auto f = make_flat_map<Q>("bad", X, w.line, {P(w.A2, "x")}, 0, {});
    try {
        pullback_cycle(f, Cycle<Q>::of(I(w.A1, {"t"})));
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "preimage dimension mismatch: map not flat of relative dimension 0");
    }
}

TEST(PullbackCycle, DegreeShift) {
    World w;
    auto pr = w.projection();
    auto alpha = Cycle<Q>::of(I(w.A1, {"t^2 - 2"})) + Cycle<Q>::of(I(w.A1, {"t"}), 4);
    auto pulled = pullback_cycle(pr, alpha);
    for (const auto& t : pulled.terms()) EXPECT_EQ(t.dim, 1);
}

TEST(MapConstruction, Validation) {
    World w;
    auto X = make_scheme(I(w.A2, {"x*y"}));
    EXPECT_THROW(make_flat_map<Q>("bad", w.plane, X, {P(w.A2, "x"), P(w.A2, "x")}, 0, {}), Error);
    EXPECT_THROW(make_flat_map<Q>("bad", w.plane, w.line, {P(w.A2, "x^2")}, 1, {FlatKind::AffineSpaceProjection, {}, {}}),
                 Error);
    auto sqX = make_scheme(Ideal<Q>::zero(q_ring({"x"})));
    EXPECT_THROW(make_flat_map<Q>("bad", sqX, w.line, {P(sqX.ring(), "x^2")}, 0,
                                  {FlatKind::FreeWithBasis, {}, {P(sqX.ring(), "1")}}),
                 Error);
    EXPECT_THROW(make_flat_map<Q>("bad", make_scheme(I(w.U, {"s"})), w.plane, {P(w.U, "x"), P(w.U, "y")}, 0,
                                  {FlatKind::OpenImmersion, P(w.A2, "x"), {}}),
                 Error);
}

TEST(CheckPullbackCommutes, Examples) {
    World w;
    auto a = check_pullback_commutes(w.square(), mero(w.line.ideal, "t", "1"));
    EXPECT_TRUE(a.holds());
    EXPECT_EQ(a.lhs.to_string(), "2*[x]");
    auto b = check_pullback_commutes(w.projection(), mero(w.line.ideal, "t", "t - 1"));
    EXPECT_TRUE(b.holds());
    EXPECT_TRUE(b.factored_holds());
    EXPECT_EQ(b.lhs.to_string(), "1*[x] - 1*[x - 1]");
    auto id = identity_map(w.plane);
    EXPECT_TRUE(check_pullback_commutes(id, mero(w.plane.ideal, "x^2 - y", "x*y + 1")).holds());
    auto j = w.immersion();
    EXPECT_TRUE(check_pullback_commutes(j, mero(w.plane.ideal, "x*y - 1", "y^2 - x")).holds());
}

TEST(ToAffineLine, Examples) {
    World w;
    auto origin = Cycle<Q>::of(I(w.A1, {"t"}));
    auto tx = to_affine_line(w.plane, P(w.A2, "x"));
    EXPECT_EQ(tx.reldim, 1);
    EXPECT_EQ(pullback_cycle(tx, Cycle<Q>::of(I(tx.target.ring(), {"t"}))).to_string(), "1*[x]");
    auto tx2 = to_affine_line(w.plane, P(w.A2, "x^2"));
    EXPECT_EQ(pullback_cycle(tx2, Cycle<Q>::of(I(tx2.target.ring(), {"t"}))).to_string(), "2*[x]");
    auto lines = make_scheme(I(w.A2, {"x*y"}));
    auto b = to_affine_line(lines, P(w.A2, "x + y"));
    EXPECT_EQ(b.reldim, 0);
    auto pulled = pullback_cycle(b, Cycle<Q>::of(I(b.target.ring(), {"t"})));
    EXPECT_EQ(pulled, fundamental_cycle(I(w.A2, {"x*y", "x + y"})));
    EXPECT_EQ(pulled.to_string(), "2*[y, x]");
    try {
        pullback_cycle(tx, Cycle<Q>::of(I(tx.target.ring(), {"t - 1"})));
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "outside certified-flat locus");
    }
    EXPECT_THROW(to_affine_line(lines, P(w.A2, "x")), Error);
    (void)origin;
}

TEST(Functoriality, CompositionAndIdentity) {
    World w;
    auto j = w.immersion();
    auto pr = w.projection();
    auto both = compose(pr, j);
    EXPECT_EQ(both.reldim, 1);
    EXPECT_EQ(both.tag.kind, FlatKind::Declared);
    auto alpha = Cycle<Q>::of(I(w.A1, {"t"}), 2) + Cycle<Q>::of(I(w.A1, {"t - 3"}), -1);
    EXPECT_EQ(pullback_cycle(both, alpha), pullback_cycle(j, pullback_cycle(pr, alpha)));
    auto r = mero(w.line.ideal, "t^2 - 4", "t + 7");
    EXPECT_TRUE(mero_equal(pullback_mero(both, r), pullback_mero(j, pullback_mero(pr, r))));
    auto id = identity_map(w.line);
    EXPECT_EQ(pullback_cycle(id, alpha), alpha);
    EXPECT_EQ(compose(j, identity_map(j.source)).tag.kind, FlatKind::OpenImmersion);
}

TEST(RatGenerator, Examples) {
    World w;
    auto g = rat_generator(w.line, Ideal<Q>::zero(w.A1), P(w.A1, "t"), P(w.A1, "t - 1"));
    EXPECT_EQ(g.cycle.to_string(), "1*[t] - 1*[t - 1]");
    auto h = rat_generator(w.plane, I(w.A2, {"x - y"}), P(w.A2, "x"), P(w.A2, "1"));
    EXPECT_EQ(h.cycle.to_string(), "1*[y, x]");
    EXPECT_TRUE(rat_generator(w.plane, I(w.A2, {"x - y"}), P(w.A2, "3"), P(w.A2, "1")).cycle.is_zero());
}

TEST(Thm6, Examples) {
    World w;
    auto g = rat_generator(w.line, Ideal<Q>::zero(w.A1), P(w.A1, "t"), P(w.A1, "t - 1"));
    auto a = check_thm6(w.square(), g);
    EXPECT_TRUE(a.holds());
    EXPECT_EQ(a.lhs.to_string(), "2*[x] - 1*[x + 1] - 1*[x - 1]");
    ASSERT_EQ(a.witness.size(), 1u);
    EXPECT_EQ(a.witness[0].length, 1);
    EXPECT_EQ(a.witness[0].restricted.to_string(), "(x^2)/(x^2 - 1)");
    auto b = check_thm6(w.projection(), g);
    EXPECT_TRUE(b.holds());
    EXPECT_EQ(b.lhs.to_string(), "1*[x] - 1*[x - 1]");
    auto z = rat_generator(w.line, Ideal<Q>::zero(w.A1), P(w.A1, "5"), P(w.A1, "1"));
    auto c = check_thm6(w.square(), z);
    EXPECT_TRUE(c.holds());
    EXPECT_TRUE(c.lhs.is_zero());
}
