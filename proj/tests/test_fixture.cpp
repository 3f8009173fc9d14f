#include <gtest/gtest.h>

#include "corpus_util.hpp"
#include "cycalc/verify.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace cycalc;
using namespace cycalc::testing;

namespace {

Fixture<Rationals> q_fixture(const std::string& content) { return parse_fixture(content, Rationals{}, "t"); }

std::string error_of(const std::string& content) {
    try {
        q_fixture(content);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Fixture, MinimalParses) {
    auto fx = q_fixture("field = Q\nring = x\nscheme X = [x^2]\n");
    ASSERT_NE(fx.schemes.find("X"), nullptr);
    EXPECT_EQ(fundamental_cycle(fx.scheme("X")).to_string(), "2*[x]");
    EXPECT_FALSE(fx.expect_fail());
}

TEST(Fixture, CommentsAndBlankLines) {
    auto fx = q_fixture("# header\n\nfield = Q  # trailing\nring = x, y\n\nideal I = [x]   # comment\n");
    EXPECT_EQ(fx.ideals.find("I")->to_string(), "[x]");
}

TEST(Fixture, ZeroDivisorCarriesLine) {
    EXPECT_EQ(error_of("field = Q\nring = x, y\nscheme X = [x*y]\nmero r on X = (x)/(y)\n"),
              "line 4: denominator is a zero-divisor");
}

TEST(Fixture, CoverOfTheLine) {
    auto fx = q_fixture("field = Q\nring = x\nscheme A = []\ncover U of A = [x, x - 1]\n"
                        "datum D of U = [1*[x - 1] ; 1*[x]]\n");
    auto rep = run_checks(fx, {parse_selector("all"), std::nullopt, 20});
    EXPECT_TRUE(rep.all_pass());
    EXPECT_EQ(glue_cycles(fx.datums.find("D")->datum).to_string(), "1*[x] + 1*[x - 1]");
}

TEST(Fixture, ParseErrorsArePositioned) {
    struct Case {
        std::string body, message;
    };
    const std::vector<Case> cases = {
        {"field = Q\nring = x\nideal I = [x]\nideal I = [x - 1]\n", "line 4: duplicate name 'I'"},
        {"field = Q\nring = x\nwidget W = [x]\n", "line 3: unknown declaration 'widget'"},
        {"field = Q\nring = x\nideal I [x]\n", "line 3: expected '='"},
        {"ring = x\n", "line 1: the first declaration must be `field = ...`"},
        {"field = Q\nideal I = [x]\n", "line 2: no ring declared"},
    };
    for (const auto& c : cases) {
        EXPECT_EQ(error_of(c.body), c.message) << c.body;
        try {
            q_fixture(c.body);
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Parse) << c.body;
        }
    }
    EXPECT_EQ(error_of("# nothing\n"), "missing `field = ...`");
}

TEST(Fixture, ExpectFailCollectsRejections) {
    auto fx = q_fixture("field = Q\nring = x, y\nscheme X = [x*y]\nmero r on X = (x)/(x)\ntag expect-fail\n"
                        "expect fail = zero-divisor\n");
    ASSERT_EQ(fx.rejected.size(), 1u);
    EXPECT_EQ(fx.rejected[0].line, 4u);
    EXPECT_EQ(fx.meros.find("r"), nullptr);
    auto rep = run_checks(fx, {parse_selector("all"), std::nullopt, 20});
    EXPECT_EQ(rep.expectations_failed(), 0u);
    EXPECT_EQ(rep.exit_code(), 1);
}

TEST(Fixture, GroebnerBasisCommand) {
    auto fx = q_fixture("field = Q\nring = x, y\nideal I = [x^2 + y^2 - 1, x - y]\n");
    auto out = run_command(fx, {"gb", "I"});
    EXPECT_EQ(text::join(out, "; "), "x - y; y^2 - 1/2");
}

TEST(Fixture, PrimeFieldPrintsResidues) {
    auto fx = parse_fixture("field = Fp 5\nring = x\nideal I = [x - 1]\n", PrimeField(5), "t");
    EXPECT_EQ(text::join(run_command(fx, {"gb", "I"}), "; "), "x + 4");
}

TEST(Fixture, RoundTripAcrossCorpus) {
    for (const auto& path : corpus_files(CYCALC_CORPUS_DIR)) {
        with_corpus_fixture(path, [&](const auto& fx) {
            using F = std::decay_t<decltype(fx.field)>;
            auto once = print_fixture(fx);
            auto again = parse_fixture(once, fx.field, fx.name);
            EXPECT_EQ(print_fixture(again), once) << path;
            if (fx.expect_fail()) return;
            ASSERT_EQ(again.schemes.items.size(), fx.schemes.items.size()) << path;
            for (const auto& [n, X] : fx.schemes.items) EXPECT_EQ(again.scheme(n).ideal, X.ideal) << path << " " << n;
            for (const auto& [n, m] : fx.meros.items) {
                const auto* m2 = again.meros.find(n);
                ASSERT_NE(m2, nullptr);
                EXPECT_TRUE(mero_equal(m.fn, m2->fn)) << path << " " << n;
            }
            for (const auto& [n, a] : fx.cycles.items) EXPECT_EQ(again.cycles.find(n)->cycle, a.cycle) << path;
            for (const auto& [n, f] : fx.maps.items) {
                const FlatMap<F>* g = again.maps.find(n);
                ASSERT_NE(g, nullptr);
                EXPECT_EQ(print_map(*g), print_map(f)) << path;
            }
        });
    }
}

TEST(Verify, SelectorParsing) {
    EXPECT_TRUE(parse_selector("").empty());
    EXPECT_EQ(parse_selector("all").size(), check_ids().size() + 1);
    EXPECT_EQ(parse_selector("glue,kx"), (std::set<std::string>{"glue", "kx"}));
    EXPECT_THROW(parse_selector("glue,nope"), Error);
}

TEST(Verify, EmptySelectorRunsNothing) {
    with_corpus_fixture(std::string(CYCALC_CORPUS_DIR) + "/two-lines.fix", [](const auto& fx) {
        auto rep = run_checks(fx, {{}, std::nullopt, 20});
        EXPECT_TRUE(rep.checks.empty());
        EXPECT_TRUE(rep.expectations.empty());
        EXPECT_EQ(rep.exit_code(), 0);
    });
}

TEST(Verify, CoordinateCrossCounts) {
    with_corpus_fixture(std::string(CYCALC_CORPUS_DIR) + "/two-lines.fix", [](const auto& fx) {
        auto rep = run_checks(fx, {parse_selector("all"), std::nullopt, 20});
        EXPECT_EQ(rep.checks.size(), 9u);
        EXPECT_EQ(rep.count(Verdict::Pass), 9u);
        EXPECT_EQ(rep.expectations.size(), 5u);
        EXPECT_EQ(rep.expectations_failed(), 0u);
        EXPECT_EQ(rep.exit_code(), 0);
    });
}

TEST(Verify, InconsistentCoverNamesCharts) {
    with_corpus_fixture(std::string(CYCALC_CORPUS_DIR) + "/neg-cover.fix", [](const auto& fx) {
        auto rep = run_checks(fx, {parse_selector("glue"), std::nullopt, 20});
        ASSERT_FALSE(rep.checks.empty());
        bool seen = false;
        for (const auto& c : rep.checks)
            if (c.detail == "inconsistent cover data: component [y] has coefficients 0≠2 on charts 1,2") seen = true;
        EXPECT_TRUE(seen);
        EXPECT_EQ(rep.exit_code(), 1);
    });
}

TEST(Verify, RenderingIsDeterministic) {
    for (const auto& path : corpus_files(CYCALC_CORPUS_DIR)) {
        with_corpus_fixture(path, [&](const auto& fx) {
            VerifyOptions opt{parse_selector("all"), 7, 20};
            auto a = run_checks(fx, opt);
            auto b = run_checks(fx, opt);
            EXPECT_EQ(render_text(a, true), render_text(b, true)) << path;
            EXPECT_EQ(render_json(a, true).dump(), render_json(b, true).dump()) << path;
            EXPECT_EQ(render_json(a, true).count("checks"), 1u);
        });
    }
}

TEST(Oracle, LengthByPowersOnKnownRings) {
    auto R = q_ring({"x", "y"});
    auto m = I(R, {"x", "y"});
    EXPECT_EQ(oracle::length_by_powers(I(R, {"x^2", "y"}), m), 2u);
    EXPECT_EQ(oracle::length_by_powers(I(R, {"x^2", "x*y", "y^2"}), m), 3u);
    EXPECT_EQ(oracle::length_by_powers(I(R, {"x^2 - y^3", "y^2"}), m), 4u);
    auto m2 = I(R, {"x^2 + 1", "y"});
    EXPECT_EQ(oracle::length_by_powers(I(R, {"(x^2 + 1)^3", "y"}), m2), 3u);
}

TEST(Oracle, LocalLengthOnCurves) {
    auto R = q_ring({"x", "y"});
    EXPECT_EQ(oracle::local_length(I(R, {"x^3*y"}), I(R, {"x"})), 3u);
    EXPECT_EQ(oracle::local_length(I(R, {"x^3*y"}), I(R, {"y"})), 1u);
    EXPECT_EQ(oracle::local_length(I(R, {"(y - x^2)^2*(x - 1)"}), I(R, {"y - x^2"})), 2u);
}

TEST(Oracle, PointCount) {
    auto R = fp_ring(7, {"x", "y"});
    auto pts = oracle::fp_points({P(R, "x^2 + y^2 - 1")}, 2, 7);
    EXPECT_EQ(pts.size(), 8u);
    EXPECT_EQ(oracle::fp_points({P(R, "x^2 + 1"), P(R, "y")}, 2, 7).size(), 0u);
}

TEST(Fixture, EmbeddedPrimeDetectsZeroDivisors) {
    auto fx = q_fixture("field = Q\nring = x, y\nscheme X = [x^2, x*y]\nmero r on X = (y)/(x - 1)\n");
    EXPECT_EQ(fx.scheme("X").comps().primes.size(), 1u);
    EXPECT_EQ(error_of("field = Q\nring = x, y\nscheme X = [x^2, x*y]\nmero r on X = (1)/(y)\n"),
              "line 4: denominator is a zero-divisor");
    EXPECT_EQ(error_of("field = Q\nring = x, y\nscheme X = [x^2, x*y]\nmero r on X = (1)/(x)\n"),
              "line 4: denominator is a zero-divisor");
}
