#pragma once

// Batch verification over a fixture: every applicable identity check over
// the declared entities, expectations, and canonical text/JSON reports.

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cycalc/fixture.hpp"

namespace cycalc {

inline const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = {"prop31", "prop32", "eq4",  "eq5",   "eq7",
                                                 "glue",   "separated", "kx", "thm6", "functoriality"};
    return ids;
}

/// `all`, empty, or a comma list of check ids (plus `expect`).
inline std::set<std::string> parse_selector(const std::string& s) {
    std::set<std::string> out;
    if (text::trim(s).empty()) return out;
    for (auto& id : text::split_top(s, ',')) {
        if (id == "all") {
            out.insert(check_ids().begin(), check_ids().end());
            out.insert("expect");
        } else if (id == "expect" || std::find(check_ids().begin(), check_ids().end(), id) != check_ids().end()) {
            out.insert(id);
        } else {
            throw parse_error("unknown check '" + id + "'");
        }
    }
    return out;
}

enum class Verdict { Pass, Fail, Error };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Error: return "ERROR";
    }
    return "ERROR";
}

struct CheckRecord {
    std::string id;
    std::string inputs;
    std::string lhs;
    std::string rhs;
    Verdict verdict = Verdict::Pass;
    std::string detail;
    double ms = 0;
};

struct ExpectRecord {
    std::string command;
    std::string expected;
    std::string actual;
    bool ok = false;
};

struct VerifyReport {
    std::string fixture;
    std::string field;
    bool expect_fail = false;
    std::vector<CheckRecord> checks;
    std::vector<ExpectRecord> expectations;
    std::vector<Rejection> rejected;

    std::size_t count(Verdict v) const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [&](const CheckRecord& c) { return c.verdict == v; }));
    }
    std::size_t expectations_failed() const {
        return static_cast<std::size_t>(
            std::count_if(expectations.begin(), expectations.end(), [](const ExpectRecord& e) { return !e.ok; }));
    }
    bool all_pass() const { return count(Verdict::Fail) == 0 && count(Verdict::Error) == 0 && expectations_failed() == 0 && rejected.empty(); }
    /// 0 all pass, 1 any failure, 3 an internal invariant violated.
    int exit_code() const { return count(Verdict::Error) ? 3 : all_pass() ? 0 : 1; }
};

struct CommandOptions {
    MonomialOrder order = MonomialOrder::grevlex();
    bool trace = false;
};

namespace detail {

template <class F>
const Ideal<F>& ideal_or_scheme(const Fixture<F>& fx, const std::string& n) {
    if (auto* I = fx.ideals.find(n)) return *I;
    if (auto* X = fx.schemes.find(n)) return X->ideal;
    throw Error("unknown ideal '" + n + "'");
}

template <class F>
const MeroEntry<F>& mero_ref(const Fixture<F>& fx, const std::string& n) {
    if (auto* r = fx.meros.find(n)) return *r;
    throw Error("unknown mero '" + n + "'");
}

template <class F>
const FlatMap<F>& map_ref(const Fixture<F>& fx, const std::string& n) {
    if (auto* f = fx.maps.find(n)) return *f;
    throw Error("unknown map '" + n + "'");
}

inline void arity(const std::vector<std::string>& cmd, std::size_t n) {
    if (cmd.size() != n + 1) throw parse_error("`" + cmd[0] + "` takes " + std::to_string(n) + " argument(s)");
}

}  // namespace detail

/// Output lines of one query command against a fixture:
/// gb I | components X | fund X | length X P | div X r | glue D | pullback f c.
template <class F>
std::vector<std::string> run_command(const Fixture<F>& fx, const std::vector<std::string>& cmd,
                                     const CommandOptions& opt = {}) {
    if (cmd.empty()) throw parse_error("empty command");
    const auto& c = cmd[0];
    std::vector<std::string> out;
    if (c == "gb") {
        detail::arity(cmd, 1);
        auto I = with_order(detail::ideal_or_scheme(fx, cmd[1]), opt.order);
        for (const auto& g : I.basis()) out.push_back(g.to_string());
        if (out.empty()) out.push_back("0");
    } else if (c == "components") {
        detail::arity(cmd, 1);
        const auto& C = fx.scheme(cmd[1]).comps();
        for (const auto& P : C.primes) out.push_back(P.to_string());
        out.push_back("provenance: " + to_string(C.provenance));
    } else if (c == "fund") {
        detail::arity(cmd, 1);
        out.push_back(fundamental_cycle(fx.scheme(cmd[1])).to_string());
    } else if (c == "length") {
        detail::arity(cmd, 2);
        const auto& X = fx.scheme(cmd[1]);
        const auto& P = detail::ideal_or_scheme(fx, cmd[2]);
        auto L = length_at_prime(X.ideal, P, X.comps().primes);
        out.push_back(std::to_string(L.value) + " " + to_string(L.method));
        if (opt.trace) out.push_back("  primary component " + primary_component(X.ideal, P, X.comps().primes).to_string());
    } else if (c == "div") {
        detail::arity(cmd, 2);
        const auto& X = fx.scheme(cmd[1]);
        const auto& r = detail::mero_ref(fx, cmd[2]);
        if (r.scheme != cmd[1]) throw Error("mero '" + cmd[2] + "' does not live on " + cmd[1]);
        auto d = weil_divisor(X, r.fn);
        out.push_back(d.to_string());
        if (opt.trace) {
            auto by_orders = divisor_by_orders(X, r.fn);
            for (const auto& t : by_orders.terms())
                out.push_back("  ord " + t.prime.to_string() + " = " + std::to_string(t.coeff));
        }
    } else if (c == "glue") {
        detail::arity(cmd, 1);
        auto* d = fx.datums.find(cmd[1]);
        if (!d) throw Error("unknown datum '" + cmd[1] + "'");
        out.push_back(glue_cycles(d->datum).to_string());
    } else if (c == "pullback") {
        detail::arity(cmd, 2);
        const auto& f = detail::map_ref(fx, cmd[1]);
        auto* a = fx.cycles.find(cmd[2]);
        if (!a) throw Error("unknown cycle '" + cmd[2] + "'");
        if (a->scheme != f.target.name) throw Error("cycle '" + cmd[2] + "' does not live on " + f.target.name);
        out.push_back(pullback_cycle(f, a->cycle).to_string());
    } else {
        throw parse_error("unknown command '" + c + "'");
    }
    return out;
}

/// Candidate primes on X for random cycles: components of X and of the
/// hypersurface sections by cover elements and by v - c for small c.
template <class F>
std::vector<Ideal<F>> prime_pool(const SchemeDesc<F>& X, const std::vector<Poly<F>>& extra) {
    std::vector<Ideal<F>> pool;
    auto add_all = [&](const Ideal<F>& J) {
        if (J.is_unit()) return;
        auto S = make_scheme(J, {}, X.comps().primes);
        if (!S.components) return;
        for (const auto& P : S.components->primes)
            if (std::none_of(pool.begin(), pool.end(), [&](const Ideal<F>& Q) { return Q == P; })) pool.push_back(P);
    };
    add_all(X.ideal);
    const auto& R = X.ring();
    for (const auto& f : extra) add_all(X.ideal.with(f));
    for (std::size_t v = 0; v < R->nvars(); ++v)
        for (long c : {0L, 1L, -1L, 2L})
            add_all(X.ideal.with(Poly<F>::variable(R, v) - Poly<F>::constant(R, c)));
    sort_canonically(pool);
    return pool;
}

/// Restriction of alpha to every chart; empty charts get the zero cycle.
template <class F>
LocalCycleDatum<F> restrict_to_charts(const DistinguishedCover<F>& U, const Cycle<F>& alpha) {
    std::vector<Cycle<F>> charts;
    for (const auto& f : U.elements)
        charts.push_back(radical_member(f, U.ambient) ? Cycle<F>(alpha.ring()) : restrict_cycle(alpha, f, U.ambient));
    return make_datum(U, std::move(charts));
}

struct SweepResult {
    std::size_t instances = 0;
    std::size_t round_trips_ok = 0;
    std::string first_failure;
};

/// Random cycles from the pool, restricted to each chart and glued back.
template <class F>
SweepResult random_glue_round_trips(const DistinguishedCover<F>& U, const std::vector<Ideal<F>>& pool,
                                    std::uint64_t seed, std::size_t count) {
    SweepResult res;
    if (pool.empty()) return res;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), nterms(1, 4);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (std::size_t k = 0; k < count; ++k) {
        Cycle<F> alpha(U.ambient.ring());
        for (std::size_t t = nterms(rng); t > 0; --t) alpha.add(pool[pick(rng)], coef(rng));
        ++res.instances;
        auto glued = glue_cycles(restrict_to_charts(U, alpha));
        if (glued == alpha) ++res.round_trips_ok;
        else if (res.first_failure.empty())
            res.first_failure = alpha.to_string() + " glued to " + glued.to_string();
    }
    return res;
}

struct VerifyOptions {
    std::set<std::string> selector;
    std::optional<std::uint64_t> seed;
    std::size_t sweep = 20;
};

namespace detail {

struct Outcome {
    std::string lhs, rhs;
    bool ok = true;
    std::string detail;
};

class Recorder {
public:
    explicit Recorder(VerifyReport& rep) : rep_(rep) {}

    void run(const std::string& id, const std::string& inputs, const std::function<Outcome()>& body) {
        CheckRecord r{id, inputs, {}, {}, Verdict::Pass, {}, 0};
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto o = body();
            r.lhs = o.lhs;
            r.rhs = o.rhs;
            r.verdict = o.ok ? Verdict::Pass : Verdict::Fail;
            r.detail = o.detail;
        } catch (const Error& e) {
            r.verdict = e.kind() == ErrorKind::Internal ? Verdict::Error : Verdict::Fail;
            r.detail = e.what();
        } catch (const std::exception& e) {
            r.verdict = Verdict::Error;
            r.detail = e.what();
        }
        r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rep_.checks.push_back(std::move(r));
    }

private:
    VerifyReport& rep_;
};

template <class F>
std::vector<Poly<F>> divisor_polys(const Fixture<F>& fx, const std::string& scheme) {
    std::vector<Poly<F>> out;
    for (const auto& [n, m] : fx.meros.items) {
        if (m.scheme != scheme || !m.fn.invertible) continue;
        for (const auto& s : {m.fn.num, m.fn.den})
            if (!s.is_constant() && std::none_of(out.begin(), out.end(), [&](const Poly<F>& t) { return t == s; }))
                out.push_back(s);
    }
    return out;
}

}  // namespace detail

template <class F>
VerifyReport run_checks(const Fixture<F>& fx, const VerifyOptions& opt) {
    VerifyReport rep;
    rep.fixture = fx.name;
    rep.field = fx.field.spec().to_string();
    rep.expect_fail = fx.expect_fail();
    rep.rejected = fx.rejected;
    detail::Recorder rec(rep);
    auto on = [&](const std::string& id) { return opt.selector.count(id) > 0; };
    using detail::Outcome;

    for (const auto& [xn, X] : fx.schemes.items) {
        auto polys = detail::divisor_polys(fx, xn);
        if (on("prop31"))
            for (const auto& s : polys)
                rec.run("prop31", xn + "; s = " + s.to_string(), [&] {
                    auto lhs = divisor_by_orders(X, make_mero(X.ideal, s, Poly<F>::one(X.ring())));
                    auto rhs = fundamental_cycle(X.ideal.with(s), X.comps().primes);
                    return Outcome{lhs.to_string(), rhs.to_string(), lhs == rhs, {}};
                });
        if (on("eq4"))
            for (const auto& s : polys) {
                if (X.ideal.with(s).is_unit()) continue;
                std::vector<Ideal<F>> primes;
                try {
                    primes = minimal_primes(X.ideal.with(s), X.comps().primes).primes;
                } catch (const Error& e) {
                    Error copy = e;
                    rec.run("eq4", xn + "; a = " + s.to_string(), [&]() -> Outcome { throw copy; });
                    continue;
                }
                for (const auto& P : primes)
                    rec.run("eq4", xn + "; P = " + P.to_string() + "; a = " + s.to_string(), [&] {
                        auto a = check_length_additivity(X, P, s);
                        std::vector<std::string> ts;
                        for (const auto& t : a.terms)
                            ts.push_back(std::to_string(t.weight) + "*" + std::to_string(t.ord) + " on " + t.component);
                        return Outcome{std::to_string(a.lhs), std::to_string(a.rhs), a.holds(), text::join(ts, " + ")};
                    });
            }
        if (on("prop32"))
            for (const auto& [rn, r] : fx.meros.items)
                if (r.scheme == xn && r.fn.invertible)
                    rec.run("prop32", xn + "; r = " + rn, [&] {
                        auto p = check_prop32(X, r.fn);
                        return Outcome{p.lhs.to_string(), p.rhs.to_string(), p.holds(), {}};
                    });
    }

    for (const auto& [fname, f] : fx.maps.items)
        for (const auto& [rn, r] : fx.meros.items) {
            if (r.scheme != f.target.name || !r.fn.invertible) continue;
            if (!on("eq5") && !on("eq7")) continue;
            std::optional<Eq5Report<F>> cached;
            std::optional<Error> err;
            auto get = [&]() -> const Eq5Report<F>& {
                if (err) throw *err;
                if (!cached) {
                    try {
                        cached = check_pullback_commutes(f, r.fn);
                    } catch (const Error& e) {
                        err = e;
                        throw;
                    }
                }
                return *cached;
            };
            auto inputs = fname + "; r = " + rn;
            if (on("eq5"))
                rec.run("eq5", inputs, [&] {
                    const auto& e = get();
                    return Outcome{e.lhs.to_string(), e.rhs.to_string(), e.holds(), {}};
                });
            if (on("eq7"))
                rec.run("eq7", inputs, [&] {
                    const auto& e = get();
                    return Outcome{"num " + e.num_lhs.to_string() + "; den " + e.den_lhs.to_string(),
                                   "num " + e.num_rhs.to_string() + "; den " + e.den_rhs.to_string(),
                                   e.factored_holds(), {}};
                });
        }

    if (on("glue")) {
        for (const auto& [dn, d] : fx.datums.items)
            rec.run("glue", dn, [&] { return Outcome{glue_cycles(d.datum).to_string(), {}, true, {}}; });
        for (const auto& [un, U] : fx.covers.items)
            for (const auto& [cn, c] : fx.cycles.items) {
                if (c.scheme != U.scheme) continue;
                rec.run("glue", un + "; " + cn, [&] {
                    auto glued = glue_cycles(restrict_to_charts(U.cover, c.cycle));
                    return Outcome{glued.to_string(), c.cycle.to_string(), glued == c.cycle, {}};
                });
            }
        if (opt.seed)
            for (const auto& [un, U] : fx.covers.items)
                rec.run("glue", un + "; random sweep seed " + std::to_string(*opt.seed), [&] {
                    auto pool = prime_pool(fx.scheme(U.scheme), U.cover.elements);
                    auto s = random_glue_round_trips(U.cover, pool, *opt.seed, opt.sweep);
                    return Outcome{std::to_string(s.round_trips_ok) + "/" + std::to_string(s.instances) + " round trips",
                                   std::to_string(s.instances) + "/" + std::to_string(s.instances) + " round trips",
                                   s.round_trips_ok == s.instances, s.first_failure};
                });
    }

    if (on("separated"))
        for (const auto& [un, U] : fx.covers.items)
            rec.run("separated", un, [&] {
                const auto& R = U.cover.ambient.ring();
                std::vector<Cycle<F>> zeros(U.cover.elements.size(), Cycle<F>(R));
                auto glued = glue_cycles(make_datum(U.cover, zeros));
                bool ok = glued.is_zero();
                for (const auto& [cn, c] : fx.cycles.items) {
                    if (c.scheme != U.scheme) continue;
                    auto d = restrict_to_charts(U.cover, c.cycle);
                    bool all_zero = std::all_of(d.charts.begin(), d.charts.end(), [](const Cycle<F>& z) { return z.is_zero(); });
                    if (all_zero && !c.cycle.is_zero()) ok = false;
                }
                return Outcome{glued.to_string(), "0", ok, {}};
            });

    if (on("kx"))
        for (const auto& [ln, L] : fx.locals.items)
            rec.run("kx", ln, [&] {
                const auto& U = fx.covers.find(L.cover)->cover;
                const auto& r = fx.meros.find(L.mero)->fn;
                auto k = kx_sheaf_check(U, r, L.fractions);
                std::string detail;
                if (!k.separated) detail = "restrictions all 1 but r is not 1";
                else if (!k.holds()) detail = "restriction differs on charts " + k.failing_charts();
                return Outcome{r.to_string(), std::to_string(k.charts.size()) + " charts", k.holds(), detail};
            });

    if (on("thm6"))
        for (const auto& [fname, f] : fx.maps.items)
            for (const auto& [gn, g] : fx.ratgens.items) {
                if (g.scheme != f.target.name) continue;
                rec.run("thm6", fname + "; " + gn, [&] {
                    auto t = check_thm6(f, g.gen);
                    std::vector<std::string> w;
                    for (const auto& p : t.witness)
                        w.push_back(std::to_string(p.length) + " x " + p.restricted.to_string() + " on " + p.component.to_string());
                    return Outcome{t.lhs.to_string(), t.phi.to_string(), t.holds(),
                                   w.empty() ? "witness: none" : "witness: " + text::join(w, "; ")};
                });
            }

    if (on("functoriality"))
        for (const auto& c : fx.composites) {
            const auto& h = *fx.maps.find(c.name);
            const auto& g = *fx.maps.find(c.outer);
            const auto& f = *fx.maps.find(c.inner);
            for (const auto& [cn, a] : fx.cycles.items)
                if (a.scheme == g.target.name)
                    rec.run("functoriality", c.name + "; cycle " + cn, [&] {
                        auto lhs = pullback_cycle(h, a.cycle);
                        auto rhs = pullback_cycle(f, pullback_cycle(g, a.cycle));
                        bool id_ok = pullback_cycle(identity_map(g.target), a.cycle) == a.cycle;
                        return Outcome{lhs.to_string(), rhs.to_string(), lhs == rhs && id_ok,
                                       id_ok ? "" : "identity pullback differs"};
                    });
            for (const auto& [rn, r] : fx.meros.items)
                if (r.scheme == g.target.name && r.fn.invertible)
                    rec.run("functoriality", c.name + "; mero " + rn, [&] {
                        auto lhs = pullback_mero(h, r.fn);
                        auto rhs = pullback_mero(f, pullback_mero(g, r.fn));
                        bool id_ok = mero_equal(pullback_mero(identity_map(g.target), r.fn), r.fn);
                        return Outcome{lhs.to_string(), rhs.to_string(), mero_equal(lhs, rhs) && id_ok,
                                       id_ok ? "" : "identity pullback differs"};
                    });
        }

    if (on("expect"))
        for (const auto& e : fx.expectations) {
            ExpectRecord x{text::join(e.command, " "), e.text, {}, false};
            if (e.command == std::vector<std::string>{"fail"}) {
                std::vector<std::string> seen;
                for (const auto& r : rep.checks)
                    if (r.verdict != Verdict::Pass) seen.push_back(r.detail.empty() ? r.id + " verdict" : r.detail);
                for (const auto& r : rep.rejected) seen.push_back(r.message);
                auto hit = std::find_if(seen.begin(), seen.end(), [&](const std::string& s) { return s.find(e.text) != std::string::npos; });
                x.ok = hit != seen.end();
                x.actual = x.ok ? *hit : "no failure mentions it";
            } else {
                try {
                    x.actual = text::join(run_command(fx, e.command), "; ");
                    x.ok = x.actual == e.text;
                } catch (const Error& err) {
                    x.actual = std::string("error: ") + err.what();
                }
            }
            rep.expectations.push_back(std::move(x));
        }
    return rep;
}

inline std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f ms", ms);
    return buf;
}

/// Human-readable report; `stable` drops timings.
inline std::string render_text(const VerifyReport& r, bool stable) {
    std::string s = "fixture " + r.fixture + " (" + r.field + ")" + (r.expect_fail ? " [expect-fail]" : "") + "\n";
    for (const auto& x : r.rejected)
        s += "REJECTED line " + std::to_string(x.line) + ": " + x.message + "\n";
    for (const auto& c : r.checks) {
        s += to_string(c.verdict) + " " + c.id + " | " + c.inputs;
        if (!stable) s += " | " + format_ms(c.ms);
        s += "\n  lhs: " + c.lhs + "\n";
        if (!c.rhs.empty()) s += "  rhs: " + c.rhs + "\n";
        if (!c.detail.empty()) s += "  " + c.detail + "\n";
    }
    for (const auto& e : r.expectations) {
        s += std::string(e.ok ? "PASS" : "FAIL") + " expect " + e.command + "\n";
        if (!e.ok) s += "  expected: " + e.expected + "\n  actual:   " + e.actual + "\n";
    }
    s += "summary: " + std::to_string(r.checks.size()) + " checks, " + std::to_string(r.count(Verdict::Pass)) +
         " pass, " + std::to_string(r.count(Verdict::Fail)) + " fail, " + std::to_string(r.count(Verdict::Error)) +
         " error; " + std::to_string(r.expectations.size()) + " expectations, " +
         std::to_string(r.expectations_failed()) + " unmet; " + std::to_string(r.rejected.size()) + " rejected\n";
    return s;
}

inline nlohmann::ordered_json render_json(const VerifyReport& r, bool stable) {
    using J = nlohmann::ordered_json;
    J j;
    j["fixture"] = r.fixture;
    j["field"] = r.field;
    j["expect_fail"] = r.expect_fail;
    j["rejected"] = J::array();
    for (const auto& x : r.rejected) j["rejected"].push_back({{"line", x.line}, {"declaration", x.declaration}, {"message", x.message}});
    j["checks"] = J::array();
    for (const auto& c : r.checks) {
        J o{{"id", c.id}, {"inputs", c.inputs}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}};
        if (!stable) o["ms"] = c.ms;
        j["checks"].push_back(std::move(o));
    }
    j["expectations"] = J::array();
    for (const auto& e : r.expectations)
        j["expectations"].push_back({{"command", e.command}, {"expected", e.expected}, {"actual", e.actual}, {"ok", e.ok}});
    j["summary"] = {{"checks", r.checks.size()},
                    {"pass", r.count(Verdict::Pass)},
                    {"fail", r.count(Verdict::Fail)},
                    {"error", r.count(Verdict::Error)},
                    {"expectations", r.expectations.size()},
                    {"unmet", r.expectations_failed()},
                    {"rejected", r.rejected.size()}};
    return j;
}

}  // namespace cycalc
