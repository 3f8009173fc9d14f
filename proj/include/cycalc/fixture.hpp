#pragma once

// Line-oriented fixture files: rings, ideals, schemes, functions, maps,
// cycles, covers and expectations, resolved eagerly against the kernel.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cycalc/flat.hpp"
#include "cycalc/parse.hpp"

namespace cycalc {

namespace text {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

/// Splits at `sep` occurring outside (), [] nesting.
inline std::vector<std::string> split_top(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(' || c == '[') ++depth;
        else if (c == ')' || c == ']') --depth;
        else if (c == sep && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

/// Index of the bracket closing the one opened at `open`, or npos.
inline std::size_t matching(std::string_view s, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        if (s[i] == '(' || s[i] == '[') ++depth;
        else if (s[i] == ')' || s[i] == ']') {
            if (--depth == 0) return i;
        }
    }
    return std::string_view::npos;
}

inline std::vector<std::string> words(std::string_view s) {
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
    return s;
}

}  // namespace text

template <class F>
struct MeroEntry {
    std::string scheme;
    MeroFn<F> fn;
};

template <class F>
struct CycleEntry {
    std::string scheme;
    Cycle<F> cycle;
};

template <class F>
struct CoverEntry {
    std::string scheme;
    DistinguishedCover<F> cover;
};

template <class F>
struct DatumEntry {
    std::string cover;
    LocalCycleDatum<F> datum;
};

template <class F>
struct LocalsEntry {
    std::string mero;
    std::string cover;
    std::vector<LocalFraction<F>> fractions;
};

template <class F>
struct RatgenEntry {
    std::string scheme;
    RatGenerator<F> gen;
};

struct Composite {
    std::string name, outer, inner;
};

struct Expectation {
    std::vector<std::string> command;
    std::string text;
    std::size_t line = 0;
};

/// A declaration dropped in an expect-fail fixture, with its error.
struct Rejection {
    std::size_t line = 0;
    std::string declaration;
    std::string message;
};

template <class T>
struct Table {
    std::vector<std::pair<std::string, T>> items;

    const T* find(const std::string& name) const {
        for (const auto& [n, v] : items)
            if (n == name) return &v;
        return nullptr;
    }
    T* find(const std::string& name) {
        for (auto& [n, v] : items)
            if (n == name) return &v;
        return nullptr;
    }
};

enum class DeclKind { Ring, Ideal, Scheme, Components, Mero, Map, Cycle, Cover, Datum, Locals, Ratgen, Expect, Tag };

struct Decl {
    DeclKind kind;
    std::string name;
    std::size_t index = 0;
};

template <class F>
struct Fixture {
    std::string name;
    F field;
    std::vector<RingPtr<F>> rings;
    Table<Ideal<F>> ideals;
    Table<SchemeDesc<F>> schemes;
    Table<MeroEntry<F>> meros;
    Table<FlatMap<F>> maps;
    Table<CycleEntry<F>> cycles;
    Table<CoverEntry<F>> covers;
    Table<DatumEntry<F>> datums;
    Table<LocalsEntry<F>> locals;
    Table<RatgenEntry<F>> ratgens;
    std::vector<Composite> composites;
    std::vector<Expectation> expectations;
    std::set<std::string> tags;
    std::vector<Rejection> rejected;
    std::vector<Decl> decls;

    bool expect_fail() const { return tags.count("expect-fail") > 0; }

    const SchemeDesc<F>& scheme(const std::string& n) const {
        if (auto* s = schemes.find(n)) return *s;
        throw Error("unknown scheme '" + n + "'");
    }
};

/// Reads the `field = ...` line without parsing anything else.
inline FieldSpec scan_field(const std::string& content) {
    std::istringstream in(content);
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        auto hash = line.find('#');
        auto t = text::trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos || text::trim(t.substr(0, eq)) != "field")
            throw parse_error("line " + std::to_string(lineno) + ": the first declaration must be `field = ...`");
        auto w = text::words(t.substr(eq + 1));
        if (w.size() == 1 && w[0] == "Q") return {FieldKind::Rationals, 0};
        if (w.size() == 2 && w[0] == "Fp") {
            unsigned long p = 0;
            try {
                p = std::stoul(w[1]);
            } catch (const std::exception&) {
                throw parse_error("line " + std::to_string(lineno) + ": bad characteristic '" + w[1] + "'");
            }
            if (!is_prime_u32(p) || p >= (1ul << 31))
                throw parse_error("line " + std::to_string(lineno) + ": characteristic must be a prime below 2^31");
            return {FieldKind::PrimeField, static_cast<std::uint32_t>(p)};
        }
        throw parse_error("line " + std::to_string(lineno) + ": field must be `Q` or `Fp <p>`");
    }
    throw parse_error("empty fixture");
}

namespace detail {

template <class F>
class FixtureParser {
public:
    FixtureParser(const F& field, bool tolerant) : tolerant_(tolerant) { fx_.field = field; }

    Fixture<F> run(const std::string& content) {
        std::istringstream in(content);
        for (std::string raw; std::getline(in, raw);) {
            ++line_;
            auto hash = raw.find('#');
            auto t = text::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (t.empty()) continue;
            try {
                declaration(t);
            } catch (const Error& e) {
                std::string msg = e.what();
                if (e.kind() == ErrorKind::Math && tolerant_) {
                    fx_.rejected.push_back({line_, t, msg});
                    continue;
                }
                throw Error(e.kind(), "line " + std::to_string(line_) + ": " + msg);
            }
        }
        if (!seen_field_) throw parse_error("missing `field = ...`");
        return std::move(fx_);
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw parse_error(what); }

    void declaration(const std::string& t) {
        auto kw = text::words(t).front();
        if (kw == "field") return field_decl(t);
        if (!seen_field_) fail("the first declaration must be `field = ...`");
        if (kw == "ring") return ring_decl(t);
        if (kw == "tag") {
            auto w = text::words(t);
            if (w.size() != 2) fail("expected `tag <name>`");
            fx_.tags.insert(w[1]);
            fx_.decls.push_back({DeclKind::Tag, w[1], 0});
            return;
        }
        if (kw == "expect") return expect_decl(t);
        if (fx_.rings.empty() && (kw == "ideal" || kw == "scheme")) fail("no ring declared");
        if (kw == "ideal") return ideal_decl(t);
        if (kw == "scheme") return scheme_decl(t);
        if (kw == "components") return components_decl(t);
        if (kw == "mero") return mero_decl(t);
        if (kw == "map") return map_decl(t);
        if (kw == "cycle") return cycle_decl(t);
        if (kw == "cover") return cover_decl(t);
        if (kw == "datum") return datum_decl(t);
        if (kw == "locals") return locals_decl(t);
        if (kw == "ratgen") return ratgen_decl(t);
        fail("unknown declaration '" + kw + "'");
    }

    /// Splits `<head> = <body>` at the first '='.
    std::pair<std::vector<std::string>, std::string> head_body(const std::string& t) const {
        auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected '='");
        return {text::words(t.substr(0, eq)), text::trim(t.substr(eq + 1))};
    }

    void claim(const std::string& name) {
        if (!is_identifier(name)) fail("bad name '" + name + "'");
        if (!names_.insert(name).second) fail("duplicate name '" + name + "'");
    }

    void field_decl(const std::string& t) {
        if (seen_field_) fail("field declared twice");
        auto spec = scan_field(t);
        if (!(spec == fx_.field.spec())) fail("field does not match the parser's field");
        seen_field_ = true;
    }

    void ring_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 1) fail("expected `ring = v1, v2, ...`");
        std::vector<std::string> vars;
        for (auto& v : text::split_top(body, ',')) {
            if (!is_identifier(v)) fail("bad variable name '" + v + "'");
            if (std::find(vars.begin(), vars.end(), v) != vars.end()) fail("variable '" + v + "' repeated");
            vars.push_back(v);
        }
        fx_.rings.push_back(make_ring(fx_.field, vars));
        fx_.decls.push_back({DeclKind::Ring, {}, fx_.rings.size() - 1});
    }

    const RingPtr<F>& ring() const { return fx_.rings.back(); }

    Poly<F> poly(const RingPtr<F>& R, const std::string& s) const {
        if (s.empty()) fail("empty polynomial");
        return parse_poly(R, s);
    }

    std::string bracket_body(const std::string& s, char open, char close) const {
        auto t = text::trim(s);
        if (t.size() < 2 || t.front() != open || text::matching(t, 0) != t.size() - 1 || t.back() != close)
            fail(std::string("expected ") + open + "..." + close + " in '" + t + "'");
        return t.substr(1, t.size() - 2);
    }

    std::vector<Poly<F>> poly_list(const RingPtr<F>& R, const std::string& s) const {
        auto body = text::trim(bracket_body(s, '[', ']'));
        std::vector<Poly<F>> out;
        if (body.empty()) return out;
        for (auto& p : text::split_top(body, ',')) out.push_back(poly(R, p));
        return out;
    }

    Ideal<F> ideal_ref(const RingPtr<F>& R, const std::string& s) const {
        if (!s.empty() && s.front() == '[') return Ideal<F>(R, poly_list(R, s));
        if (auto* I = fx_.ideals.find(s)) {
            if (!same_ring(I->ring(), R)) fail("ideal '" + s + "' lives in another ring");
            return *I;
        }
        fail("unknown ideal '" + s + "'");
    }

    void ideal_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 2) fail("expected `ideal N = [ ... ]`");
        auto I = Ideal<F>(ring(), poly_list(ring(), body));
        claim(head[1]);
        fx_.ideals.items.emplace_back(head[1], std::move(I));
        fx_.decls.push_back({DeclKind::Ideal, head[1], 0});
    }

    void scheme_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 2) fail("expected `scheme N = <ideal>`");
        auto I = ideal_ref(ring(), body);
        if (I.is_unit()) throw Error("scheme ideal is the unit ideal");
        claim(head[1]);
        fx_.schemes.items.emplace_back(head[1], make_scheme(I, head[1]));
        fx_.decls.push_back({DeclKind::Scheme, head[1], 0});
    }

    SchemeDesc<F>& scheme_ref(const std::string& n) {
        if (auto* s = fx_.schemes.find(n)) return *s;
        fail("unknown scheme '" + n + "'");
    }

    void components_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 2) fail("expected `components N = [ [..], ... ]`");
        auto& X = scheme_ref(head[1]);
        auto inner = text::trim(bracket_body(body, '[', ']'));
        std::vector<Ideal<F>> primes;
        if (!inner.empty())
            for (auto& item : text::split_top(inner, ',')) primes.push_back(Ideal<F>(X.ring(), poly_list(X.ring(), item)));
        X = make_certified_scheme(X.ideal, X.name, std::move(primes));
        fx_.decls.push_back({DeclKind::Components, head[1], 0});
    }

    /// `(a)/(b)`, or a bare `(a)` meaning a/1.
    std::pair<Poly<F>, Poly<F>> fraction(const RingPtr<F>& R, const std::string& s) const {
        auto t = text::trim(s);
        if (t.empty() || t.front() != '(') fail("expected (a)/(b), got '" + t + "'");
        auto close = text::matching(t, 0);
        if (close == std::string::npos) fail("unbalanced parentheses in '" + t + "'");
        auto a = poly(R, t.substr(1, close - 1));
        auto rest = text::trim(t.substr(close + 1));
        if (rest.empty()) return {a, Poly<F>::one(R)};
        if (rest.front() != '/') fail("expected '/' in '" + t + "'");
        return {a, poly(R, text::trim(bracket_body(rest.substr(1), '(', ')')))};
    }

    void mero_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 4 || head[2] != "on") fail("expected `mero N on S = (a)/(b)`");
        const auto& X = scheme_ref(head[3]);
        auto [a, b] = fraction(X.ring(), body);
        auto r = make_mero(X.ideal, a, b);
        claim(head[1]);
        fx_.meros.items.emplace_back(head[1], MeroEntry<F>{head[3], std::move(r)});
        fx_.decls.push_back({DeclKind::Mero, head[1], 0});
    }

    FlatTag<F> flat_tag(const std::string& s, const SchemeDesc<F>& src, const SchemeDesc<F>& tgt,
                        const std::vector<Poly<F>>& images) const {
        auto t = text::trim(s);
        if (t == "projection") return {FlatKind::AffineSpaceProjection, {}, {}};
        if (t == "declared") return {};
        if (t == "affine line") {
            if (images.size() != 1) fail("affine line maps need a one-variable target");
            return {FlatKind::ToAffineLine, images[0], {}};
        }
        if (text::starts_with(t, "open immersion ")) return {FlatKind::OpenImmersion, poly(tgt.ring(), text::trim(t.substr(15))), {}};
        if (text::starts_with(t, "free basis ")) return {FlatKind::FreeWithBasis, {}, poly_list(src.ring(), t.substr(11))};
        fail("unknown flatness tag '" + t + "'");
    }

    void map_decl(const std::string& t) {
        auto segs = text::split_top(t, ';');
        auto eq = segs[0].find('=');
        if (eq != std::string::npos) {
            if (segs.size() != 1) fail("expected `map N = G o F`");
            auto head = text::words(segs[0].substr(0, eq));
            auto rhs = text::words(segs[0].substr(eq + 1));
            if (head.size() != 2 || rhs.size() != 3 || rhs[1] != "o") fail("expected `map N = G o F`");
            auto* g = fx_.maps.find(rhs[0]);
            auto* f = fx_.maps.find(rhs[2]);
            if (!g || !f) fail("unknown map '" + (g ? rhs[2] : rhs[0]) + "'");
            if (g->source.name != f->target.name) throw Error("maps do not compose: " + f->target.name + " is not " + g->source.name);
            auto h = compose(*g, *f, head[1]);
            claim(head[1]);
            fx_.composites.push_back({head[1], rhs[0], rhs[2]});
            fx_.maps.items.emplace_back(head[1], std::move(h));
            fx_.decls.push_back({DeclKind::Map, head[1], 0});
            return;
        }
        auto head = text::words(segs[0]);
        if (head.size() != 6 || head[2] != ":" || head[4] != "->")
            fail("expected `map N : S -> T ; v |-> p, ... ; reldim d ; flat = <tag>`");
        const auto& src = scheme_ref(head[3]);
        const auto& tgt = scheme_ref(head[5]);
        const auto& S = src.ring();
        const auto& T = tgt.ring();
        std::vector<std::optional<Poly<F>>> images(T->nvars());
        std::optional<int> reldim;
        std::string tag_text = "declared";
        for (std::size_t k = 1; k < segs.size(); ++k) {
            const auto& seg = segs[k];
            if (seg.find("|->") != std::string::npos) {
                for (auto& item : text::split_top(seg, ',')) {
                    auto arrow = item.find("|->");
                    if (arrow == std::string::npos) fail("expected `v |-> p` in '" + item + "'");
                    auto v = text::trim(item.substr(0, arrow));
                    auto idx = T->var_index(v);
                    if (!idx) fail("'" + v + "' is not a variable of the target ring");
                    if (images[*idx]) fail("variable '" + v + "' mapped twice");
                    images[*idx] = poly(S, text::trim(item.substr(arrow + 3)));
                }
            } else if (text::starts_with(seg, "reldim")) {
                auto w = text::words(seg);
                if (w.size() != 2) fail("expected `reldim d`");
                try {
                    reldim = std::stoi(w[1]);
                } catch (const std::exception&) {
                    fail("bad relative dimension '" + w[1] + "'");
                }
            } else if (text::starts_with(seg, "flat")) {
                auto e = seg.find('=');
                if (e == std::string::npos) fail("expected `flat = <tag>`");
                tag_text = text::trim(seg.substr(e + 1));
            } else {
                fail("unexpected map clause '" + seg + "'");
            }
        }
        if (!reldim) fail("map needs `reldim d`");
        std::vector<Poly<F>> imgs;
        for (std::size_t i = 0; i < images.size(); ++i) {
            if (images[i]) {
                imgs.push_back(*images[i]);
                continue;
            }
            auto same = S->var_index(T->vars()[i]);
            if (!same) fail("no image for target variable '" + T->vars()[i] + "'");
            imgs.push_back(Poly<F>::variable(S, *same));
        }
        auto tag = flat_tag(tag_text, src, tgt, imgs);
        auto f = make_flat_map<F>(head[1], src, tgt, std::move(imgs), *reldim, std::move(tag));
        claim(head[1]);
        fx_.maps.items.emplace_back(head[1], std::move(f));
        fx_.decls.push_back({DeclKind::Map, head[1], 0});
    }

    /// `2*[x] - 1*[y, x]`, `[x]`, `-[x]` or `0`.
    Cycle<F> cycle_text(const SchemeDesc<F>& X, const std::string& s) const {
        auto t = text::trim(s);
        Cycle<F> out(X.ring());
        if (t == "0") return out;
        std::size_t pos = 0;
        auto ws = [&] {
            while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
        };
        bool first = true;
        while (true) {
            ws();
            if (pos >= t.size()) break;
            std::int64_t sign = 1;
            if (t[pos] == '+' || t[pos] == '-') {
                sign = t[pos] == '-' ? -1 : 1;
                ++pos;
                ws();
            } else if (!first) {
                fail("expected '+' or '-' in cycle '" + t + "'");
            }
            std::int64_t c = 1;
            if (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
                std::size_t st = pos;
                while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
                c = std::stoll(t.substr(st, pos - st));
                ws();
                if (pos >= t.size() || t[pos] != '*') fail("expected '*' after coefficient in '" + t + "'");
                ++pos;
                ws();
            }
            if (pos >= t.size() || t[pos] != '[') fail("expected '[' in cycle '" + t + "'");
            auto close = text::matching(t, pos);
            if (close == std::string::npos) fail("unbalanced brackets in cycle '" + t + "'");
            Ideal<F> P(X.ring(), poly_list(X.ring(), t.substr(pos, close - pos + 1)));
            pos = close + 1;
            check_prime_on(X, P);
            out.add(P, sign * c);
            first = false;
        }
        if (first) fail("empty cycle");
        return out;
    }

    void check_prime_on(const SchemeDesc<F>& X, const Ideal<F>& P) const {
        if (P.is_unit()) throw Error("cycle component is the unit ideal");
        if (!P.contains(X.ideal)) throw Error("component " + P.to_string() + " does not lie on the scheme");
        std::vector<Ideal<F>> known;
        if (X.components) known = X.components->primes;
        auto C = minimal_primes(P, known);
        if (C.primes.size() != 1 || !(C.primes.front() == P)) throw Error("component " + P.to_string() + " is not prime");
    }

    void cycle_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 4 || head[2] != "on") fail("expected `cycle N on S = ...`");
        const auto& X = scheme_ref(head[3]);
        auto c = cycle_text(X, body);
        claim(head[1]);
        fx_.cycles.items.emplace_back(head[1], CycleEntry<F>{head[3], std::move(c)});
        fx_.decls.push_back({DeclKind::Cycle, head[1], 0});
    }

    void cover_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 4 || head[2] != "of") fail("expected `cover N of S = [ f1, f2 ]`");
        const auto& X = scheme_ref(head[3]);
        auto U = make_cover(X.ideal, poly_list(X.ring(), body));
        claim(head[1]);
        fx_.covers.items.emplace_back(head[1], CoverEntry<F>{head[3], std::move(U)});
        fx_.decls.push_back({DeclKind::Cover, head[1], 0});
    }

    const CoverEntry<F>& cover_ref(const std::string& n) const {
        if (auto* c = fx_.covers.find(n)) return *c;
        fail("unknown cover '" + n + "'");
    }

    void datum_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 4 || head[2] != "of") fail("expected `datum N of <cover> = [ cycle ; ... ]`");
        const auto& U = cover_ref(head[3]);
        const auto& X = scheme_ref(U.scheme);
        std::vector<Cycle<F>> charts;
        for (auto& c : text::split_top(bracket_body(body, '[', ']'), ';')) charts.push_back(cycle_text(X, c));
        auto d = make_datum(U.cover, std::move(charts));
        claim(head[1]);
        fx_.datums.items.emplace_back(head[1], DatumEntry<F>{head[3], std::move(d)});
        fx_.decls.push_back({DeclKind::Datum, head[1], 0});
    }

    void locals_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 6 || head[2] != "for" || head[4] != "of")
            fail("expected `locals N for <mero> of <cover> = [ (a)/(b) ; ... ]`");
        auto* r = fx_.meros.find(head[3]);
        if (!r) fail("unknown mero '" + head[3] + "'");
        const auto& U = cover_ref(head[5]);
        if (r->scheme != U.scheme) throw Error("mero and cover live on different schemes");
        std::vector<LocalFraction<F>> fr;
        for (auto& item : text::split_top(bracket_body(body, '[', ']'), ';')) {
            auto [a, b] = fraction(r->fn.ring(), item);
            fr.push_back({a, b});
        }
        if (fr.size() != U.cover.elements.size()) throw Error("one local fraction per chart expected");
        claim(head[1]);
        fx_.locals.items.emplace_back(head[1], LocalsEntry<F>{head[3], head[5], std::move(fr)});
        fx_.decls.push_back({DeclKind::Locals, head[1], 0});
    }

    void ratgen_decl(const std::string& t) {
        auto [head, body] = head_body(t);
        if (head.size() != 4 || head[2] != "on") fail("expected `ratgen N on S = ( [V-gens], (a)/(b) )`");
        const auto& Y = scheme_ref(head[3]);
        auto parts = text::split_top(bracket_body(body, '(', ')'), ',');
        if (parts.size() != 2) fail("expected `( [V-gens], (a)/(b) )`");
        Ideal<F> V(Y.ring(), poly_list(Y.ring(), parts[0]));
        auto [a, b] = fraction(Y.ring(), parts[1]);
        auto g = rat_generator(Y, V, a, b);
        claim(head[1]);
        fx_.ratgens.items.emplace_back(head[1], RatgenEntry<F>{head[3], std::move(g)});
        fx_.decls.push_back({DeclKind::Ratgen, head[1], 0});
    }

    void expect_decl(const std::string& t) {
        auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected `expect <command> = <text>`");
        auto cmd = text::words(t.substr(0, eq));
        cmd.erase(cmd.begin());
        if (cmd.empty()) fail("expectation without a command");
        fx_.expectations.push_back({cmd, text::trim(t.substr(eq + 1)), line_});
        fx_.decls.push_back({DeclKind::Expect, {}, fx_.expectations.size() - 1});
    }

    Fixture<F> fx_;
    bool tolerant_ = false;
    bool seen_field_ = false;
    std::size_t line_ = 0;
    std::set<std::string> names_;
};

}  // namespace detail

/// True when some line reads `tag expect-fail`; such fixtures keep going past
/// rejected declarations and record them.
inline bool has_expect_fail_tag(const std::string& content) {
    std::istringstream in(content);
    for (std::string line; std::getline(in, line);) {
        auto hash = line.find('#');
        if (text::words(hash == std::string::npos ? line : line.substr(0, hash)) ==
            std::vector<std::string>{"tag", "expect-fail"})
            return true;
    }
    return false;
}

template <class F>
Fixture<F> parse_fixture(const std::string& content, const F& field, std::string name = {}) {
    auto fx = detail::FixtureParser<F>(field, has_expect_fail_tag(content)).run(content);
    fx.name = std::move(name);
    return fx;
}

template <class F>
std::string print_tag(const FlatTag<F>& t) {
    switch (t.kind) {
        case FlatKind::OpenImmersion: return "open immersion " + t.element.to_string();
        case FlatKind::AffineSpaceProjection: return "projection";
        case FlatKind::ToAffineLine: return "affine line";
        case FlatKind::Declared: return "declared";
        case FlatKind::FreeWithBasis: {
            std::vector<std::string> b;
            for (const auto& p : t.basis) b.push_back(p.to_string());
            return "free basis [" + text::join(b, ", ") + "]";
        }
    }
    return "declared";
}

template <class F>
std::string print_map(const FlatMap<F>& f) {
    std::vector<std::string> im;
    const auto& T = f.target.ring();
    for (std::size_t i = 0; i < f.images.size(); ++i) im.push_back(T->vars()[i] + " |-> " + f.images[i].to_string());
    return "map " + f.name + " : " + f.source.name + " -> " + f.target.name + " ; " + text::join(im, ", ") +
           " ; reldim " + std::to_string(f.reldim) + " ; flat = " + print_tag(f.tag);
}

/// Canonical fixture text: every declaration in its original order, with
/// ideals as reduced bases, functions normalised and cycles sorted.
template <class F>
std::string print_fixture(const Fixture<F>& fx) {
    std::string out = "field = " + fx.field.spec().to_string() + "\n";
    auto line = [&](const std::string& s) { out += s + "\n"; };
    for (const auto& d : fx.decls) {
        switch (d.kind) {
            case DeclKind::Ring: line("ring = " + text::join(fx.rings[d.index]->vars(), ", ")); break;
            case DeclKind::Ideal: line("ideal " + d.name + " = " + fx.ideals.find(d.name)->to_string()); break;
            case DeclKind::Scheme: line("scheme " + d.name + " = " + fx.scheme(d.name).ideal.to_string()); break;
            case DeclKind::Components: {
                std::vector<std::string> ps;
                for (const auto& P : fx.scheme(d.name).comps().primes) ps.push_back(P.to_string());
                line("components " + d.name + " = [" + text::join(ps, ", ") + "]");
                break;
            }
            case DeclKind::Mero: {
                const auto& m = *fx.meros.find(d.name);
                line("mero " + d.name + " on " + m.scheme + " = " + m.fn.to_string());
                break;
            }
            case DeclKind::Map: {
                auto c = std::find_if(fx.composites.begin(), fx.composites.end(),
                                      [&](const Composite& k) { return k.name == d.name; });
                if (c != fx.composites.end()) line("map " + d.name + " = " + c->outer + " o " + c->inner);
                else line(print_map(*fx.maps.find(d.name)));
                break;
            }
            case DeclKind::Cycle: {
                const auto& c = *fx.cycles.find(d.name);
                line("cycle " + d.name + " on " + c.scheme + " = " + c.cycle.to_string());
                break;
            }
            case DeclKind::Cover: {
                const auto& c = *fx.covers.find(d.name);
                std::vector<std::string> es;
                for (const auto& e : c.cover.elements) es.push_back(e.to_string());
                line("cover " + d.name + " of " + c.scheme + " = [" + text::join(es, ", ") + "]");
                break;
            }
            case DeclKind::Datum: {
                const auto& c = *fx.datums.find(d.name);
                std::vector<std::string> cs;
                for (const auto& z : c.datum.charts) cs.push_back(z.to_string());
                line("datum " + d.name + " of " + c.cover + " = [" + text::join(cs, " ; ") + "]");
                break;
            }
            case DeclKind::Locals: {
                const auto& c = *fx.locals.find(d.name);
                std::vector<std::string> fs;
                for (const auto& q : c.fractions) fs.push_back("(" + q.num.to_string() + ")/(" + q.den.to_string() + ")");
                line("locals " + d.name + " for " + c.mero + " of " + c.cover + " = [" + text::join(fs, " ; ") + "]");
                break;
            }
            case DeclKind::Ratgen: {
                const auto& g = *fx.ratgens.find(d.name);
                line("ratgen " + d.name + " on " + g.scheme + " = (" + g.gen.subvariety.to_string() + ", " +
                     g.gen.fn.to_string() + ")");
                break;
            }
            case DeclKind::Expect: {
                const auto& e = fx.expectations[d.index];
                line("expect " + text::join(e.command, " ") + " = " + e.text);
                break;
            }
            case DeclKind::Tag: line("tag " + d.name); break;
        }
    }
    return out;
}

}  // namespace cycalc
