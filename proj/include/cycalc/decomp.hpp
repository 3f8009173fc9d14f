#pragma once

// Minimal primes by recursive splitting, certification of supplied
// component lists, and pure-dimensionality.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cycalc/groebner.hpp"
#include "cycalc/univariate.hpp"

namespace cycalc {

enum class Provenance { Computed, CertifiedByFixture };

inline std::string to_string(Provenance p) { return p == Provenance::Computed ? "computed" : "certified"; }

template <class F>
struct ComponentSet {
    Ideal<F> ambient;
    std::vector<Ideal<F>> primes;
    Provenance provenance = Provenance::Computed;
};

/// Dimension descending, then canonical basis string ascending.
template <class F>
void sort_canonically(std::vector<Ideal<F>>& primes) {
    std::vector<std::pair<int, std::string>> keys;
    std::vector<std::size_t> idx(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        idx[i] = i;
        keys.emplace_back(krull_dimension(primes[i]).value_or(-1), primes[i].canonical());
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (keys[a].first != keys[b].first) return keys[a].first > keys[b].first;
        return keys[a].second < keys[b].second;
    });
    std::vector<Ideal<F>> out;
    for (auto i : idx) out.push_back(primes[i]);
    primes = std::move(out);
}

/// Drops duplicates and every ideal strictly containing another one.
template <class F>
std::vector<Ideal<F>> inclusion_minimal(const std::vector<Ideal<F>>& in) {
    std::vector<Ideal<F>> uniq;
    for (const auto& P : in)
        if (std::none_of(uniq.begin(), uniq.end(), [&](const Ideal<F>& Q) { return Q == P; })) uniq.push_back(P);
    std::vector<Ideal<F>> out;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        bool minimal = true;
        for (std::size_t j = 0; j < uniq.size() && minimal; ++j)
            if (i != j && uniq[i].contains(uniq[j])) minimal = false;
        if (minimal) out.push_back(uniq[i]);
    }
    return out;
}

/// gcd via (a) : (b) = (a / gcd(a, b)); monic.
template <class F>
Poly<F> poly_gcd(const Poly<F>& a, const Poly<F>& b) {
    if (a.is_zero()) return b.is_zero() ? b : b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly<F>::one(a.ring());
    auto q = ideal_quotient(Ideal<F>::principal(a), b);
    if (q.basis().size() != 1) throw internal_error("quotient of a principal ideal is not principal");
    auto d = exact_divide(a, q.basis().front());
    if (!d) throw internal_error("gcd cofactor does not divide");
    return d->monic();
}

/// Coefficients of f as a polynomial in variable v (index = power of v).
template <class F>
std::vector<Poly<F>> coefficients_in(const Poly<F>& f, std::size_t v) {
    std::vector<std::vector<typename Poly<F>::Term>> buckets(f.degree_in(v) + 1);
    for (const auto& t : f.terms()) {
        auto m = t.mono;
        auto e = m[v];
        m[v] = 0;
        buckets[e].push_back({std::move(m), t.coeff});
    }
    std::vector<Poly<F>> out;
    for (auto& b : buckets) out.push_back(Poly<F>::from_terms(f.ring(), std::move(b)));
    return out;
}

template <class F>
Poly<F> partial_derivative(const Poly<F>& f, std::size_t v) {
    const auto& K = f.field();
    std::vector<typename Poly<F>::Term> out;
    for (const auto& t : f.terms()) {
        if (t.mono[v] == 0) continue;
        auto m = t.mono;
        auto c = K.mul(t.coeff, K.from_int(m[v]));
        --m[v];
        out.push_back({std::move(m), c});
    }
    return Poly<F>::from_terms(f.ring(), std::move(out));
}

inline constexpr int kSplitCandidateBudget = 100;

/// Process-wide cap on splitting candidates; the CLI's --budget sets it.
inline int& split_candidate_budget() {
    static int budget = kSplitCandidateBudget;
    return budget;
}

namespace detail {

template <class F>
class Decomposer {
public:
    using P = Poly<F>;
    using I = Ideal<F>;

    Decomposer(std::vector<I> known, int budget) : known_(std::move(known)), budget_(budget) {}

    std::vector<I> run(const I& J) {
        auto key = J.ring()->to_string() + "|" + J.canonical();
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        auto out = inclusion_minimal(step(J));
        memo_.emplace(key, out);
        return out;
    }

private:
    std::vector<I> step(const I& J) {
        if (J.is_unit()) return {};
        if (J.is_zero()) return {J};
        for (const auto& K : known_)
            if (same_ring(K.ring(), J.ring()) && K == J) return {J};
        if (auto r = monomial_case(J)) return *r;
        if (auto r = univariate_case(J)) return *r;
        if (auto r = solve_variable(J)) return *r;
        if (J.basis().size() == 1)
            if (auto r = principal_case(J)) return *r;
        if (krull_dimension(J) == 0)
            if (auto r = zero_dim_case(J)) return *r;
        if (auto r = split_search(J)) return *r;
        throw Error("decomposition escapes the supported envelope");
    }

    std::vector<I> union_of(const I& J, const std::vector<P>& extra) {
        std::vector<I> all;
        for (const auto& h : extra) {
            auto part = run(J.with(h));
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }

    std::optional<std::vector<I>> monomial_case(const I& J) {
        const auto& B = J.basis();
        if (!std::all_of(B.begin(), B.end(), [](const P& g) { return g.is_monomial(); })) return std::nullopt;
        const std::size_t n = J.ring()->nvars();
        std::vector<std::uint64_t> supports;
        for (const auto& g : B) {
            std::uint64_t s = 0;
            for (std::size_t v = 0; v < n; ++v)
                if (g.lead_mono()[v]) s |= std::uint64_t(1) << v;
            supports.push_back(s);
        }
        std::vector<std::uint64_t> covers;
        for (std::size_t size = 1; size <= n; ++size)
            for (std::uint64_t c = 0; c < (std::uint64_t(1) << n); ++c) {
                if (static_cast<std::size_t>(__builtin_popcountll(c)) != size) continue;
                if (std::any_of(covers.begin(), covers.end(), [&](std::uint64_t d) { return (d & c) == d; }))
                    continue;
                if (std::all_of(supports.begin(), supports.end(), [&](std::uint64_t s) { return s & c; }))
                    covers.push_back(c);
            }
        std::vector<I> out;
        for (auto c : covers) {
            std::vector<P> gens;
            for (std::size_t v = 0; v < n; ++v)
                if (c >> v & 1) gens.push_back(P::variable(J.ring(), v));
            out.emplace_back(J.ring(), std::move(gens));
        }
        return out;
    }

    std::optional<std::vector<I>> univariate_case(const I& J) {
        for (const auto& g : J.basis()) {
            if (g.support_vars().size() != 1) continue;
            std::vector<Factor<F>> fs;
            try {
                fs = factor_univariate(g);
            } catch (const Error&) {
                continue;
            }
            if (fs.size() == 1 && fs.front().multiplicity == 1) continue;
            std::vector<P> parts;
            for (const auto& f : fs) parts.push_back(f.poly);
            return union_of(J, parts);
        }
        return std::nullopt;
    }

    /// A basis element c*v + h with v absent from h: R/J is a quotient of
    /// the ring without v.
    std::optional<std::vector<I>> solve_variable(const I& J) {
        const auto& R = J.ring();
        const std::size_t n = R->nvars();
        for (const auto& g : J.basis())
            for (std::size_t v = 0; v < n; ++v) {
                if (g.degree_in(v) != 1) continue;
                std::optional<typename F::Elem> c;
                bool clean = true;
                for (const auto& t : g.terms())
                    if (t.mono[v]) {
                        if (total_degree(t.mono) != 1) clean = false;
                        else c = t.coeff;
                    }
                if (!clean || !c) continue;
                P lin = P::variable(R, v).scale(*c);
                P image = -(g - lin).scale(R->field().inv(*c));
                return eliminate_with(J, g, v, image);
            }
        return std::nullopt;
    }

    std::vector<I> eliminate_with(const I& J, const P& g, std::size_t v, const P& image) {
        const auto& R = J.ring();
        const std::size_t n = R->nvars();
        std::vector<P> images;
        for (std::size_t i = 0; i < n; ++i) images.push_back(i == v ? image : P::variable(R, i));
        auto reduce = [&](const std::vector<P>& ps) {
            std::vector<P> out;
            for (const auto& p : ps)
                if (!(p == g)) out.push_back(p.substitute(images));
            return out;
        };
        auto rest = reduce(J.basis());
        rest.erase(std::remove_if(rest.begin(), rest.end(), [](const P& p) { return p.is_zero(); }), rest.end());
        if (rest.empty()) return {J};
        if (std::any_of(rest.begin(), rest.end(), [](const P& p) { return p.is_constant(); })) return {};

        std::vector<std::string> names;
        std::vector<std::size_t> down(n, n - 1), up;
        for (std::size_t i = 0; i < n; ++i)
            if (i != v) {
                down[i] = names.size();
                up.push_back(i);
                names.push_back(R->vars()[i]);
            }
        auto order = R->order().kind == OrderKind::Block ? MonomialOrder::grevlex() : R->order();
        auto sub = make_ring(R->field(), names, order);

        std::vector<I> sub_known;
        for (const auto& K : known_)
            if (same_ring(K.ring(), R) && K.contains(g)) sub_known.emplace_back(sub, map_polys(reduce(K.basis()), sub, down));
        Decomposer inner(std::move(sub_known), budget_);
        std::vector<I> out;
        for (const auto& Q : inner.run(I(sub, map_polys(rest, sub, down)))) {
            auto gens = map_polys(Q.basis(), R, up);
            gens.push_back(g);
            out.emplace_back(R, std::move(gens));
        }
        return out;
    }

    std::optional<std::vector<I>> principal_case(const I& J) {
        const P& g = J.basis().front();
        auto support = g.support_vars();
        std::stable_sort(support.begin(), support.end(),
                         [&](std::size_t a, std::size_t b) { return g.degree_in(a) < g.degree_in(b); });

        for (auto v : support) {
            P content(J.ring());
            for (const auto& c : coefficients_in(g, v)) content = poly_gcd(content, c);
            if (!content.is_constant()) return split_principal(J, content);
        }
        for (auto u : support) {
            auto d = poly_gcd(g, partial_derivative(g, u));
            if (!d.is_constant() && d.total_degree() < g.total_degree()) return split_principal(J, d);
        }
        for (auto v : support)
            if (irreducible_by_specialisation(g, v)) return std::vector<I>{J};
        return std::nullopt;
    }

    /// With trivial content in v, specialising the other variables keeps the
    /// degree in v, so an irreducible specialisation certifies irreducibility.
    bool irreducible_by_specialisation(const P& g, std::size_t v) {
        const auto& R = g.ring();
        if (g.degree_in(v) > kDefaultFactorDegreeBound) return false;
        auto coeffs = coefficients_in(g, v);
        std::mt19937_64 rng(0x5eed);
        std::uniform_int_distribution<long> pick(-9, 9);
        for (int attempt = 0; attempt < 48; ++attempt) {
            std::vector<P> point;
            for (std::size_t i = 0; i < R->nvars(); ++i)
                point.push_back(i == v ? P::variable(R, v) : P::constant(R, attempt == 0 ? 0 : pick(rng)));
            if (coeffs.back().substitute(point).is_zero()) continue;
            std::vector<Factor<F>> fs;
            try {
                fs = factor_univariate(g.substitute(point));
            } catch (const Error&) {
                continue;
            }
            if (fs.size() == 1 && fs.front().multiplicity == 1) return true;
        }
        return false;
    }

    std::vector<I> split_principal(const I& J, const P& d) {
        const P& g = J.basis().front();
        auto rest = exact_divide(g, d);
        if (!rest) throw internal_error("factor does not divide");
        auto a = run(I::principal(d));
        auto b = run(I::principal(*rest));
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }

    std::optional<P> minimal_polynomial(const I& J, const P& ell, std::vector<P>& as_images) {
        const auto& R = J.ring();
        auto names = R->vars();
        std::string s = "_s";
        while (R->var_index(s)) s += "_";
        names.push_back(s);
        auto T = make_ring(R->field(), names, MonomialOrder::grevlex());
        auto up = shifted_var_map(R->nvars(), 0);
        auto gens = map_polys(J.basis(), T, up);
        gens.push_back(P::variable(T, R->nvars()) - ell.change_ring(T, up));
        std::vector<std::size_t> drop(R->nvars());
        for (std::size_t i = 0; i < drop.size(); ++i) drop[i] = i;
        auto E = eliminate(I(T, gens), drop);
        if (E.basis().size() != 1) return std::nullopt;
        as_images.clear();
        for (std::size_t i = 0; i < R->nvars(); ++i) as_images.push_back(P::variable(R, i));
        as_images.push_back(ell);
        return E.basis().front();
    }

    std::vector<P> linear_forms(const RingPtr<F>& R) {
        std::vector<P> out;
        const std::size_t n = R->nvars();
        for (std::size_t i = 0; i < n; ++i) out.push_back(P::variable(R, i));
        for (long c : {1L, 2L, -1L, 3L, -2L, 5L})
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) out.push_back(P::variable(R, i) + P::variable(R, j).scale(R->field().from_int(c)));
        if (n >= 3) out.push_back(P::variable(R, 0) + P::variable(R, 1).scale(R->field().from_int(2)) +
                                  P::variable(R, 2).scale(R->field().from_int(5)));
        return out;
    }

    /// Primitive-element test: R/J is a field iff some element has an
    /// irreducible minimal polynomial of degree dim_k R/J.
    std::optional<std::vector<I>> zero_dim_case(const I& J) {
        const auto vd = vector_space_dim(J);
        std::vector<P> images;
        for (const auto& ell : linear_forms(J.ring())) {
            auto mu = minimal_polynomial(J, ell, images);
            if (!mu) continue;
            std::vector<Factor<F>> fs;
            try {
                fs = factor_univariate(*mu);
            } catch (const Error&) {
                continue;
            }
            if (fs.size() == 1 && fs.front().multiplicity == 1) {
                if (mu->total_degree() == vd) return std::vector<I>{J};
                continue;
            }
            std::vector<P> parts;
            for (const auto& f : fs) parts.push_back(f.poly.substitute(images));
            return union_of(J, parts);
        }
        return std::nullopt;
    }

    std::vector<P> split_candidates(const I& J) {
        const auto& R = J.ring();
        const std::size_t n = R->nvars();
        std::vector<P> out;
        for (const auto& g : J.basis()) {
            if (g.support_vars().size() != 1) continue;
            try {
                for (const auto& f : factor_univariate(g)) out.push_back(f.poly);
            } catch (const Error&) {
            }
        }
        for (std::size_t v = 0; v < n; ++v) out.push_back(P::variable(R, v));
        const auto& G = J.gens();
        for (std::size_t i = 0; i < G.size(); ++i)
            for (std::size_t j = i + 1; j < G.size(); ++j) out.push_back(G[i] - G[j]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                out.push_back(P::variable(R, i) - P::variable(R, j));
                out.push_back(P::variable(R, i) + P::variable(R, j));
            }
        for (long c = 1; c <= 3; ++c)
            for (std::size_t v = 0; v < n; ++v) {
                out.push_back(P::variable(R, v) - P::constant(R, c));
                out.push_back(P::variable(R, v) + P::constant(R, c));
            }
        return out;
    }

    /// f with J : f != J and f not in rad(J) splits V(J) into V(J : f^inf) and V(J + (f)).
    std::optional<std::vector<I>> split_search(const I& J) {
        int tried = 0;
        for (const auto& f : split_candidates(J)) {
            if (f.is_zero() || f.is_constant() || J.contains(f)) continue;
            if (++tried > budget_) break;
            if (ideal_quotient(J, f) == J) continue;
            if (radical_member(f, J)) continue;
            auto a = run(saturate(J, f));
            auto b = run(J.with(f));
            a.insert(a.end(), b.begin(), b.end());
            return a;
        }
        return std::nullopt;
    }

    std::vector<I> known_;
    int budget_;
    std::map<std::string, std::vector<I>> memo_;
};

}  // namespace detail

/// Minimal primes of a proper ideal. Primes in `known` are accepted as
/// prime leaves wherever the recursion meets them.
template <class F>
ComponentSet<F> minimal_primes(const Ideal<F>& I, const std::vector<Ideal<F>>& known = {},
                               int budget = split_candidate_budget()) {
    if (I.is_unit()) throw Error("minimal primes of the unit ideal");
    detail::Decomposer<F> d(known, budget);
    auto primes = d.run(I);
    sort_canonically(primes);
    return {I, std::move(primes), Provenance::Computed};
}

struct VerifyResult {
    bool ok = true;
    std::string reason;
};

template <class F>
VerifyResult verify_components(const Ideal<F>& I, const std::vector<Ideal<F>>& C) {
    for (const auto& P : C) {
        require_same_ring(I.ring(), P.ring());
        for (const auto& g : I.gens())
            if (!P.contains(g)) return {false, "generator " + g.to_string() + " not in component " + P.to_string()};
    }
    Ideal<F> meet = Ideal<F>::unit(I.ring());
    for (const auto& P : C) meet = ideal_intersect(meet, P);
    for (const auto& g : meet.basis())
        if (!radical_member(g, I)) return {false, "⋂C ⊄ √I fails for " + g.to_string()};
    for (std::size_t i = 0; i < C.size(); ++i)
        for (std::size_t j = 0; j < C.size(); ++j)
            if (i != j && C[i].contains(C[j])) return {false, "not incomparable"};
    return {};
}

/// A closed subscheme Spec(R/I) with its components, computed or certified.
template <class F>
struct SchemeDesc {
    std::string name;
    Ideal<F> ideal;
    std::optional<ComponentSet<F>> components;

    const RingPtr<F>& ring() const { return ideal.ring(); }

    const ComponentSet<F>& comps() const {
        if (!components) throw Error("decomposition unavailable for " + (name.empty() ? ideal.to_string() : name));
        return *components;
    }
};

/// Builds a scheme, computing components when the decomposition stays in
/// the supported envelope; otherwise components stay unavailable.
template <class F>
SchemeDesc<F> make_scheme(const Ideal<F>& I, std::string name = {}, const std::vector<Ideal<F>>& known = {}) {
    SchemeDesc<F> X{std::move(name), I, std::nullopt};
    if (I.is_unit()) {
        X.components = ComponentSet<F>{I, {}, Provenance::Computed};
        return X;
    }
    try {
        X.components = minimal_primes(I, known);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Math || std::string(e.what()) != "decomposition escapes the supported envelope")
            throw;
    }
    return X;
}

/// Scheme whose component list is supplied and checked with verify_components.
template <class F>
SchemeDesc<F> make_certified_scheme(const Ideal<F>& I, std::string name, std::vector<Ideal<F>> primes) {
    auto v = verify_components(I, primes);
    if (!v.ok) throw Error("component certification failed: " + v.reason);
    sort_canonically(primes);
    return {std::move(name), I, ComponentSet<F>{I, std::move(primes), Provenance::CertifiedByFixture}};
}

struct Purity {
    bool pure = true;
    int dim = -1;
};

template <class F>
Purity is_pure_dimensional(const SchemeDesc<F>& X) {
    const auto& C = X.comps();
    Purity out;
    for (std::size_t i = 0; i < C.primes.size(); ++i) {
        int d = krull_dimension(C.primes[i]).value_or(-1);
        if (i == 0) out.dim = d;
        else if (d != out.dim) out.pure = false;
    }
    if (!out.pure) out.dim = -1;
    return out;
}

}  // namespace cycalc
