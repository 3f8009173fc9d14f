#pragma once

// Fractions a/b with b a non-zerodivisor modulo I, their divisors, and
// restriction to components and charts.

#include <string>
#include <vector>

#include "cycalc/multiplicity.hpp"

namespace cycalc {

/// I : b == I.
template <class F>
bool is_nonzerodivisor(const Ideal<F>& I, const Poly<F>& b) {
    require_same_ring(I.ring(), b.ring());
    if (I.is_unit()) return true;
    if (I.contains(b)) return false;
    return ideal_quotient(I, b) == I;
}

template <class F>
struct MeroFn {
    Ideal<F> ambient;
    Poly<F> num;
    Poly<F> den;
    bool invertible = false;

    const RingPtr<F>& ring() const { return ambient.ring(); }
    std::string to_string() const { return "(" + num.to_string() + ")/(" + den.to_string() + ")"; }
};

namespace detail {

/// Normal forms, common factors cancelled, monic denominator.
template <class F>
MeroFn<F> normalise(const Ideal<F>& I, Poly<F> a, Poly<F> b, bool invertible) {
    a = I.normal_form(a);
    b = I.normal_form(b);
    if (!a.is_zero() && !a.is_constant() && !b.is_constant()) {
        auto g = poly_gcd(a, b);
        if (!g.is_constant()) {
            a = I.normal_form(*exact_divide(a, g));
            b = I.normal_form(*exact_divide(b, g));
        }
    }
    auto inv = b.field().inv(b.lead_coeff());
    return {I, a.scale(inv), b.scale(inv), invertible};
}

}  // namespace detail

/// a/b on Spec(R/I); b must be a non-zerodivisor.
template <class F>
MeroFn<F> make_mero(const Ideal<F>& I, const Poly<F>& a, const Poly<F>& b) {
    if (!is_nonzerodivisor(I, b)) throw Error("denominator is a zero-divisor");
    return detail::normalise(I, a, b, is_nonzerodivisor(I, a));
}

template <class F>
bool mero_equal(const MeroFn<F>& r, const MeroFn<F>& s) {
    require_same_ring(r.ring(), s.ring());
    return r.ambient.contains(r.num * s.den - s.num * r.den);
}

template <class F>
MeroFn<F> mero_mul(const MeroFn<F>& r, const MeroFn<F>& s) {
    require_same_ring(r.ring(), s.ring());
    return detail::normalise(r.ambient, r.num * s.num, r.den * s.den, r.invertible && s.invertible);
}

template <class F>
MeroFn<F> mero_inverse(const MeroFn<F>& r) {
    if (!r.invertible) throw Error("function is not invertible");
    return detail::normalise(r.ambient, r.den, r.num, true);
}

template <class F>
MeroFn<F> mero_div(const MeroFn<F>& r, const MeroFn<F>& s) {
    return mero_mul(r, mero_inverse(s));
}

/// (a mod P)/(b mod P) on Spec(R/P) for a component P.
template <class F>
MeroFn<F> restrict_mero(const MeroFn<F>& r, const Ideal<F>& P) {
    if (!r.invertible) throw Error("function is not invertible");
    if (P.contains(r.num) || P.contains(r.den))
        throw internal_error("function " + r.to_string() + " vanishes on component " + P.to_string());
    return detail::normalise(P, r.num, r.den, true);
}

/// [r]_X = [X/(a)] - [X/(b)].
template <class F>
Cycle<F> weil_divisor(const SchemeDesc<F>& X, const MeroFn<F>& r) {
    if (!r.invertible) throw Error("function is not invertible");
    require_same_ring(X.ring(), r.ring());
    scheme_dimension(X);
    auto known = X.comps().primes;
    auto side = [&](const Poly<F>& s) {
        auto Y = make_scheme(X.ideal.with(s), {}, known);
        if (Y.components && !is_pure_dimensional(Y).pure)
            throw internal_error("principal subscheme of a non-zerodivisor is impure");
        return fundamental_cycle(Y);
    };
    return side(r.num) - side(r.den);
}

/// Sum over codimension-one primes V through a or b of ord_V(r)[V], with
/// ord evaluated one prime at a time.
template <class F>
Cycle<F> divisor_by_orders(const SchemeDesc<F>& X, const MeroFn<F>& r) {
    Cycle<F> out(X.ring());
    std::vector<Ideal<F>> primes;
    for (const auto& s : {r.num, r.den}) {
        auto J = X.ideal.with(s);
        if (J.is_unit()) continue;
        for (const auto& V : minimal_primes(J).primes)
            if (std::none_of(primes.begin(), primes.end(), [&](const Ideal<F>& W) { return W == V; }))
                primes.push_back(V);
    }
    for (const auto& V : primes) out.add(V, ord_at(X, V, r.num) - ord_at(X, V, r.den));
    return out;
}

template <class F>
struct Support {
    std::vector<Ideal<F>> exact;
    Ideal<F> zeros;
    Ideal<F> poles;
};

/// Codimension-one support exactly, plus V(I + (a)) and V(I + (b)) bounding |r|.
template <class F>
Support<F> support(const SchemeDesc<F>& X, const MeroFn<F>& r) {
    Support<F> s;
    auto d = weil_divisor(X, r);
    for (const auto& t : d.terms()) s.exact.push_back(t.prime);
    s.zeros = X.ideal.with(r.num);
    s.poles = X.ideal.with(r.den);
    return s;
}

inline constexpr int kNzdSearchBudget = 200;

/// A k-linear combination of generators of J that is a non-zerodivisor on X.
template <class F>
Poly<F> find_nzd_in_ideal(const Ideal<F>& I, const Ideal<F>& J, int budget = kNzdSearchBudget) {
    require_same_ring(I.ring(), J.ring());
    if (!(ideal_quotient(I, J) == I)) throw Error("annihilator nonzero: no such element exists");
    const auto& gens = J.gens().empty() ? J.basis() : J.gens();
    int tried = 0;
    auto attempt = [&](const Poly<F>& c) {
        ++tried;
        return !c.is_zero() && is_nonzerodivisor(I, c);
    };
    for (const auto& g : gens) {
        if (tried >= budget) throw Error("search budget exceeded");
        if (attempt(g)) return g;
    }
    const auto& K = I.ring()->field();
    for (long c : {1L, -1L, 2L, -2L, 3L, -3L, 5L, 7L})
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = i + 1; j < gens.size(); ++j) {
                if (tried >= budget) throw Error("search budget exceeded");
                auto h = gens[i] + gens[j].scale(K.from_int(c));
                if (attempt(h)) return h;
            }
    throw Error("search budget exceeded");
}

inline constexpr unsigned kLocalisationExponentBound = 16;

/// True when h vanishes in A_f, i.e. f^N h lies in I for some N <= 16.
template <class F>
bool vanishes_on_chart(const Ideal<F>& I, const Poly<F>& f, const Poly<F>& h) {
    if (I.contains(h)) return true;
    if (!saturate(I, f).contains(h)) return false;
    Poly<F> cur = h;
    for (unsigned N = 1; N <= kLocalisationExponentBound; ++N) {
        cur = cur * f;
        if (I.contains(cur)) return true;
    }
    throw Error("localization exponent budget exceeded");
}

struct ChartVerdict {
    std::size_t chart = 0;
    bool ok = true;
    std::string detail;
};

struct KxReport {
    std::vector<ChartVerdict> charts;
    bool separated = true;
    bool holds() const {
        return separated && std::all_of(charts.begin(), charts.end(), [](const ChartVerdict& c) { return c.ok; });
    }
    std::string failing_charts() const {
        std::string s;
        for (const auto& c : charts)
            if (!c.ok) s += (s.empty() ? "" : ",") + std::to_string(c.chart);
        return s;
    }
};

/// Local fraction a_i/b_i on D(f_i); b_i must be a non-zerodivisor of A_{f_i}.
template <class F>
struct LocalFraction {
    Poly<F> num;
    Poly<F> den;
};

/// r restricts to every supplied local, and restricting to 1 everywhere
/// forces r = 1. Charts are numbered from 1.
template <class F>
KxReport kx_sheaf_check(const DistinguishedCover<F>& cover, const MeroFn<F>& r,
                        const std::vector<LocalFraction<F>>& locals) {
    const auto& I = cover.ambient;
    if (locals.size() != cover.elements.size()) throw Error("one local fraction per chart expected");
    KxReport rep;
    bool all_one = true;
    for (std::size_t i = 0; i < locals.size(); ++i) {
        const auto& f = cover.elements[i];
        const auto& loc = locals[i];
        auto If = saturate(I, f);
        if (!If.is_unit() && !is_nonzerodivisor(If, loc.den))
            throw Error("local denominator is a zero-divisor on chart " + std::to_string(i + 1));
        bool same = vanishes_on_chart(I, f, r.num * loc.den - loc.num * r.den);
        rep.charts.push_back({i + 1, same, same ? "" : "restriction differs from " + loc.num.to_string() + "/" + loc.den.to_string()});
        all_one = all_one && vanishes_on_chart(I, f, r.num - r.den);
    }
    if (all_one) rep.separated = I.contains(r.num - r.den);
    return rep;
}

template <class F>
struct Prop32Part {
    Ideal<F> component;
    MeroFn<F> restricted;
    std::int64_t length = 0;
    Cycle<F> divisor;
};

template <class F>
struct Prop32Report {
    Cycle<F> lhs;
    Cycle<F> rhs;
    std::vector<Prop32Part<F>> parts;
    bool holds() const { return lhs == rhs; }
};

/// [r]_X against the sum over components X_i of length(O_{X,X_i}) [r|X_i]_{X_i}.
template <class F>
Prop32Report<F> check_prop32(const SchemeDesc<F>& X, const MeroFn<F>& r) {
    Prop32Report<F> rep{weil_divisor(X, r), Cycle<F>(X.ring()), {}};
    const auto& C = X.comps().primes;
    for (const auto& Pi : C) {
        auto len = static_cast<std::int64_t>(length_at_prime(X.ideal, Pi, C).value);
        auto ri = restrict_mero(r, Pi);
        auto Xi = make_scheme(Pi, {}, {Pi});
        auto d = weil_divisor(Xi, ri);
        rep.rhs = rep.rhs + d.scaled(len);
        rep.parts.push_back({Pi, ri, len, d});
    }
    return rep;
}

}  // namespace cycalc
