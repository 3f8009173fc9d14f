#pragma once

// Lengths of local rings at minimal primes, fundamental cycles, orders of
// vanishing along codimension-one primes.

#include <string>
#include <vector>

#include "cycalc/cycles.hpp"

namespace cycalc {

enum class LengthMethod { ZeroDimStaircase, GenericFiber };

inline std::string to_string(LengthMethod m) {
    return m == LengthMethod::ZeroDimStaircase ? "ZeroDimStaircase" : "GenericFiber";
}

template <class F>
struct LocalLength {
    Ideal<F> ideal;
    Ideal<F> prime;
    std::size_t value = 0;
    LengthMethod method = LengthMethod::ZeroDimStaircase;
};

/// The P-primary component of I: saturation by a product of generators of
/// the other minimal primes that avoid P.
template <class F>
Ideal<F> primary_component(const Ideal<F>& I, const Ideal<F>& P, const std::vector<Ideal<F>>& minimal) {
    Poly<F> f = Poly<F>::one(I.ring());
    bool any = false;
    for (const auto& Q : minimal) {
        if (Q == P) continue;
        auto it = std::find_if(Q.basis().begin(), Q.basis().end(), [&](const Poly<F>& g) { return !P.contains(g); });
        if (it == Q.basis().end()) throw internal_error("component " + Q.to_string() + " lies inside " + P.to_string());
        f = f * *it;
        any = true;
    }
    return any ? saturate(I, f) : I;
}

/// dim over k(u) of k(u)[y]/J, u a set of variables independent modulo J,
/// read off a Groebner basis for the block order y >> u.
template <class F>
std::size_t generic_fiber_dim(const Ideal<F>& J, const std::vector<std::size_t>& u) {
    const auto& R = J.ring();
    const std::size_t n = R->nvars();
    std::vector<bool> in_u(n, false);
    for (auto v : u) in_u[v] = true;
    std::vector<std::string> names;
    std::vector<std::size_t> to_block(n);
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t v = 0; v < n; ++v)
            if (in_u[v] == (pass == 1)) {
                to_block[v] = names.size();
                names.push_back(R->vars()[v]);
            }
    const std::size_t ny = n - u.size();
    auto B = make_ring(R->field(), names, MonomialOrder::block(ny));
    auto G = map_ideal(J, B, to_block);
    if (G.is_unit()) return 0;
    std::vector<Monomial> lms;
    for (const auto& g : G.basis()) lms.push_back(g.lead_mono());
    std::vector<std::size_t> ys(ny);
    for (std::size_t k = 0; k < ny; ++k) ys[k] = k;
    return count_standard_monomials(lms, ys);
}

/// Length of (R/I)_P for a minimal prime P of I, given all minimal primes.
template <class F>
LocalLength<F> length_at_prime(const Ideal<F>& I, const Ideal<F>& P, const std::vector<Ideal<F>>& minimal) {
    if (std::none_of(minimal.begin(), minimal.end(), [&](const Ideal<F>& Q) { return Q == P; }))
        throw Error("not a minimal prime");
    auto Q = primary_component(I, P, minimal);
    auto u = maximal_independent_set(P);
    if (!u) throw internal_error("unit ideal as a prime");
    std::size_t top, bottom;
    LengthMethod method;
    if (u->empty()) {
        top = vector_space_dim(Q);
        bottom = vector_space_dim(P);
        method = LengthMethod::ZeroDimStaircase;
    } else {
        top = generic_fiber_dim(Q, *u);
        bottom = generic_fiber_dim(P, *u);
        method = LengthMethod::GenericFiber;
    }
    if (bottom == 0 || top % bottom != 0 || top == 0) throw internal_error("length not integral");
    return {I, P, top / bottom, method};
}

/// Convenience form that decomposes I itself; P is accepted as a prime leaf.
template <class F>
LocalLength<F> length_at_prime(const Ideal<F>& I, const Ideal<F>& P) {
    return length_at_prime(I, P, minimal_primes(I, {P}).primes);
}

template <class F>
Cycle<F> fundamental_cycle(const SchemeDesc<F>& X) {
    Cycle<F> out(X.ring());
    if (X.ideal.is_unit()) return out;
    const auto& C = X.comps();
    if (!is_pure_dimensional(X).pure) throw Error("impure scheme: fundamental cycle undefined here");
    for (const auto& P : C.primes)
        out.add(P, static_cast<std::int64_t>(length_at_prime(X.ideal, P, C.primes).value));
    return out;
}

/// Fundamental cycle of Spec(R/I), decomposing I with `known` as prime leaves.
template <class F>
Cycle<F> fundamental_cycle(const Ideal<F>& I, const std::vector<Ideal<F>>& known = {}) {
    auto X = make_scheme(I, {}, known);
    return fundamental_cycle(X);
}

template <class F>
int scheme_dimension(const SchemeDesc<F>& X) {
    auto p = is_pure_dimensional(X);
    if (!p.pure) throw Error("impure scheme: fundamental cycle undefined here");
    return p.dim;
}

/// ord_P(a) = length of O_{X,P}/(a) for a codimension-one prime P of X.
template <class F>
std::int64_t ord_at(const SchemeDesc<F>& X, const Ideal<F>& P, const Poly<F>& a) {
    if (!P.contains(X.ideal)) throw Error("prime does not lie on the scheme");
    if (krull_dimension(P).value_or(-1) != scheme_dimension(X) - 1) throw Error("wrong codimension");
    if (!P.contains(a)) return 0;
    auto Ia = X.ideal.with(a);
    return static_cast<std::int64_t>(length_at_prime(Ia, P).value);
}

struct AdditivityTerm {
    std::string component;
    std::int64_t weight = 0;
    std::int64_t ord = 0;
};

struct AdditivityReport {
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
    std::vector<AdditivityTerm> terms;
    bool holds() const { return lhs == rhs; }
};

/// ord_P(a) on X against the sum over components X_i through P of
/// length(O_{X,X_i}) * ord_P(a | X_i).
template <class F>
AdditivityReport check_length_additivity(const SchemeDesc<F>& X, const Ideal<F>& P, const Poly<F>& a) {
    AdditivityReport rep;
    rep.lhs = ord_at(X, P, a);
    const auto& C = X.comps();
    for (const auto& Pi : C.primes) {
        if (!P.contains(Pi)) continue;
        auto weight = static_cast<std::int64_t>(length_at_prime(X.ideal, Pi, C.primes).value);
        auto Xi = make_scheme(Pi, {}, {Pi});
        auto o = ord_at(Xi, P, a);
        rep.terms.push_back({Pi.to_string(), weight, o});
        rep.rhs += weight * o;
    }
    return rep;
}

}  // namespace cycalc
