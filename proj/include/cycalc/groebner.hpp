#pragma once

// Buchberger's algorithm and the ideal toolbox built on reduced Groebner
// bases: membership, sums, products, intersections, quotients,
// saturation, elimination, dimension and vector-space dimension.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cycalc/poly.hpp"

namespace cycalc {

/// Complete reduction of f by basis (every term, not only the leading one).
template <class F>
Poly<F> reduce_full(Poly<F> f, const std::vector<Poly<F>>& basis) {
    const auto& K = f.field();
    std::vector<typename Poly<F>::Term> remainder;
    while (!f.is_zero()) {
        const auto& lm = f.lead_mono();
        const Poly<F>* divisor = nullptr;
        for (const auto& g : basis) {
            if (divides(g.lead_mono(), lm)) {
                divisor = &g;
                break;
            }
        }
        if (divisor) {
            auto c = K.mul(f.lead_coeff(), K.inv(divisor->lead_coeff()));
            f = f - divisor->mul_term(monomial_div(lm, divisor->lead_mono()), c);
        } else {
            remainder.push_back({lm, f.lead_coeff()});
            f = f.drop_lead();
        }
    }
    return Poly<F>::from_terms(f.ring(), std::move(remainder));
}

/// Exact quotient h / f, or nullopt when f does not divide h.
template <class F>
std::optional<Poly<F>> exact_divide(Poly<F> h, const Poly<F>& f) {
    require_same_ring(h.ring(), f.ring());
    if (f.is_zero()) throw internal_error("division by the zero polynomial");
    const auto& K = h.field();
    Poly<F> q(h.ring());
    auto inv = K.inv(f.lead_coeff());
    while (!h.is_zero()) {
        if (!divides(f.lead_mono(), h.lead_mono())) return std::nullopt;
        auto m = monomial_div(h.lead_mono(), f.lead_mono());
        auto c = K.mul(h.lead_coeff(), inv);
        q = q + Poly<F>::monomial(h.ring(), m, c);
        h = h - f.mul_term(m, c);
    }
    return q;
}

namespace detail {

template <class F>
Poly<F> s_polynomial(const Poly<F>& f, const Poly<F>& g) {
    auto l = monomial_lcm(f.lead_mono(), g.lead_mono());
    const auto& K = f.field();
    return f.mul_term(monomial_div(l, f.lead_mono()), K.inv(f.lead_coeff())) -
           g.mul_term(monomial_div(l, g.lead_mono()), K.inv(g.lead_coeff()));
}

}  // namespace detail

/// Reduced monic Groebner basis, sorted ascending by leading monomial.
/// Normal selection strategy (grevlex on the lcm, ties by index) with
/// Buchberger's product and chain criteria.
template <class F>
std::vector<Poly<F>> groebner_basis(const RingPtr<F>& ring, const std::vector<Poly<F>>& gens) {
    using P = Poly<F>;
    std::vector<P> G;
    for (const auto& g : gens) {
        require_same_ring(ring, g.ring());
        if (g.is_zero()) continue;
        if (g.is_constant()) return {P::one(ring)};
        G.push_back(g.monic());
    }
    if (G.empty()) return {};

    struct Pair {
        std::size_t i, j;
        Monomial lcm;
    };
    std::vector<Pair> queue;
    std::set<std::pair<std::size_t, std::size_t>> pending;
    auto add_pairs_for = [&](std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            queue.push_back({i, k, monomial_lcm(G[i].lead_mono(), G[k].lead_mono())});
            pending.insert({i, k});
        }
    };
    for (std::size_t k = 1; k < G.size(); ++k) add_pairs_for(k);

    const MonomialOrder selection = MonomialOrder::grevlex();
    while (!queue.empty()) {
        auto best = std::min_element(queue.begin(), queue.end(), [&](const Pair& a, const Pair& b) {
            int c = compare_monomials(selection, a.lcm, b.lcm);
            if (c != 0) return c < 0;
            return std::tie(a.i, a.j) < std::tie(b.i, b.j);
        });
        Pair pr = *best;
        queue.erase(best);
        pending.erase({pr.i, pr.j});

        if (coprime(G[pr.i].lead_mono(), G[pr.j].lead_mono())) continue;
        bool chain = false;
        for (std::size_t k = 0; k < G.size() && !chain; ++k) {
            if (k == pr.i || k == pr.j) continue;
            if (!divides(G[k].lead_mono(), pr.lcm)) continue;
            auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
            if (!pending.count(key(pr.i, k)) && !pending.count(key(pr.j, k))) chain = true;
        }
        if (chain) continue;

        P h = reduce_full(detail::s_polynomial(G[pr.i], G[pr.j]), G);
        if (h.is_zero()) continue;
        if (h.is_constant()) return {P::one(ring)};
        G.push_back(h.monic());
        add_pairs_for(G.size() - 1);
    }

    // minimalize
    std::vector<P> minimal;
    for (std::size_t a = 0; a < G.size(); ++a) {
        bool redundant = false;
        for (std::size_t b = 0; b < G.size() && !redundant; ++b) {
            if (a == b) continue;
            if (divides(G[b].lead_mono(), G[a].lead_mono()) && (G[b].lead_mono() != G[a].lead_mono() || b < a))
                redundant = true;
        }
        if (!redundant) minimal.push_back(G[a]);
    }
    // interreduce
    std::vector<P> reduced;
    for (std::size_t a = 0; a < minimal.size(); ++a) {
        std::vector<P> others;
        for (std::size_t b = 0; b < minimal.size(); ++b)
            if (b != a) others.push_back(minimal[b]);
        reduced.push_back((minimal[a].lead_term() + reduce_full(minimal[a].drop_lead(), others)).monic());
    }
    std::sort(reduced.begin(), reduced.end(),
              [&](const P& x, const P& y) { return ring->compare(x.lead_mono(), y.lead_mono()) < 0; });
    return reduced;
}

/// An ideal of a polynomial ring together with its reduced Groebner basis
/// for the ring's order, computed at construction. Immutable.
template <class F>
class Ideal {
public:
    using P = Poly<F>;

    Ideal() = default;

    Ideal(RingPtr<F> ring, std::vector<P> gens) : ring_(std::move(ring)) {
        for (auto& g : gens) {
            require_same_ring(ring_, g.ring());
            if (!g.is_zero()) gens_.push_back(std::move(g));
        }
        basis_ = groebner_basis(ring_, gens_);
    }

    static Ideal zero(RingPtr<F> ring) { return Ideal(std::move(ring), {}); }
    static Ideal unit(RingPtr<F> ring) {
        auto one = P::one(ring);
        return Ideal(std::move(ring), {one});
    }
    static Ideal principal(const P& f) { return Ideal(f.ring(), {f}); }

    const RingPtr<F>& ring() const { return ring_; }
    const std::vector<P>& gens() const { return gens_; }
    const std::vector<P>& basis() const { return basis_; }

    bool is_unit() const { return basis_.size() == 1 && basis_.front().is_constant(); }
    bool is_zero() const { return basis_.empty(); }

    P normal_form(const P& f) const {
        require_same_ring(ring_, f.ring());
        return reduce_full(f, basis_);
    }

    bool contains(const P& f) const { return normal_form(f).is_zero(); }

    /// J is a subset of this ideal.
    bool contains(const Ideal& J) const {
        require_same_ring(ring_, J.ring_);
        return std::all_of(J.basis_.begin(), J.basis_.end(), [&](const P& g) { return contains(g); });
    }

    bool operator==(const Ideal& J) const {
        if (!same_ring(ring_, J.ring_) || basis_.size() != J.basis_.size()) return false;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (!(basis_[i] == J.basis_[i])) return false;
        return true;
    }

    Ideal with(const P& f) const {
        auto g = gens_;
        g.push_back(f);
        return Ideal(ring_, std::move(g));
    }

    /// Reduced basis joined by ", "; "0" for the zero ideal.
    std::string canonical() const {
        if (basis_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < basis_.size(); ++i) s += (i ? ", " : "") + basis_[i].to_string();
        return s;
    }

    std::string to_string() const { return "[" + canonical() + "]"; }

private:
    RingPtr<F> ring_;
    std::vector<P> gens_;
    std::vector<P> basis_;
};

template <class F>
std::vector<Poly<F>> map_polys(const std::vector<Poly<F>>& ps, const RingPtr<F>& target,
                               const std::vector<std::size_t>& var_map) {
    std::vector<Poly<F>> out;
    for (const auto& p : ps) out.push_back(p.change_ring(target, var_map));
    return out;
}

template <class F>
Ideal<F> map_ideal(const Ideal<F>& I, const RingPtr<F>& target, const std::vector<std::size_t>& var_map) {
    return Ideal<F>(target, map_polys(I.basis(), target, var_map));
}

/// Same variables, different monomial order.
template <class F>
Ideal<F> with_order(const Ideal<F>& I, MonomialOrder order) {
    auto ring = make_ring(I.ring()->field(), I.ring()->vars(), order);
    return map_ideal(I, ring, shifted_var_map(I.ring()->nvars(), 0));
}

template <class F>
Ideal<F> ideal_sum(const Ideal<F>& I, const Ideal<F>& J) {
    require_same_ring(I.ring(), J.ring());
    auto g = I.gens();
    g.insert(g.end(), J.gens().begin(), J.gens().end());
    return Ideal<F>(I.ring(), std::move(g));
}

template <class F>
Ideal<F> ideal_product(const Ideal<F>& I, const Ideal<F>& J) {
    require_same_ring(I.ring(), J.ring());
    std::vector<Poly<F>> g;
    for (const auto& a : I.basis())
        for (const auto& b : J.basis()) g.push_back(a * b);
    return Ideal<F>(I.ring(), std::move(g));
}

namespace detail {

/// Keeps basis elements free of the leading `count` variables of `ext` and maps them back.
template <class F>
Ideal<F> contract_leading(const std::vector<Poly<F>>& gens_in_ext, const RingPtr<F>& ext, std::size_t count,
                          const RingPtr<F>& back, const std::vector<std::size_t>& back_map) {
    auto G = groebner_basis(ext, gens_in_ext);
    std::vector<Poly<F>> kept;
    for (const auto& g : G) {
        bool free = true;
        for (std::size_t v = 0; v < count && free; ++v) free = g.degree_in(v) == 0;
        if (free) kept.push_back(g.change_ring(back, back_map));
    }
    return Ideal<F>(back, std::move(kept));
}

}  // namespace detail

/// I ∩ J via t*I + (1 - t)*J, eliminating t.
template <class F>
Ideal<F> ideal_intersect(const Ideal<F>& I, const Ideal<F>& J) {
    require_same_ring(I.ring(), J.ring());
    const auto& R = I.ring();
    if (I.is_unit()) return J;
    if (J.is_unit()) return I;
    if (I.is_zero() || J.is_zero()) return Ideal<F>::zero(R);
    auto T = ring_with_leading_vars(R, 1);
    auto up = shifted_var_map(R->nvars(), 1);
    auto t = Poly<F>::variable(T, 0);
    auto one_minus_t = Poly<F>::one(T) - t;
    std::vector<Poly<F>> g;
    for (const auto& a : I.basis()) g.push_back(t * a.change_ring(T, up));
    for (const auto& b : J.basis()) g.push_back(one_minus_t * b.change_ring(T, up));
    std::vector<std::size_t> down(T->nvars());
    down[0] = R->nvars();
    for (std::size_t i = 1; i < T->nvars(); ++i) down[i] = i - 1;
    return detail::contract_leading(g, T, 1, R, down);
}

/// I : (f)
template <class F>
Ideal<F> ideal_quotient(const Ideal<F>& I, const Poly<F>& f) {
    require_same_ring(I.ring(), f.ring());
    if (f.is_zero() || I.contains(f)) return Ideal<F>::unit(I.ring());
    auto meet = ideal_intersect(I, Ideal<F>::principal(f));
    std::vector<Poly<F>> q;
    for (const auto& h : meet.basis()) {
        auto d = exact_divide(h, f);
        if (!d) throw internal_error("intersection with (f) produced a non-multiple of f");
        q.push_back(*d);
    }
    return Ideal<F>(I.ring(), std::move(q));
}

/// I : J = intersection of I : g over generators g of J.
template <class F>
Ideal<F> ideal_quotient(const Ideal<F>& I, const Ideal<F>& J) {
    require_same_ring(I.ring(), J.ring());
    Ideal<F> acc = Ideal<F>::unit(I.ring());
    for (const auto& g : J.basis()) acc = ideal_intersect(acc, ideal_quotient(I, g));
    return acc;
}

inline constexpr int kSaturationCap = 64;

/// I : f^∞ by iterated quotients.
template <class F>
Ideal<F> saturate(const Ideal<F>& I, const Poly<F>& f) {
    Ideal<F> cur = I;
    for (int k = 0; k < kSaturationCap; ++k) {
        Ideal<F> next = ideal_quotient(cur, f);
        if (next == cur) return cur;
        cur = std::move(next);
    }
    throw Error("saturation did not stabilize within 64 iterations");
}

template <class F>
Ideal<F> saturate(const Ideal<F>& I, const Ideal<F>& J) {
    Ideal<F> cur = I;
    for (int k = 0; k < kSaturationCap; ++k) {
        Ideal<F> next = ideal_quotient(cur, J);
        if (next == cur) return cur;
        cur = std::move(next);
    }
    throw Error("saturation did not stabilize within 64 iterations");
}

/// I ∩ k[variables not in S], expressed in the original ring.
template <class F>
Ideal<F> eliminate(const Ideal<F>& I, const std::vector<std::size_t>& S) {
    const auto& R = I.ring();
    if (S.empty()) return I;
    std::vector<bool> in_s(R->nvars(), false);
    for (auto v : S) {
        if (v >= R->nvars()) throw Error("elimination variable out of range");
        in_s[v] = true;
    }
    std::vector<std::string> names;
    std::vector<std::size_t> to_ext(R->nvars()), back(R->nvars());
    for (std::size_t v = 0; v < R->nvars(); ++v)
        if (in_s[v]) {
            to_ext[v] = names.size();
            back[names.size()] = v;
            names.push_back(R->vars()[v]);
        }
    std::size_t count = names.size();
    for (std::size_t v = 0; v < R->nvars(); ++v)
        if (!in_s[v]) {
            to_ext[v] = names.size();
            back[names.size()] = v;
            names.push_back(R->vars()[v]);
        }
    auto ext = make_ring(R->field(), names, MonomialOrder::block(count));
    return detail::contract_leading(map_polys(I.basis(), ext, to_ext), ext, count, R, back);
}

/// f ∈ √I iff I + (1 - t f) is the unit ideal.
template <class F>
bool radical_member(const Poly<F>& f, const Ideal<F>& I) {
    require_same_ring(I.ring(), f.ring());
    if (I.contains(f)) return true;
    const auto& R = I.ring();
    auto T = ring_with_leading_vars(R, 1);
    auto up = shifted_var_map(R->nvars(), 1);
    auto g = map_polys(I.basis(), T, up);
    g.push_back(Poly<F>::one(T) - Poly<F>::variable(T, 0) * f.change_ring(T, up));
    auto G = groebner_basis(T, g);
    return G.size() == 1 && G.front().is_constant();
}

namespace detail {

inline bool independent(const std::vector<Monomial>& lms, const std::vector<bool>& chosen) {
    for (const auto& m : lms) {
        bool inside = true;
        for (std::size_t v = 0; v < m.size() && inside; ++v)
            if (m[v] && !chosen[v]) inside = false;
        if (inside) return false;
    }
    return true;
}

template <class F>
std::vector<Monomial> leading_monomials(const Ideal<F>& I) {
    std::vector<Monomial> lms;
    for (const auto& g : I.basis()) lms.push_back(g.lead_mono());
    return lms;
}

}  // namespace detail

/// Lexicographically first independent variable set of maximal size modulo
/// the leading-term ideal; nullopt for the unit ideal.
template <class F>
std::optional<std::vector<std::size_t>> maximal_independent_set(const Ideal<F>& I) {
    if (I.is_unit()) return std::nullopt;
    const std::size_t n = I.ring()->nvars();
    auto lms = detail::leading_monomials(I);
    for (std::size_t size = n + 1; size-- > 0;) {
        std::vector<std::size_t> idx(size);
        for (std::size_t k = 0; k < size; ++k) idx[k] = k;
        for (;;) {
            std::vector<bool> chosen(n, false);
            for (auto v : idx) chosen[v] = true;
            if (detail::independent(lms, chosen)) return idx;
            // next combination in lexicographic order
            std::size_t k = size;
            while (k > 0 && idx[k - 1] == n - size + (k - 1)) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return std::vector<std::size_t>{};
}

/// Dimension of V(I); nullopt ("empty") for the unit ideal.
template <class F>
std::optional<int> krull_dimension(const Ideal<F>& I) {
    auto s = maximal_independent_set(I);
    if (!s) return std::nullopt;
    return static_cast<int>(s->size());
}

/// Number of monomials in the variables `ys` divisible by none of the
/// projections of `lms` onto `ys`. Throws when the count is infinite.
inline std::size_t count_standard_monomials(const std::vector<Monomial>& lms, const std::vector<std::size_t>& ys) {
    std::vector<Monomial> proj;
    for (const auto& m : lms) {
        Monomial p(ys.size());
        for (std::size_t k = 0; k < ys.size(); ++k) p[k] = m[ys[k]];
        proj.push_back(std::move(p));
    }
    std::vector<std::uint32_t> bound(ys.size(), 0);
    for (std::size_t k = 0; k < ys.size(); ++k) {
        bool found = false;
        for (const auto& p : proj) {
            bool pure = p[k] > 0;
            for (std::size_t j = 0; j < p.size() && pure; ++j)
                if (j != k && p[j] != 0) pure = false;
            if (pure && (!found || p[k] < bound[k])) {
                bound[k] = p[k];
                found = true;
            }
        }
        if (!found) throw Error("not zero-dimensional");
    }
    std::size_t count = 0;
    Monomial cur(ys.size(), 0);
    std::function<void(std::size_t)> walk = [&](std::size_t k) {
        if (k == ys.size()) {
            for (const auto& p : proj)
                if (divides(p, cur)) return;
            ++count;
            return;
        }
        for (std::uint32_t e = 0; e < bound[k]; ++e) {
            cur[k] = e;
            walk(k + 1);
        }
        cur[k] = 0;
    };
    walk(0);
    return count;
}

/// dim_k R/I for a zero-dimensional (or unit) ideal.
template <class F>
std::size_t vector_space_dim(const Ideal<F>& I) {
    if (I.is_unit()) return 0;
    auto d = krull_dimension(I);
    if (d && *d > 0) throw Error("not zero-dimensional");
    std::vector<std::size_t> all(I.ring()->nvars());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    return count_standard_monomials(detail::leading_monomials(I), all);
}

}  // namespace cycalc
