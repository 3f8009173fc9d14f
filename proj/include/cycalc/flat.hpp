#pragma once

// Ring maps between affine presentations declared flat of relative
// dimension d; pullback of functions and cycles; rational-equivalence
// generators and their pullbacks.

#include <string>
#include <vector>

#include "cycalc/meromorphic.hpp"

namespace cycalc {

enum class FlatKind { OpenImmersion, AffineSpaceProjection, FreeWithBasis, ToAffineLine, Declared };

template <class F>
struct FlatTag {
    FlatKind kind = FlatKind::Declared;
    Poly<F> element;            // OpenImmersion: g in the target ring; ToAffineLine: b in the source ring
    std::vector<Poly<F>> basis; // FreeWithBasis, in the source ring
};

template <class F>
std::string to_string(const FlatTag<F>& t) {
    switch (t.kind) {
        case FlatKind::OpenImmersion: return "open immersion " + t.element.to_string();
        case FlatKind::AffineSpaceProjection: return "projection";
        case FlatKind::ToAffineLine: return "affine line";
        case FlatKind::Declared: return "declared";
        case FlatKind::FreeWithBasis: {
            std::string s = "free basis [";
            for (std::size_t i = 0; i < t.basis.size(); ++i) s += (i ? ", " : "") + t.basis[i].to_string();
            return s + "]";
        }
    }
    return "declared";
}

/// f : X -> Y given by f^#(y_j) = images[j] in the ring of X.
template <class F>
struct FlatMap {
    std::string name;
    SchemeDesc<F> source;
    SchemeDesc<F> target;
    std::vector<Poly<F>> images;
    int reldim = 0;
    FlatTag<F> tag;

    Poly<F> pull(const Poly<F>& p) const {
        require_same_ring(target.ring(), p.ring());
        if (images.empty()) return Poly<F>::constant(source.ring(), p.constant_coeff());
        return p.substitute(images);
    }
};

namespace detail {

template <class F>
void check_free_basis(const FlatMap<F>& f);

}  // namespace detail

/// Checks that f^# is well defined and that the flatness tag is consistent.
template <class F>
FlatMap<F> make_flat_map(std::string name, SchemeDesc<F> source, SchemeDesc<F> target, std::vector<Poly<F>> images,
                         int reldim, FlatTag<F> tag) {
    if (images.size() != target.ring()->nvars()) throw Error("map needs one image per target variable");
    for (const auto& p : images) require_same_ring(source.ring(), p.ring());
    FlatMap<F> f{std::move(name), std::move(source), std::move(target), std::move(images), reldim, std::move(tag)};
    for (const auto& g : f.target.ideal.basis())
        if (!f.source.ideal.contains(f.pull(g)))
            throw Error("map does not send " + g.to_string() + " into the source ideal");
    const auto& I = f.source.ideal;
    switch (f.tag.kind) {
        case FlatKind::OpenImmersion:
            if (reldim != 0) throw Error("open immersion must have relative dimension 0");
            if (!I.with(f.pull(f.tag.element)).is_unit())
                throw Error("open immersion element is not invertible on the source");
            break;
        case FlatKind::AffineSpaceProjection: {
            std::vector<bool> used(f.source.ring()->nvars(), false);
            for (const auto& p : f.images) {
                auto vs = p.support_vars();
                if (!p.is_monomial() || vs.size() != 1 || p.total_degree() != 1 || !p.field().is_one(p.lead_coeff()) || used[vs[0]])
                    throw Error("projection images must be distinct source variables");
                used[vs[0]] = true;
            }
            std::vector<Poly<F>> pulled;
            for (const auto& g : f.target.ideal.basis()) pulled.push_back(f.pull(g));
            if (!(Ideal<F>(f.source.ring(), pulled) == I)) throw Error("projection source is not a product with affine space");
            if (reldim != static_cast<int>(f.source.ring()->nvars() - f.target.ring()->nvars()))
                throw Error("projection relative dimension does not match the number of fibre variables");
            break;
        }
        case FlatKind::ToAffineLine:
            if (!is_nonzerodivisor(I, f.tag.element)) throw Error("b is a zero-divisor");
            break;
        case FlatKind::FreeWithBasis:
            detail::check_free_basis(f);
            break;
        case FlatKind::Declared:
            break;
    }
    return f;
}

/// Y -> A^1, t |-> b, flat near V(b).
template <class F>
FlatMap<F> to_affine_line(const SchemeDesc<F>& Y, const Poly<F>& b, const std::string& var = "t") {
    auto line = make_ring(Y.ring()->field(), {var});
    auto A1 = make_scheme(Ideal<F>::zero(line), "A1");
    return make_flat_map<F>("to_affine_line", Y, A1, {b}, scheme_dimension(Y) - 1,
                            FlatTag<F>{FlatKind::ToAffineLine, b, {}});
}

/// f^# r; the pulled-back denominator (and numerator, for invertible r)
/// must stay a non-zerodivisor.
template <class F>
MeroFn<F> pullback_mero(const FlatMap<F>& f, const MeroFn<F>& r) {
    const auto& I = f.source.ideal;
    auto a = f.pull(r.num), b = f.pull(r.den);
    if (!is_nonzerodivisor(I, b) || (r.invertible && !is_nonzerodivisor(I, a)))
        throw Error("pullback not a non-zerodivisor: declared map is not flat");
    return detail::normalise(I, a, b, r.invertible);
}

/// Schematic preimage f^{-1}(V(P)).
template <class F>
Ideal<F> preimage(const FlatMap<F>& f, const Ideal<F>& P) {
    auto gens = f.source.ideal.gens();
    for (const auto& g : P.basis()) gens.push_back(f.pull(g));
    return Ideal<F>(f.source.ring(), std::move(gens));
}

/// f^* alpha = sum of m_P [f^{-1} V(P)], each of dimension dim P + d.
template <class F>
Cycle<F> pullback_cycle(const FlatMap<F>& f, const Cycle<F>& alpha) {
    require_same_ring(f.target.ring(), alpha.ring());
    Cycle<F> out(f.source.ring());
    for (const auto& t : alpha.terms()) {
        if (f.tag.kind == FlatKind::ToAffineLine) {
            auto origin = Poly<F>::variable(f.target.ring(), 0);
            if (!t.prime.contains(origin)) throw Error("outside certified-flat locus");
        }
        auto J = preimage(f, t.prime);
        if (J.is_unit()) continue;
        auto W = make_scheme(J);
        for (const auto& Q : W.comps().primes)
            if (krull_dimension(Q).value_or(-1) != t.dim + f.reldim)
                throw Error("preimage dimension mismatch: map not flat of relative dimension " + std::to_string(f.reldim));
        out = out + fundamental_cycle(W).scaled(t.coeff);
    }
    return out;
}

/// g o f for f : X -> Y and g : Y -> Z.
template <class F>
FlatMap<F> compose(const FlatMap<F>& g, const FlatMap<F>& f, std::string name = {}) {
    require_same_ring(g.source.ring(), f.target.ring());
    std::vector<Poly<F>> images;
    for (const auto& p : g.images) images.push_back(f.pull(p));
    FlatTag<F> tag;
    if (g.tag.kind == FlatKind::OpenImmersion && f.tag.kind == FlatKind::OpenImmersion)
        tag = {FlatKind::OpenImmersion, g.tag.element, {}};
    else if (g.tag.kind == FlatKind::AffineSpaceProjection && f.tag.kind == FlatKind::AffineSpaceProjection)
        tag = {FlatKind::AffineSpaceProjection, {}, {}};
    if (name.empty()) name = g.name + " o " + f.name;
    return make_flat_map(std::move(name), f.source, g.target, std::move(images), g.reldim + f.reldim, std::move(tag));
}

template <class F>
FlatMap<F> identity_map(const SchemeDesc<F>& X) {
    std::vector<Poly<F>> images;
    for (std::size_t i = 0; i < X.ring()->nvars(); ++i) images.push_back(Poly<F>::variable(X.ring(), i));
    return make_flat_map<F>("id", X, X, std::move(images), 0, FlatTag<F>{FlatKind::OpenImmersion, Poly<F>::one(X.ring()), {}});
}

namespace detail {

/// Rank of a family of polynomials as vectors over the coefficient field.
template <class F>
std::size_t linear_rank(std::vector<Poly<F>> rows) {
    std::size_t rank = 0;
    while (!rows.empty()) {
        auto it = std::find_if(rows.begin(), rows.end(), [](const Poly<F>& p) { return !p.is_zero(); });
        if (it == rows.end()) break;
        Poly<F> pivot = it->monic();
        rows.erase(it);
        ++rank;
        for (auto& r : rows) {
            for (const auto& t : r.terms())
                if (t.mono == pivot.lead_mono()) {
                    r = r - pivot.scale(t.coeff);
                    break;
                }
        }
    }
    return rank;
}

/// On fibres over rational points of Y (coordinates drawn from {0, 1, 2, 3}),
/// dim_k of the fibre must be |basis| and the basis must be independent there.
template <class F>
void check_free_basis(const FlatMap<F>& f) {
    const auto& T = f.target.ring();
    const std::size_t n = T->nvars();
    const auto& basis = f.tag.basis;
    if (basis.empty()) throw Error("free basis is empty");
    std::vector<long> pt(n, 0);
    int checked = 0;
    for (;;) {
        std::vector<Poly<F>> m;
        for (std::size_t i = 0; i < n; ++i) m.push_back(Poly<F>::variable(T, i) - Poly<F>::constant(T, pt[i]));
        Ideal<F> point(T, m);
        if (point.contains(f.target.ideal)) {
            auto J = preimage(f, point);
            auto k = krull_dimension(J);
            if (k && *k == 0) {
                std::vector<Poly<F>> nfs;
                for (const auto& b : basis) nfs.push_back(J.normal_form(b));
                if (vector_space_dim(J) != basis.size() || linear_rank(nfs) != basis.size())
                    throw Error("free basis does not span a fibre of the expected size");
                ++checked;
            }
        }
        std::size_t i = 0;
        while (i < n && ++pt[i] == 4) pt[i++] = 0;
        if (i == n) break;
    }
    if (checked == 0) throw Error("free basis could not be checked on any fibre");
}

}  // namespace detail

template <class F>
struct Eq5Report {
    Cycle<F> lhs;
    Cycle<F> rhs;
    Cycle<F> num_lhs, num_rhs;
    Cycle<F> den_lhs, den_rhs;
    bool holds() const { return lhs == rhs; }
    bool factored_holds() const { return num_lhs == num_rhs && den_lhs == den_rhs; }
};

/// f^*[r]_Y against [f^# r]_X; factor-wise for numerator and denominator too.
template <class F>
Eq5Report<F> check_pullback_commutes(const FlatMap<F>& f, const MeroFn<F>& r) {
    Eq5Report<F> rep;
    auto s = pullback_mero(f, r);
    rep.lhs = pullback_cycle(f, weil_divisor(f.target, r));
    rep.rhs = weil_divisor(f.source, s);
    auto down = [&](const Poly<F>& a) { return pullback_cycle(f, fundamental_cycle(f.target.ideal.with(a))); };
    auto up = [&](const Poly<F>& a) { return fundamental_cycle(f.source.ideal.with(a)); };
    rep.num_lhs = down(r.num);
    rep.num_rhs = up(f.pull(r.num));
    rep.den_lhs = down(r.den);
    rep.den_rhs = up(f.pull(r.den));
    return rep;
}

template <class F>
struct RatGenerator {
    Ideal<F> ambient;
    Ideal<F> subvariety;
    MeroFn<F> fn;
    Cycle<F> cycle;
};

/// [r]_V read as a cycle on Y, for a prime V on Y and r invertible on V.
template <class F>
RatGenerator<F> rat_generator(const SchemeDesc<F>& Y, const Ideal<F>& V, const Poly<F>& a, const Poly<F>& b) {
    if (!V.contains(Y.ideal)) throw Error("subvariety does not lie on the scheme");
    auto r = make_mero(V, a, b);
    if (!r.invertible) throw Error("function is not invertible on the subvariety");
    auto Vs = make_scheme(V, {}, {V});
    if (Vs.comps().primes.size() != 1 || !(Vs.comps().primes.front() == V)) throw Error("subvariety is not prime");
    return {Y.ideal, V, r, weil_divisor(Vs, r)};
}

template <class F>
struct Thm6Report {
    Cycle<F> lhs;
    Cycle<F> phi;
    std::vector<Prop32Part<F>> witness;
    Cycle<F> witness_sum;
    bool holds() const { return lhs == phi && witness_sum == lhs; }
};

/// f^*[r]_V = [f^# r]_W on W = f^{-1}(V), decomposed over the components
/// of W into generators of rational equivalence on X.
template <class F>
Thm6Report<F> check_thm6(const FlatMap<F>& f, const RatGenerator<F>& g) {
    Thm6Report<F> rep;
    rep.lhs = pullback_cycle(f, g.cycle);
    auto IW = preimage(f, g.subvariety);
    auto W = make_scheme(IW);
    int n1 = krull_dimension(g.subvariety).value_or(-1);
    auto purity = is_pure_dimensional(W);
    if (!purity.pure || purity.dim != n1 + f.reldim)
        throw Error("preimage dimension mismatch: map not flat of relative dimension " + std::to_string(f.reldim));
    FlatMap<F> onto{f.name, W, make_scheme(g.subvariety, {}, {g.subvariety}), f.images, f.reldim, {}};
    auto s = pullback_mero(onto, g.fn);
    rep.phi = weil_divisor(W, s);
    auto p32 = check_prop32(W, s);
    rep.witness = p32.parts;
    rep.witness_sum = p32.rhs;
    return rep;
}

}  // namespace cycalc
