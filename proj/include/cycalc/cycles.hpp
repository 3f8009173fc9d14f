#pragma once

// Graded cycles on an affine scheme, restriction to distinguished opens,
// and gluing of chartwise data over a distinguished cover.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "cycalc/decomp.hpp"

namespace cycalc {

template <class F>
struct CycleTerm {
    Ideal<F> prime;
    int dim = 0;
    std::int64_t coeff = 0;
};

/// Finite integer combination of primes, kept in canonical order with no zero coefficients.
template <class F>
class Cycle {
public:
    using Term = CycleTerm<F>;

    Cycle() = default;
    explicit Cycle(RingPtr<F> ring) : ring_(std::move(ring)) {}

    static Cycle of(const Ideal<F>& prime, std::int64_t coeff = 1) {
        Cycle c(prime.ring());
        c.add(prime, coeff);
        return c;
    }

    const RingPtr<F>& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::int64_t coeff_of(const Ideal<F>& P) const {
        for (const auto& t : terms_)
            if (t.prime == P) return t.coeff;
        return 0;
    }

    void add(const Ideal<F>& prime, std::int64_t coeff) {
        require_same_ring(ring_, prime.ring());
        if (coeff == 0) return;
        for (auto it = terms_.begin(); it != terms_.end(); ++it)
            if (it->prime == prime) {
                it->coeff += coeff;
                if (it->coeff == 0) terms_.erase(it);
                return;
            }
        int d = krull_dimension(prime).value_or(-1);
        if (d < 0) throw Error("cycle component is the unit ideal");
        Term t{prime, d, coeff};
        auto key = prime.canonical();
        auto pos = std::find_if(terms_.begin(), terms_.end(), [&](const Term& u) {
            if (u.dim != d) return u.dim < d;
            return key < u.prime.canonical();
        });
        terms_.insert(pos, std::move(t));
    }

    Cycle operator+(const Cycle& b) const {
        require_same_ring(ring_, b.ring_);
        Cycle r = *this;
        for (const auto& t : b.terms_) r.add(t.prime, t.coeff);
        return r;
    }
    Cycle operator-(const Cycle& b) const { return *this + b.scaled(-1); }
    Cycle scaled(std::int64_t k) const {
        Cycle r(ring_);
        if (k == 0) return r;
        r.terms_ = terms_;
        for (auto& t : r.terms_) t.coeff *= k;
        return r;
    }

    bool operator==(const Cycle& b) const {
        if (terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].coeff != b.terms_[i].coeff || !(terms_[i].prime == b.terms_[i].prime)) return false;
        return true;
    }

    /// `2*[x] - 1*[x - 1, y]`; the zero cycle prints as `0`.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            auto c = terms_[i].coeff;
            auto body = std::to_string(c < 0 ? -c : c) + "*" + terms_[i].prime.to_string();
            if (i == 0) s += (c < 0 ? "-" : "") + body;
            else s += (c < 0 ? " - " : " + ") + body;
        }
        return s;
    }

private:
    RingPtr<F> ring_;
    std::vector<Term> terms_;
};

/// Every term has dimension n.
template <class F>
bool degree_check(const Cycle<F>& a, int n) {
    return std::all_of(a.terms().begin(), a.terms().end(), [&](const CycleTerm<F>& t) { return t.dim == n; });
}

/// Restriction to D(f) inside Spec(R/I): drops the components through V(f).
template <class F>
Cycle<F> restrict_cycle(const Cycle<F>& a, const Poly<F>& f, const Ideal<F>& I) {
    if (radical_member(f, I)) throw Error("empty open set");
    Cycle<F> r(a.ring());
    for (const auto& t : a.terms())
        if (!t.prime.contains(f)) r.add(t.prime, t.coeff);
    return r;
}

template <class F>
struct DistinguishedCover {
    Ideal<F> ambient;
    std::vector<Poly<F>> elements;
};

template <class F>
DistinguishedCover<F> make_cover(const Ideal<F>& I, std::vector<Poly<F>> elements) {
    if (elements.empty()) throw Error("cover needs at least one element");
    for (const auto& f : elements) require_same_ring(I.ring(), f.ring());
    Ideal<F> sum = I;
    for (const auto& f : elements) sum = sum.with(f);
    if (!sum.is_unit()) throw Error("cover elements do not generate the unit ideal");
    return {I, std::move(elements)};
}

template <class F>
struct LocalCycleDatum {
    DistinguishedCover<F> cover;
    std::vector<Cycle<F>> charts;
};

template <class F>
LocalCycleDatum<F> make_datum(DistinguishedCover<F> cover, std::vector<Cycle<F>> charts) {
    if (charts.size() != cover.elements.size()) throw Error("datum needs one cycle per chart");
    for (std::size_t i = 0; i < charts.size(); ++i)
        for (const auto& t : charts[i].terms()) {
            if (!t.prime.contains(cover.ambient))
                throw Error("component " + t.prime.to_string() + " does not lie on the scheme");
            if (t.prime.contains(cover.elements[i]))
                throw Error("component " + t.prime.to_string() + " is not visible on chart " + std::to_string(i + 1));
        }
    return {std::move(cover), std::move(charts)};
}

/// Checks agreement on every overlap D(f_i f_j) and returns the unique
/// global cycle restricting to each chart. Charts are numbered from 1.
template <class F>
Cycle<F> glue_cycles(const LocalCycleDatum<F>& d) {
    const auto& I = d.cover.ambient;
    const auto& fs = d.cover.elements;
    const std::size_t m = fs.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            auto fij = fs[i] * fs[j];
            if (radical_member(fij, I)) continue;
            auto a = restrict_cycle(d.charts[i], fs[j], I);
            auto b = restrict_cycle(d.charts[j], fs[i], I);
            if (a == b) continue;
            std::vector<Ideal<F>> primes;
            for (const auto& t : a.terms()) primes.push_back(t.prime);
            for (const auto& t : b.terms()) primes.push_back(t.prime);
            sort_canonically(primes);
            for (const auto& P : primes) {
                auto ca = a.coeff_of(P), cb = b.coeff_of(P);
                if (ca != cb)
                    throw Error("inconsistent cover data: component " + P.to_string() + " has coefficients " +
                                std::to_string(ca) + "≠" + std::to_string(cb) + " on charts " + std::to_string(i + 1) +
                                "," + std::to_string(j + 1));
            }
        }
    Cycle<F> out(I.ring());
    for (const auto& chart : d.charts)
        for (const auto& t : chart.terms())
            if (out.coeff_of(t.prime) == 0) out.add(t.prime, t.coeff);
    for (std::size_t i = 0; i < m; ++i)
        if (!radical_member(fs[i], I) && !(restrict_cycle(out, fs[i], I) == d.charts[i])) throw internal_error("glued cycle does not restrict back");
    return out;
}

}  // namespace cycalc
