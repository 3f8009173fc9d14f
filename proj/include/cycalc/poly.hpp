#pragma once

// Multivariate polynomials over an exact field with a fixed monomial order.

#include <algorithm>
#include <ostream>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cycalc/error.hpp"
#include "cycalc/field.hpp"

namespace cycalc {

using Monomial = std::vector<std::uint32_t>;

enum class OrderKind { GrevLex, Lex, Block };

/// Block(split): variables [0, split) compared first by grevlex, ties broken
/// by grevlex on [split, n).
struct MonomialOrder {
    OrderKind kind = OrderKind::GrevLex;
    std::size_t split = 0;

    static MonomialOrder grevlex() { return {OrderKind::GrevLex, 0}; }
    static MonomialOrder lex() { return {OrderKind::Lex, 0}; }
    static MonomialOrder block(std::size_t split) { return {OrderKind::Block, split}; }

    bool operator==(const MonomialOrder&) const = default;

    std::string to_string() const {
        switch (kind) {
            case OrderKind::GrevLex: return "grevlex";
            case OrderKind::Lex: return "lex";
            case OrderKind::Block: return "block(" + std::to_string(split) + ")";
        }
        return "?";
    }
};

namespace detail {

inline std::uint64_t partial_degree(const Monomial& m, std::size_t lo, std::size_t hi) {
    std::uint64_t d = 0;
    for (std::size_t i = lo; i < hi; ++i) d += m[i];
    return d;
}

inline int grevlex_cmp(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
    auto da = partial_degree(a, lo, hi), db = partial_degree(b, lo, hi);
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = hi; i > lo; --i) {
        if (a[i - 1] != b[i - 1]) return a[i - 1] < b[i - 1] ? 1 : -1;
    }
    return 0;
}

inline int lex_cmp(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
    return 0;
}

}  // namespace detail

/// Three-way comparison; assumes equal arity.
inline int compare_monomials(const MonomialOrder& order, const Monomial& a, const Monomial& b) {
    switch (order.kind) {
        case OrderKind::GrevLex: return detail::grevlex_cmp(a, b, 0, a.size());
        case OrderKind::Lex: return detail::lex_cmp(a, b);
        case OrderKind::Block: {
            int c = detail::grevlex_cmp(a, b, 0, order.split);
            return c != 0 ? c : detail::grevlex_cmp(a, b, order.split, a.size());
        }
    }
    return 0;
}

inline std::uint64_t total_degree(const Monomial& m) { return detail::partial_degree(m, 0, m.size()); }

inline bool divides(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

/// b / a, valid only when divides(a, b).
inline Monomial monomial_div(const Monomial& b, const Monomial& a) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[i] - a[i];
    return r;
}

inline bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) return false;
    return true;
}

inline bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!alpha(s[0])) return false;
    return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

template <class F>
class PolyRing {
public:
    PolyRing(F field, std::vector<std::string> vars, MonomialOrder order = MonomialOrder::grevlex())
        : field_(std::move(field)), vars_(std::move(vars)), order_(order) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (!is_identifier(vars_[i])) throw parse_error("invalid variable name '" + vars_[i] + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (vars_[j] == vars_[i]) throw parse_error("duplicate variable name '" + vars_[i] + "'");
        }
        if (order_.kind == OrderKind::Block && order_.split > vars_.size())
            throw Error("block split point exceeds the number of variables");
    }

    const F& field() const { return field_; }
    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    const MonomialOrder& order() const { return order_; }

    int compare(const Monomial& a, const Monomial& b) const { return compare_monomials(order_, a, b); }

    std::optional<std::size_t> var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return i;
        return std::nullopt;
    }

    bool operator==(const PolyRing& o) const {
        return field_ == o.field_ && vars_ == o.vars_ && order_ == o.order_;
    }

    std::string to_string() const {
        std::string s = field_.spec().to_string() + "[";
        for (std::size_t i = 0; i < vars_.size(); ++i) s += (i ? "," : "") + vars_[i];
        return s + "] " + order_.to_string();
    }

private:
    F field_;
    std::vector<std::string> vars_;
    MonomialOrder order_;
};

template <class F>
using RingPtr = std::shared_ptr<const PolyRing<F>>;

template <class F>
RingPtr<F> make_ring(F field, std::vector<std::string> vars, MonomialOrder order = MonomialOrder::grevlex()) {
    return std::make_shared<const PolyRing<F>>(std::move(field), std::move(vars), order);
}

template <class F>
bool same_ring(const RingPtr<F>& a, const RingPtr<F>& b) {
    return a == b || (a && b && *a == *b);
}

template <class F>
void require_same_ring(const RingPtr<F>& a, const RingPtr<F>& b) {
    if (!same_ring(a, b)) throw Error("incompatible rings");
}

/// Three-way monomial comparison with an arity check.
template <class F>
int monomial_cmp(const PolyRing<F>& ring, const Monomial& a, const Monomial& b) {
    if (a.size() != ring.nvars() || b.size() != ring.nvars()) throw Error("monomial arity mismatch");
    return ring.compare(a, b);
}

template <class F>
class Poly {
public:
    using Elem = typename F::Elem;
    struct Term {
        Monomial mono;
        Elem coeff;
    };

    Poly() = default;
    explicit Poly(RingPtr<F> ring) : ring_(std::move(ring)) {}

    static Poly constant(RingPtr<F> ring, const Elem& c) {
        Poly p(ring);
        if (!ring->field().is_zero(c)) p.terms_.push_back({Monomial(ring->nvars(), 0), c});
        return p;
    }
    static Poly constant(RingPtr<F> ring, long c) { return constant(ring, ring->field().from_int(c)); }
    static Poly one(RingPtr<F> ring) { return constant(ring, ring->field().one()); }

    static Poly variable(RingPtr<F> ring, std::size_t i) {
        Monomial m(ring->nvars(), 0);
        m.at(i) = 1;
        return monomial(ring, std::move(m), ring->field().one());
    }

    static Poly monomial(RingPtr<F> ring, Monomial m, const Elem& c) {
        if (m.size() != ring->nvars()) throw Error("monomial arity mismatch");
        Poly p(ring);
        if (!ring->field().is_zero(c)) p.terms_.push_back({std::move(m), c});
        return p;
    }

    /// Sorts, merges like terms and drops zero coefficients.
    static Poly from_terms(RingPtr<F> ring, std::vector<Term> terms) {
        Poly p(ring);
        for (const auto& t : terms)
            if (t.mono.size() != ring->nvars()) throw Error("monomial arity mismatch");
        const auto& R = *ring;
        std::sort(terms.begin(), terms.end(),
                  [&](const Term& a, const Term& b) { return R.compare(a.mono, b.mono) > 0; });
        const auto& K = R.field();
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
                p.terms_.back().coeff = K.add(p.terms_.back().coeff, t.coeff);
            } else {
                if (!p.terms_.empty() && K.is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
                p.terms_.push_back(std::move(t));
            }
        }
        if (!p.terms_.empty() && K.is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
        return p;
    }

    const RingPtr<F>& ring() const { return ring_; }
    const F& field() const { return ring_->field(); }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && cycalc::total_degree(terms_[0].mono) == 0);
    }
    bool is_monomial() const { return terms_.size() == 1; }

    const Monomial& lead_mono() const {
        if (terms_.empty()) throw internal_error("leading monomial of zero polynomial");
        return terms_.front().mono;
    }
    const Elem& lead_coeff() const {
        if (terms_.empty()) throw internal_error("leading coefficient of zero polynomial");
        return terms_.front().coeff;
    }

    Elem constant_coeff() const {
        if (!terms_.empty() && cycalc::total_degree(terms_.back().mono) == 0) return terms_.back().coeff;
        return field().zero();
    }

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (const auto& t : terms_) d = std::max(d, cycalc::total_degree(t.mono));
        return d;
    }

    std::uint32_t degree_in(std::size_t var) const {
        std::uint32_t d = 0;
        for (const auto& t : terms_) d = std::max(d, t.mono[var]);
        return d;
    }

    /// Indices of variables occurring with positive exponent.
    std::vector<std::size_t> support_vars() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < ring_->nvars(); ++i)
            if (degree_in(i) > 0) out.push_back(i);
        return out;
    }

    Poly lead_term() const {
        if (terms_.empty()) throw internal_error("leading term of zero polynomial");
        Poly r(ring_);
        r.terms_.push_back(terms_.front());
        return r;
    }

    /// The polynomial minus its leading term.
    Poly drop_lead() const {
        Poly r(ring_);
        if (terms_.size() > 1) r.terms_.assign(terms_.begin() + 1, terms_.end());
        return r;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.terms_) t.coeff = field().neg(t.coeff);
        return r;
    }

    Poly operator+(const Poly& g) const { return combine(g, false); }
    Poly operator-(const Poly& g) const { return combine(g, true); }

    Poly operator*(const Poly& g) const {
        require_same_ring(ring_, g.ring_);
        if (is_zero() || g.is_zero()) return Poly(ring_);
        std::vector<Term> out;
        out.reserve(terms_.size() * g.terms_.size());
        const auto& K = field();
        for (const auto& a : terms_)
            for (const auto& b : g.terms_) out.push_back({monomial_mul(a.mono, b.mono), K.mul(a.coeff, b.coeff)});
        return from_terms(ring_, std::move(out));
    }

    Poly& operator+=(const Poly& g) { return *this = *this + g; }
    Poly& operator-=(const Poly& g) { return *this = *this - g; }
    Poly& operator*=(const Poly& g) { return *this = *this * g; }

    Poly pow(unsigned e) const {
        Poly result = one(ring_);
        Poly base = *this;
        while (e) {
            if (e & 1u) result = result * base;
            e >>= 1u;
            if (e) base = base * base;
        }
        return result;
    }

    Poly scale(const Elem& c) const {
        if (field().is_zero(c)) return Poly(ring_);
        Poly r = *this;
        for (auto& t : r.terms_) t.coeff = field().mul(t.coeff, c);
        return r;
    }

    /// Multiplication by c * m; order is preserved since monomial orders are multiplicative.
    Poly mul_term(const Monomial& m, const Elem& c) const {
        if (field().is_zero(c)) return Poly(ring_);
        Poly r = *this;
        for (auto& t : r.terms_) {
            t.mono = monomial_mul(t.mono, m);
            t.coeff = field().mul(t.coeff, c);
        }
        return r;
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return scale(field().inv(lead_coeff()));
    }

    bool operator==(const Poly& g) const {
        if (!same_ring(ring_, g.ring_) || terms_.size() != g.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].mono != g.terms_[i].mono || !field().equal(terms_[i].coeff, g.terms_[i].coeff))
                return false;
        return true;
    }

    /// Evaluates the ring map sending variable i to images[i] (all in one target ring).
    Poly substitute(const std::vector<Poly>& images) const {
        if (images.size() != ring_->nvars()) throw Error("substitution arity mismatch");
        if (images.empty()) {
            throw Error("substitution into an empty variable list needs a target ring");
        }
        const RingPtr<F>& target = images.front().ring();
        for (const auto& img : images) require_same_ring(target, img.ring());
        if (!(ring_->field() == target->field())) throw Error("incompatible rings");
        std::vector<std::vector<Poly>> powers(images.size());
        auto power = [&](std::size_t i, std::uint32_t e) -> const Poly& {
            auto& cache = powers[i];
            if (cache.empty()) cache.push_back(one(target));
            while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
            return cache[e];
        };
        Poly result(target);
        for (const auto& t : terms_) {
            Poly term = constant(target, t.coeff);
            for (std::size_t i = 0; i < t.mono.size(); ++i)
                if (t.mono[i]) term = term * power(i, t.mono[i]);
            result = result + term;
        }
        return result;
    }

    /// Re-reads the polynomial in another ring; variable i becomes target variable var_map[i].
    Poly change_ring(const RingPtr<F>& target, const std::vector<std::size_t>& var_map) const {
        if (var_map.size() != ring_->nvars()) throw Error("ring change arity mismatch");
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            Monomial m(target->nvars(), 0);
            for (std::size_t i = 0; i < t.mono.size(); ++i) {
                if (t.mono[i] == 0) continue;
                if (var_map[i] >= target->nvars()) throw Error("variable has no image in the target ring");
                m[var_map[i]] += t.mono[i];
            }
            out.push_back({std::move(m), t.coeff});
        }
        return from_terms(target, std::move(out));
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        const auto& K = field();
        std::string s;
        bool first = true;
        for (const auto& t : terms_) {
            bool negative = K.is_negative(t.coeff);
            Elem mag = negative ? K.neg(t.coeff) : t.coeff;
            if (first) {
                if (negative) s += "-";
            } else {
                s += negative ? " - " : " + ";
            }
            first = false;
            std::string mono = monomial_string(t.mono);
            if (mono.empty()) {
                s += K.to_string(mag);
            } else if (K.is_one(mag)) {
                s += mono;
            } else {
                s += K.to_string(mag) + "*" + mono;
            }
        }
        return s;
    }

    std::string monomial_string(const Monomial& m) const {
        std::string s;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += ring_->vars()[i];
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
        return s;
    }

private:
    Poly combine(const Poly& g, bool subtract) const {
        require_same_ring(ring_, g.ring_);
        const auto& K = field();
        const auto& R = *ring_;
        Poly r(ring_);
        r.terms_.reserve(terms_.size() + g.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < g.terms_.size()) {
            int c;
            if (i == terms_.size()) c = -1;
            else if (j == g.terms_.size()) c = 1;
            else c = R.compare(terms_[i].mono, g.terms_[j].mono);
            if (c > 0) {
                r.terms_.push_back(terms_[i++]);
            } else if (c < 0) {
                const auto& t = g.terms_[j++];
                r.terms_.push_back({t.mono, subtract ? K.neg(t.coeff) : t.coeff});
            } else {
                Elem v = subtract ? K.sub(terms_[i].coeff, g.terms_[j].coeff) : K.add(terms_[i].coeff, g.terms_[j].coeff);
                if (!K.is_zero(v)) r.terms_.push_back({terms_[i].mono, std::move(v)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    RingPtr<F> ring_;
    std::vector<Term> terms_;
};

template <class F>
std::ostream& operator<<(std::ostream& os, const Poly<F>& p) {
    return os << p.to_string();
}

/// Ring with extra variables prepended (they form the leading block of a Block order).
template <class F>
RingPtr<F> ring_with_leading_vars(const RingPtr<F>& ring, std::size_t count, const std::string& stem = "t") {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < count; ++k) {
        std::string name = "_" + stem + std::to_string(k);
        while (ring->var_index(name)) name += "_";
        names.push_back(name);
    }
    for (const auto& v : ring->vars()) names.push_back(v);
    return make_ring(ring->field(), names, MonomialOrder::block(count));
}

inline std::vector<std::size_t> shifted_var_map(std::size_t n, std::size_t offset) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i + offset;
    return m;
}

}  // namespace cycalc
