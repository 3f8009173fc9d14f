#pragma once

// Dense univariate arithmetic and factorization over Q and Fp.
//
// Over Fp the factorization is complete: square-free decomposition,
// distinct-degree splitting and a deterministic equal-degree split.
// Over Q: square-free decomposition, rational roots, then Kronecker's
// method for remaining factors of degree >= 4 under a combination budget.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cycalc/poly.hpp"

namespace cycalc {

/// Coefficients in increasing degree; the zero polynomial is empty.
template <class F>
using Dense = std::vector<typename F::Elem>;

namespace uni {

template <class F>
void trim(const F& K, Dense<F>& a) {
    while (!a.empty() && K.is_zero(a.back())) a.pop_back();
}

template <class F>
long deg(const Dense<F>& a) {
    return static_cast<long>(a.size()) - 1;
}

template <class F>
Dense<F> add(const F& K, const Dense<F>& a, const Dense<F>& b) {
    Dense<F> r(std::max(a.size(), b.size()), K.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = K.add(r[i], b[i]);
    trim(K, r);
    return r;
}

template <class F>
Dense<F> sub(const F& K, const Dense<F>& a, const Dense<F>& b) {
    Dense<F> r(std::max(a.size(), b.size()), K.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = K.sub(r[i], b[i]);
    trim(K, r);
    return r;
}

template <class F>
Dense<F> mul(const F& K, const Dense<F>& a, const Dense<F>& b) {
    if (a.empty() || b.empty()) return {};
    Dense<F> r(a.size() + b.size() - 1, K.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (K.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = K.add(r[i + j], K.mul(a[i], b[j]));
    }
    trim(K, r);
    return r;
}

template <class F>
std::pair<Dense<F>, Dense<F>> divmod(const F& K, Dense<F> a, const Dense<F>& b) {
    if (b.empty()) throw internal_error("univariate division by zero");
    if (a.size() < b.size()) return {{}, a};
    Dense<F> q(a.size() - b.size() + 1, K.zero());
    auto inv_lead = K.inv(b.back());
    for (std::size_t k = a.size(); k-- >= b.size();) {
        auto c = K.mul(a[k], inv_lead);
        q[k - (b.size() - 1)] = c;
        if (K.is_zero(c)) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t idx = k - (b.size() - 1) + j;
            a[idx] = K.sub(a[idx], K.mul(c, b[j]));
        }
        if (k == 0) break;
    }
    trim(K, q);
    a.resize(b.size() - 1);
    trim(K, a);
    return {q, a};
}

template <class F>
Dense<F> rem(const F& K, const Dense<F>& a, const Dense<F>& b) {
    return divmod(K, a, b).second;
}

template <class F>
Dense<F> quo(const F& K, const Dense<F>& a, const Dense<F>& b) {
    return divmod(K, a, b).first;
}

template <class F>
Dense<F> monic(const F& K, Dense<F> a) {
    if (a.empty()) return a;
    auto inv = K.inv(a.back());
    for (auto& c : a) c = K.mul(c, inv);
    return a;
}

template <class F>
Dense<F> gcd(const F& K, Dense<F> a, Dense<F> b) {
    while (!b.empty()) {
        auto r = rem(K, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(K, std::move(a));
}

template <class F>
Dense<F> derivative(const F& K, const Dense<F>& a) {
    if (a.size() <= 1) return {};
    Dense<F> r(a.size() - 1, K.zero());
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = K.mul(a[i], K.from_int(static_cast<long>(i)));
    trim(K, r);
    return r;
}

template <class F>
bool is_one(const F& K, const Dense<F>& a) {
    return a.size() == 1 && K.is_one(a[0]);
}

template <class F>
Dense<F> one(const F& K) {
    return {K.one()};
}

template <class F>
Dense<F> x_poly(const F& K) {
    return {K.zero(), K.one()};
}

template <class F>
Dense<F> powmod(const F& K, Dense<F> base, const mpz_class& e, const Dense<F>& m) {
    Dense<F> result = rem(K, one(K), m);
    base = rem(K, base, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = rem(K, mul(K, result, result), m);
        if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(K, mul(K, result, base), m);
    }
    return result;
}

template <class F>
Dense<F> pow(const F& K, const Dense<F>& a, unsigned e) {
    Dense<F> r = one(K);
    for (unsigned i = 0; i < e; ++i) r = mul(K, r, a);
    return r;
}

}  // namespace uni

/// Irreducible factor with multiplicity.
template <class F>
struct DenseFactor {
    Dense<F> poly;
    unsigned multiplicity;
};

namespace detail {

// ---------- Fp ----------

inline std::vector<DenseFactor<PrimeField>> squarefree_fp(const PrimeField& K, const Dense<PrimeField>& f) {
    using namespace uni;
    std::vector<DenseFactor<PrimeField>> out;
    if (deg<PrimeField>(f) < 1) return out;
    const std::uint32_t p = K.characteristic();
    Dense<PrimeField> g = derivative(K, f);
    if (g.empty()) {
        // f(x) = h(x^p); coefficients are their own p-th roots.
        Dense<PrimeField> h;
        for (std::size_t i = 0; i < f.size(); i += p) h.push_back(f[i]);
        for (auto& fac : squarefree_fp(K, h)) out.push_back({fac.poly, fac.multiplicity * p});
        return out;
    }
    Dense<PrimeField> c = gcd(K, f, g);
    Dense<PrimeField> w = quo(K, monic(K, f), c);
    unsigned i = 1;
    while (!is_one(K, w)) {
        Dense<PrimeField> y = gcd(K, w, c);
        Dense<PrimeField> fac = quo(K, w, y);
        if (!is_one(K, fac)) out.push_back({fac, i});
        w = y;
        c = quo(K, c, y);
        ++i;
    }
    if (!is_one(K, c)) {
        Dense<PrimeField> h;
        for (std::size_t k = 0; k < c.size(); k += p) h.push_back(c[k]);
        for (auto& fac : squarefree_fp(K, h)) out.push_back({fac.poly, fac.multiplicity * p});
    }
    return out;
}

inline Dense<PrimeField> enumerate_candidate(const PrimeField& K, std::uint64_t index, std::size_t max_len) {
    Dense<PrimeField> a;
    const std::uint64_t p = K.characteristic();
    while (index && a.size() < max_len) {
        a.push_back(K.from_int(static_cast<long>(index % p)));
        index /= p;
    }
    uni::trim(K, a);
    return a;
}

inline void equal_degree_split(const PrimeField& K, const Dense<PrimeField>& g, long d,
                               std::vector<Dense<PrimeField>>& out) {
    using namespace uni;
    if (deg<PrimeField>(g) == d) {
        out.push_back(monic(K, g));
        return;
    }
    const std::uint32_t p = K.characteristic();
    mpz_class exponent;
    if (p != 2) {
        mpz_class pd;
        mpz_ui_pow_ui(pd.get_mpz_t(), p, static_cast<unsigned long>(d));
        exponent = (pd - 1) / 2;
    }
    // candidates enumerated by base-p digits of the index; constants skipped
    for (std::uint64_t index = 2; index < 200000; ++index) {
        Dense<PrimeField> a = enumerate_candidate(K, index, g.size() - 1);
        if (deg<PrimeField>(a) < 1) continue;
        Dense<PrimeField> b;
        if (p == 2) {
            Dense<PrimeField> t = rem(K, a, g);
            b = t;
            for (long k = 1; k < d; ++k) {
                t = rem(K, mul(K, t, t), g);
                b = add(K, b, t);
            }
        } else {
            b = sub(K, powmod(K, a, exponent, g), one(K));
        }
        Dense<PrimeField> h = gcd(K, g, b);
        if (deg<PrimeField>(h) > 0 && deg<PrimeField>(h) < deg<PrimeField>(g)) {
            equal_degree_split(K, h, d, out);
            equal_degree_split(K, quo(K, g, h), d, out);
            return;
        }
    }
    throw Error("factorization budget exceeded");
}

inline std::vector<Dense<PrimeField>> factor_squarefree_fp(const PrimeField& K, Dense<PrimeField> f) {
    using namespace uni;
    std::vector<Dense<PrimeField>> out;
    f = monic(K, f);
    const mpz_class p = K.characteristic();
    Dense<PrimeField> h = x_poly(K);  // x^(p^i) mod f
    long i = 1;
    while (deg<PrimeField>(f) >= 2 * i) {
        h = powmod(K, h, p, f);
        Dense<PrimeField> g = gcd(K, f, sub(K, h, x_poly(K)));
        if (!is_one(K, g)) {
            equal_degree_split(K, g, i, out);
            f = quo(K, f, g);
            h = rem(K, h, f);
        }
        ++i;
    }
    if (deg<PrimeField>(f) > 0) out.push_back(monic(K, f));
    return out;
}

// ---------- Q ----------

/// Positive divisors of |n|; empty if n = 0. Throws past the budget.
inline std::vector<mpz_class> positive_divisors(mpz_class n, std::size_t budget) {
    if (n < 0) n = -n;
    if (n == 0) return {};
    std::vector<std::pair<mpz_class, unsigned>> primes;
    mpz_class d = 2;
    std::size_t steps = 0;
    while (d * d <= n) {
        if (++steps > budget) throw Error("factorization budget exceeded");
        if (n % d == 0) {
            unsigned e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            primes.emplace_back(d, e);
        }
        d += (d == 2 ? 1 : 2);
    }
    if (n > 1) primes.emplace_back(n, 1);
    std::vector<mpz_class> divs{1};
    for (auto& [q, e] : primes) {
        std::size_t count = divs.size();
        mpz_class power = 1;
        for (unsigned k = 0; k < e; ++k) {
            power *= q;
            for (std::size_t j = 0; j < count; ++j) divs.push_back(divs[j] * power);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

/// Scales to a primitive integer polynomial with positive leading coefficient.
inline std::vector<mpz_class> primitive_integer(const Dense<Rationals>& f) {
    mpz_class l = 1;
    for (const auto& c : f) l = lcm(l, mpz_class(c.get_den()));
    std::vector<mpz_class> z;
    mpz_class g = 0;
    for (const auto& c : f) {
        mpz_class v = mpz_class(c.get_num()) * (l / c.get_den());
        z.push_back(v);
        g = gcd(g, v);
    }
    if (g == 0) return z;
    if (z.back() < 0) g = -g;
    for (auto& v : z) v /= g;
    return z;
}

inline Dense<Rationals> to_rational(const std::vector<mpz_class>& z) {
    Dense<Rationals> r;
    for (const auto& v : z) r.push_back(mpq_class(v));
    return r;
}

inline mpq_class evaluate(const Dense<Rationals>& f, const mpq_class& x) {
    mpq_class acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

/// Squarefree decomposition over Q (Yun).
inline std::vector<DenseFactor<Rationals>> squarefree_q(const Rationals& K, const Dense<Rationals>& f) {
    using namespace uni;
    std::vector<DenseFactor<Rationals>> out;
    if (deg<Rationals>(f) < 1) return out;
    Dense<Rationals> mf = monic(K, f);
    Dense<Rationals> mfp = derivative(K, mf);
    Dense<Rationals> b = gcd(K, mf, mfp);
    Dense<Rationals> c = quo(K, mf, b);
    Dense<Rationals> d = sub(K, quo(K, mfp, b), derivative(K, c));
    unsigned i = 1;
    while (deg<Rationals>(c) > 0) {
        Dense<Rationals> a = gcd(K, c, d);
        if (deg<Rationals>(a) > 0) out.push_back({a, i});
        c = quo(K, c, a);
        d = sub(K, quo(K, d, a), derivative(K, c));
        ++i;
    }
    return out;
}

/// Lagrange interpolation through (xs[i], ys[i]).
inline Dense<Rationals> interpolate(const Rationals& K, const std::vector<mpq_class>& xs,
                                    const std::vector<mpq_class>& ys) {
    Dense<Rationals> result;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Dense<Rationals> basis = uni::one(K);
        mpq_class denom = 1;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            basis = uni::mul(K, basis, Dense<Rationals>{mpq_class(-xs[j]), mpq_class(1)});
            denom *= xs[i] - xs[j];
        }
        mpq_class scale = ys[i] / denom;
        for (auto& c : basis) c *= scale;
        result = uni::add(K, result, basis);
    }
    return result;
}

/// Integer factor of degree m of a primitive squarefree f, or empty.
inline Dense<Rationals> kronecker_factor(const Rationals& K, const Dense<Rationals>& f, long m,
                                         std::size_t budget) {
    struct Point {
        mpq_class x;
        std::vector<mpz_class> divisors;
    };
    std::vector<Point> pts;
    for (long k = 0; k <= 40; ++k) {
        long x = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
        mpq_class v = evaluate(f, mpq_class(x));
        if (v == 0) continue;
        pts.push_back({mpq_class(x), positive_divisors(mpz_class(v.get_num()), budget)});
    }
    if (static_cast<long>(pts.size()) < m + 1) return {};
    std::stable_sort(pts.begin(), pts.end(),
                     [](const Point& a, const Point& b) { return a.divisors.size() < b.divisors.size(); });
    pts.resize(static_cast<std::size_t>(m + 1));

    double combos = 1;
    for (std::size_t i = 0; i < pts.size(); ++i) combos *= static_cast<double>(pts[i].divisors.size()) * (i ? 2 : 1);
    if (combos > static_cast<double>(budget)) throw Error("factorization budget exceeded");

    std::vector<mpq_class> xs;
    for (auto& p : pts) xs.push_back(p.x);
    std::vector<std::size_t> idx(pts.size(), 0);
    std::vector<int> sign(pts.size(), 1);
    for (;;) {
        std::vector<mpq_class> ys;
        for (std::size_t i = 0; i < pts.size(); ++i) ys.push_back(mpq_class(pts[i].divisors[idx[i]] * sign[i]));
        Dense<Rationals> g = interpolate(K, xs, ys);
        bool integral = std::all_of(g.begin(), g.end(), [](const mpq_class& c) { return c.get_den() == 1; });
        if (integral && uni::deg<Rationals>(g) == m) {
            auto [q, r] = uni::divmod(K, f, g);
            if (r.empty()) return g;
        }
        // odometer over (divisor, sign) choices; the first point keeps sign +1.
        std::size_t i = 0;
        for (; i < pts.size(); ++i) {
            if (i > 0 && sign[i] == 1) {
                sign[i] = -1;
                break;
            }
            if (i > 0) sign[i] = 1;
            if (++idx[i] < pts[i].divisors.size()) break;
            idx[i] = 0;
        }
        if (i == pts.size()) return {};
    }
}

inline void factor_squarefree_q(const Rationals& K, Dense<Rationals> f, unsigned degree_bound,
                                std::vector<Dense<Rationals>>& out) {
    using namespace uni;
    f = monic(K, f);
    if (deg<Rationals>(f) <= 0) return;
    if (deg<Rationals>(f) == 1) {
        out.push_back(f);
        return;
    }
    if (K.is_zero(f[0])) {
        out.push_back(x_poly(K));
        factor_squarefree_q(K, quo(K, f, x_poly(K)), degree_bound, out);
        return;
    }
    std::vector<mpz_class> z = primitive_integer(f);
    auto lead_divs = positive_divisors(z.back(), 1u << 22);
    auto const_divs = positive_divisors(z.front(), 1u << 22);
    for (const auto& pnum : const_divs) {
        for (const auto& qden : lead_divs) {
            for (int s : {1, -1}) {
                mpq_class root(pnum * s, qden);
                root.canonicalize();
                if (evaluate(f, root) == 0) {
                    Dense<Rationals> lin{mpq_class(-root), mpq_class(1)};
                    out.push_back(lin);
                    factor_squarefree_q(K, quo(K, f, lin), degree_bound, out);
                    return;
                }
            }
        }
    }
    long n = deg<Rationals>(f);
    if (n <= 3) {
        out.push_back(f);
        return;
    }
    if (n > static_cast<long>(degree_bound)) throw Error("factorization budget exceeded");
    Dense<Rationals> zf = to_rational(z);
    for (long m = 2; m <= n / 2; ++m) {
        Dense<Rationals> g = kronecker_factor(K, zf, m, 200000);
        if (!g.empty()) {
            factor_squarefree_q(K, g, degree_bound, out);
            factor_squarefree_q(K, quo(K, zf, g), degree_bound, out);
            return;
        }
    }
    out.push_back(f);
}

}  // namespace detail

/// Monic irreducible factors with multiplicities; the input is nonzero.
inline std::vector<DenseFactor<PrimeField>> factor_dense(const PrimeField& K, const Dense<PrimeField>& f,
                                                         unsigned /*degree_bound*/) {
    std::vector<DenseFactor<PrimeField>> out;
    for (auto& sq : detail::squarefree_fp(K, f))
        for (auto& irr : detail::factor_squarefree_fp(K, sq.poly)) out.push_back({irr, sq.multiplicity});
    return out;
}

inline std::vector<DenseFactor<Rationals>> factor_dense(const Rationals& K, const Dense<Rationals>& f,
                                                        unsigned degree_bound) {
    std::vector<DenseFactor<Rationals>> out;
    for (auto& sq : detail::squarefree_q(K, f)) {
        std::vector<Dense<Rationals>> irr;
        detail::factor_squarefree_q(K, sq.poly, degree_bound, irr);
        for (auto& g : irr) out.push_back({g, sq.multiplicity});
    }
    return out;
}

/// Multivariate polynomial in which at most one variable occurs, as dense coefficients.
template <class F>
Dense<F> to_dense(const Poly<F>& f, std::size_t var) {
    const auto& K = f.field();
    Dense<F> d(f.degree_in(var) + 1, K.zero());
    for (const auto& t : f.terms()) d[t.mono[var]] = K.add(d[t.mono[var]], t.coeff);
    uni::trim(K, d);
    return d;
}

template <class F>
Poly<F> from_dense(const RingPtr<F>& ring, const Dense<F>& d, std::size_t var) {
    std::vector<typename Poly<F>::Term> terms;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (ring->field().is_zero(d[i])) continue;
        Monomial m(ring->nvars(), 0);
        m[var] = static_cast<std::uint32_t>(i);
        terms.push_back({m, d[i]});
    }
    return Poly<F>::from_terms(ring, std::move(terms));
}

template <class F>
struct Factor {
    Poly<F> poly;
    unsigned multiplicity;
};

inline constexpr unsigned kDefaultFactorDegreeBound = 12;

/// Factorization of an effectively univariate polynomial into monic irreducibles,
/// sorted by (degree, printed form). A constant input yields no factors.
template <class F>
std::vector<Factor<F>> factor_univariate(const Poly<F>& f, unsigned degree_bound = kDefaultFactorDegreeBound) {
    if (f.is_zero()) throw Error("cannot factor the zero polynomial");
    auto vars = f.support_vars();
    if (vars.size() > 1) throw Error("not univariate");
    if (vars.empty()) return {};
    std::size_t v = vars.front();
    auto dense = to_dense(f, v);
    std::vector<Factor<F>> out;
    for (auto& fac : factor_dense(f.field(), dense, degree_bound))
        out.push_back({from_dense(f.ring(), fac.poly, v), fac.multiplicity});
    std::sort(out.begin(), out.end(), [](const Factor<F>& a, const Factor<F>& b) {
        auto da = a.poly.total_degree(), db = b.poly.total_degree();
        if (da != db) return da < db;
        return a.poly.to_string() < b.poly.to_string();
    });
    return out;
}

}  // namespace cycalc
