#pragma once

// Reference computations for tests, kept away from the kernel's own
// routes: brute-force point counts, and local lengths read off
// vdim(J + m^N) once it stops growing.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "cycalc/groebner.hpp"

namespace cycalc::oracle {

/// Evaluates g at an F_p point with plain integer arithmetic.
inline std::uint64_t fp_eval(const Poly<PrimeField>& g, const std::vector<std::uint64_t>& pt, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (const auto& t : g.terms()) {
        std::uint64_t v = t.coeff.v % p;
        for (std::size_t i = 0; i < pt.size(); ++i)
            for (std::uint32_t e = 0; e < t.mono[i]; ++e) v = v * pt[i] % p;
        acc = (acc + v) % p;
    }
    return acc;
}

using Point = std::vector<std::uint64_t>;

/// All F_p-rational points of V(gens).
inline std::set<Point> fp_points(const std::vector<Poly<PrimeField>>& gens, std::size_t nvars, std::uint64_t p) {
    std::set<Point> out;
    Point pt(nvars, 0);
    for (;;) {
        if (std::all_of(gens.begin(), gens.end(), [&](const auto& g) { return fp_eval(g, pt, p) == 0; }))
            out.insert(pt);
        std::size_t k = 0;
        while (k < nvars && ++pt[k] == p) pt[k++] = 0;
        if (k == nvars) break;
    }
    return out;
}

/// length of (R/J)_m for a maximal ideal m containing J: vdim(J + m^N)
/// stabilises at vdim(R/J)_m, which is length times [k(m) : k].
template <class F>
std::optional<std::size_t> length_by_powers(const Ideal<F>& J, const Ideal<F>& m, int max_power = 40) {
    std::size_t prev = 0;
    Ideal<F> power = m;
    const std::size_t deg = vector_space_dim(m);
    for (int N = 1; N <= max_power; ++N) {
        auto cur = vector_space_dim(ideal_sum(J, power));
        if (N > 1 && cur == prev) {
            if (deg == 0 || cur % deg != 0) return std::nullopt;
            return cur / deg;
        }
        prev = cur;
        power = ideal_product(power, m);
    }
    return std::nullopt;
}

/// length of (R/J)_P for a minimal prime P of J. Positive-dimensional P
/// are cut down by u = c on an independent set u; three random slices vote.
template <class F>
std::optional<std::size_t> local_length(const Ideal<F>& J, const Ideal<F>& P, std::uint64_t seed = 0x0dd5) {
    auto u = maximal_independent_set(P);
    if (!u) return std::nullopt;
    if (u->empty()) return length_by_powers(J, P);
    const auto& R = P.ring();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(-11, 11);
    std::map<std::size_t, int> votes;
    for (int attempt = 0; attempt < 12 && votes.size() < 3; ++attempt) {
        std::vector<Poly<F>> cut;
        for (auto v : *u) cut.push_back(Poly<F>::variable(R, v) - Poly<F>::constant(R, pick(rng)));
        auto Pc = ideal_sum(P, Ideal<F>(R, cut));
        if (Pc.is_unit() || krull_dimension(Pc).value_or(-1) != 0) continue;
        auto Jc = ideal_sum(J, Ideal<F>(R, cut));
        auto L = length_by_powers(Jc, Pc);
        if (L) ++votes[*L];
        else continue;
        if (votes[*L] >= 2) return L;
    }
    if (votes.empty()) return std::nullopt;
    return std::min_element(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.first < b.first; })->first;
}

}  // namespace cycalc::oracle
