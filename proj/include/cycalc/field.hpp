#pragma once

// Exact coefficient fields: the rationals (GMP-backed) and prime fields Z/p.
// A field is a small value object; elements are plain values manipulated
// through the field instance, which is what carries p.

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "cycalc/error.hpp"

namespace cycalc {

enum class FieldKind { Rationals, PrimeField };

struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    std::uint32_t characteristic = 0;

    bool operator==(const FieldSpec&) const = default;

    std::string to_string() const {
        return kind == FieldKind::Rationals ? "Q" : "Fp " + std::to_string(characteristic);
    }
};

inline bool is_prime_u32(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

class Rationals {
public:
    using Elem = mpq_class;

    FieldSpec spec() const { return {FieldKind::Rationals, 0}; }
    std::uint32_t characteristic() const { return 0; }

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(long v) const { return Elem(v); }
    Elem from_ratio(const mpz_class& num, const mpz_class& den) const {
        if (den == 0) throw parse_error("zero denominator in coefficient");
        Elem q(num, den);
        q.canonicalize();
        return q;
    }

    bool is_zero(const Elem& a) const { return sgn(a) == 0; }
    bool is_one(const Elem& a) const { return a == 1; }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw internal_error("division by zero in Q");
        return 1 / a;
    }

    /// True when the canonical rendering carries a leading minus sign.
    bool is_negative(const Elem& a) const { return sgn(a) < 0; }
    std::string to_string(const Elem& a) const { return a.get_str(); }

    bool operator==(const Rationals&) const = default;
};

/// Element of Z/p stored as its canonical representative 0..p-1.
struct ModInt {
    std::uint32_t v = 0;
    bool operator==(const ModInt&) const = default;
};

class PrimeField {
public:
    using Elem = ModInt;

    explicit PrimeField(std::uint32_t p = 2) : p_(p) {
        if (!is_prime_u32(p) || p >= (1u << 31)) throw Error("characteristic must be a prime below 2^31");
    }

    FieldSpec spec() const { return {FieldKind::PrimeField, p_}; }
    std::uint32_t characteristic() const { return p_; }

    Elem zero() const { return {0}; }
    Elem one() const { return {1 % p_}; }
    Elem from_int(long v) const {
        long r = v % static_cast<long>(p_);
        if (r < 0) r += p_;
        return {static_cast<std::uint32_t>(r)};
    }
    Elem from_mpz(const mpz_class& v) const {
        mpz_class r = v % p_;
        if (r < 0) r += p_;
        return {static_cast<std::uint32_t>(r.get_ui())};
    }
    Elem from_ratio(const mpz_class& num, const mpz_class& den) const {
        Elem d = from_mpz(den);
        if (d.v == 0) throw parse_error("denominator vanishes in Fp " + std::to_string(p_));
        return mul(from_mpz(num), inv(d));
    }

    bool is_zero(const Elem& a) const { return a.v == 0; }
    bool is_one(const Elem& a) const { return a.v == 1; }
    bool equal(const Elem& a, const Elem& b) const { return a.v == b.v; }

    Elem add(const Elem& a, const Elem& b) const {
        std::uint64_t s = std::uint64_t(a.v) + b.v;
        return {static_cast<std::uint32_t>(s >= p_ ? s - p_ : s)};
    }
    Elem sub(const Elem& a, const Elem& b) const { return {a.v >= b.v ? a.v - b.v : a.v + p_ - b.v}; }
    Elem mul(const Elem& a, const Elem& b) const {
        return {static_cast<std::uint32_t>(std::uint64_t(a.v) * b.v % p_)};
    }
    Elem neg(const Elem& a) const { return {a.v == 0 ? 0 : p_ - a.v}; }
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Elem inv(const Elem& a) const {
        if (a.v == 0) throw internal_error("division by zero in Fp");
        return pow(a, p_ - 2);
    }

    bool is_negative(const Elem&) const { return false; }
    std::string to_string(const Elem& a) const { return std::to_string(a.v); }

    bool operator==(const PrimeField&) const = default;

private:
    std::uint32_t p_;
};

}  // namespace cycalc
