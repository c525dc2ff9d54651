#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"

namespace twistlab {

// Field objects. All arithmetic in the library is routed through one of
// these so that every computation stays exact. A field object is a small
// value (copied freely); its Elt type is the scalar representation.

struct Rationals {
    using Elt = mpq_class;

    static Elt zero() { return Elt(0); }
    static Elt one() { return Elt(1); }

    static Elt add(const Elt& a, const Elt& b) { return a + b; }
    static Elt sub(const Elt& a, const Elt& b) { return a - b; }
    static Elt mul(const Elt& a, const Elt& b) { return a * b; }
    static Elt neg(const Elt& a) { return -a; }

    static Elt inv(const Elt& a) {
        require_contract(a != 0, "division by zero in Q");
        return Elt(1) / a;
    }

    static bool is_zero(const Elt& a) { return a == 0; }
    static bool eq(const Elt& a, const Elt& b) { return a == b; }

    static Elt from_int(long n) { return Elt(n); }

    // Accepts "a/b" and plain integers; result is canonicalized so that
    // equality is plain representation equality.
    static Elt parse(const std::string& s) {
        Elt q;
        if (q.set_str(s, 10) != 0) throw shape_error("bad rational literal: " + s);
        q.canonicalize();
        require_shape(q.get_den() != 0, "zero denominator: " + s);
        return q;
    }

    static std::string to_string(const Elt& a) { return a.get_str(); }

    std::string name() const { return "Q"; }
    bool operator==(const Rationals&) const { return true; }
};

struct PrimeField {
    using Elt = std::uint32_t;

    std::uint32_t p;

    explicit PrimeField(std::uint32_t p_) : p(p_) {
        require_shape(p_ >= 2 && p_ < (1u << 31), "modulus out of range");
        for (std::uint64_t d = 2; d * d <= p_; ++d)
            require_shape(p_ % d != 0, "modulus not prime");
    }

    Elt zero() const { return 0; }
    Elt one() const { return 1 % p; }

    Elt add(Elt a, Elt b) const {
        std::uint64_t s = std::uint64_t(a) + b;
        return Elt(s >= p ? s - p : s);
    }
    Elt sub(Elt a, Elt b) const { return a >= b ? a - b : a + p - b; }
    Elt mul(Elt a, Elt b) const { return Elt(std::uint64_t(a) * b % p); }
    Elt neg(Elt a) const { return a == 0 ? 0 : p - a; }

    Elt inv(Elt a) const {
        require_contract(a % p != 0, "division by zero in F_p");
        // extended Euclid on (a, p)
        std::int64_t r0 = a % p, r1 = p, s0 = 1, s1 = 0;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t r2 = r0 - q * r1, s2 = s0 - q * s1;
            r0 = r1; r1 = r2; s0 = s1; s1 = s2;
        }
        if (s0 < 0) s0 += p;
        return Elt(s0);
    }

    bool is_zero(Elt a) const { return a % p == 0; }
    bool eq(Elt a, Elt b) const { return a % p == b % p; }

    Elt from_int(long n) const {
        long r = n % long(p);
        if (r < 0) r += p;
        return Elt(r);
    }

    Elt parse(const std::string& s) const {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        require_shape(pos == s.size(), "bad F_p literal: " + s);
        return from_int(v);
    }

    std::string to_string(Elt a) const { return std::to_string(a % p); }

    std::string name() const { return "Fp:" + std::to_string(p); }
    bool operator==(const PrimeField& o) const { return p == o.p; }
};

// (-1)^n as a field element; n may be negative.
template <class F>
typename F::Elt sign_pow(const F& k, long n) {
    return (n % 2 == 0) ? k.one() : k.neg(k.one());
}

} // namespace twistlab
