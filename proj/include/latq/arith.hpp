// arith.hpp — exact integer/rational scalar helpers on top of gmpxx.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latq {

using Int = mpz_class;
using Rat = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Floor division / nonnegative remainder.
inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int fmod(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline bool fits_long(const Int& a) { return a.fits_slong_p(); }

inline long to_long(const Int& a) {
    if (!a.fits_slong_p()) throw std::overflow_error("integer too large for long: " + a.get_str());
    return a.get_si();
}

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Representative of x mod m*Z in [0, m), for rational x and positive integer m.
inline Rat rat_mod(const Rat& x, const Int& m) {
    // x - m*floor(x/m)
    Rat q = x / Rat(m);
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    Rat r = x - Rat(m) * Rat(fl);
    r.canonicalize();
    return r;
}

// Quadratic-form value convention: values live in Q/2Z, stored in [0,2).
inline Rat qmod2(const Rat& x) { return rat_mod(x, 2); }
// Bilinear values live in Q/Z, stored in [0,1).
inline Rat bmod1(const Rat& x) { return rat_mod(x, 1); }

// p-adic valuation of a nonzero integer.
inline int valuation(Int a, const Int& p) {
    if (a == 0) throw std::invalid_argument("valuation of zero");
    int v = 0;
    while (fmod(a, p) == 0) { a /= p; ++v; }
    return v;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (fmod(n, d) == 0) return false;
    return true;
}

// Legendre symbol (a|p) for an odd prime p, via Euler's criterion.
inline int legendre(const Int& a, const Int& p) {
    if (p <= 2 || !is_prime(p)) throw std::invalid_argument("legendre: p must be an odd prime, got " + p.get_str());
    Int r = fmod(a, p);
    if (r == 0) return 0;
    Int e = (p - 1) / 2, res;
    mpz_powm(res.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return res == 1 ? 1 : -1;
}

// true iff a is a square modulo n (n >= 1), by exhaustive scan.
inline bool qr_mod(const Int& a, const Int& n) {
    if (n < 1) throw std::invalid_argument("qr_mod: modulus must be positive");
    Int t = fmod(a, n);
    for (Int x = 0; x < n; ++x)
        if (fmod(x * x, n) == t) return true;
    return false;
}

}  // namespace latq
