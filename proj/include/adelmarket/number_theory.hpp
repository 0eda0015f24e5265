#pragma once

#include "adelmarket/rational.hpp"

#include <map>
#include <stdexcept>

namespace adm {

inline BigInt mod_pow(BigInt base, BigInt exp, const BigInt& mod) {
    return boost::multiprecision::powm(mod_floor(base, mod), exp, mod);
}

// Extended-gcd inverse of a modulo m; requires gcd(a, m) = 1.
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt r0 = m, r1 = mod_floor(a, m);
    BigInt t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw std::domain_error("modular inverse does not exist");
    return mod_floor(t0, m);
}

namespace detail {

inline bool miller_rabin_witness(const BigInt& n, const BigInt& a, const BigInt& d, int r) {
    BigInt x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true; // composite witness
}

} // namespace detail

// Deterministic Miller-Rabin. The witness set below decides primality for
// every n < 3.317e24, which covers any prime this library will realistically
// see; beyond that the same witnesses give an error chance < 4^-12.
inline bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    static const int small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (int q : small_primes) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    BigInt d = n - 1;
    int r = 0;
    while (d % 2 == 0) { d /= 2; ++r; }
    for (int a : small_primes) {
        if (detail::miller_rabin_witness(n, BigInt(a), d, r)) return false;
    }
    return true;
}

namespace detail {

inline BigInt pollard_brent(const BigInt& n) {
    if (n % 2 == 0) return 2;
    // Deterministic restart schedule; yields a nontrivial factor of composite n.
    for (BigInt c = 1; ; ++c) {
        BigInt x = 2, y = 2, d = 1;
        auto step = [&](const BigInt& v) { return (v * v + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            d = boost::multiprecision::gcd(x >= y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void factor_into(BigInt n, std::map<BigInt, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) { ++out[n]; return; }
    BigInt d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

// Prime factorization of |n|, n != 0: prime -> multiplicity.
inline std::map<BigInt, int> factorize(const BigInt& n) {
    if (n == 0) throw std::domain_error("cannot factor zero");
    BigInt m = n < 0 ? BigInt(-n) : n;
    std::map<BigInt, int> out;
    for (int q : {2, 3, 5, 7, 11, 13}) {
        while (m % q == 0) { m /= q; ++out[BigInt(q)]; }
    }
    detail::factor_into(m, out);
    return out;
}

} // namespace adm
