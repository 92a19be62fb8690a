#pragma once

// 64-bit modular arithmetic helpers (prime moduli).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace effst {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(u128(a) * b % p); }

inline u64 addmod(u64 a, u64 b, u64 p) {
    u64 s = a + b;
    if (s >= p || s < a) s -= p;
    return s;
}

inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

// Inverse of a mod p, p prime, a not divisible by p. Extended Euclid.
inline u64 invmod(u64 a, u64 p) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(p), nr = static_cast<i64>(a % p);
    while (nr != 0) {
        i64 q = r / nr;
        i64 tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    return t < 0 ? static_cast<u64>(t + static_cast<i64>(p)) : static_cast<u64>(t);
}

// Legendre symbol (a/p) for odd prime p.
inline int legendre(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    u64 t = powmod(a, (p - 1) / 2, p);
    return t == 1 ? 1 : -1;
}

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Tonelli-Shanks square root mod odd prime p; requires (a/p) != -1.
inline u64 sqrtmod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (legendre(a, p) != 1) throw std::domain_error("sqrtmod: nonresidue");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    // write p-1 = q * 2^s
    u64 q = p - 1, s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    u64 z = 2;
    while (legendre(z, p) != -1) ++z;
    u64 m = s;
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    u64 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit n.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1, s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (u64 i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// FNV-1a 64-bit, used for cache checksums and deterministic seeding.
inline u64 fnv1a64(const void* data, std::size_t n, u64 h = 14695981039346656037ull) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline u64 fnv1a64(const std::string& s, u64 h = 14695981039346656037ull) {
    return fnv1a64(s.data(), s.size(), h);
}

} // namespace effst
