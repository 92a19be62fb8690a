#pragma once

// Prime enumeration via a segmented sieve of Eratosthenes.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "effst/mod.hpp"

namespace effst {

// All primes <= n, ascending.
inline std::vector<u64> primes_up_to(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    out.push_back(2);
    if (n < 3) return out;

    // base sieve of odd numbers up to sqrt(n)
    const u64 root = isqrt_u64(n);
    std::vector<u64> base; // odd primes <= root
    {
        std::vector<bool> comp((root + 1) / 2 + 1, false);
        for (u64 i = 3; i * i <= root; i += 2) {
            if (!comp[i / 2])
                for (u64 j = i * i; j <= root; j += 2 * i) comp[j / 2] = true;
        }
        for (u64 i = 3; i <= root; i += 2)
            if (!comp[i / 2]) base.push_back(i);
    }

    const u64 seg = 1 << 18;
    std::vector<bool> mark(seg);
    for (u64 lo = 3; lo <= n; lo += 2 * seg) {
        u64 hi = lo + 2 * seg - 2; // odd range [lo, hi]
        if (hi > n) hi = n;
        std::fill(mark.begin(), mark.end(), false);
        for (u64 q : base) {
            u64 start = q * q;
            if (start > hi) break;
            if (start < lo) {
                start = ((lo + q - 1) / q) * q;
                if ((start & 1) == 0) start += q;
            }
            for (u64 j = start; j <= hi; j += 2 * q) mark[(j - lo) / 2] = true;
        }
        for (u64 v = lo; v <= hi; v += 2)
            if (!mark[(v - lo) / 2]) out.push_back(v);
    }
    return out;
}

} // namespace effst
