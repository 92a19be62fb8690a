#pragma once

// Trace of Frobenius a_p and Frobenius angles.
//
// Two strategies share the contract a_p = p + 1 - #E(F_p):
//   * exhaustive: quadratic-character sum over x in F_p (O(p)), with p = 2, 3
//     handled by direct point enumeration on the long model;
//   * bsgs: baby-step/giant-step order computation of random points in the
//     Hasse interval, with the quadratic twist used to resolve ambiguity.

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "effst/curve.hpp"
#include "effst/mod.hpp"

namespace effst {

enum class TraceStrategy { automatic, exhaustive, bsgs };

// exhaustive/bsgs crossover (O(p) vs O(p^{1/4}))
inline constexpr u64 kTraceStrategyThreshold = 1ull << 16;

// #E(F_p) by literal enumeration of the long-model equation, plus infinity.
inline u64 count_points_naive(const CurveQ& E, u64 p) {
    u64 a1 = red(E.a1, p), a2 = red(E.a2, p), a3 = red(E.a3, p), a4 = red(E.a4, p), a6 = red(E.a6, p);
    u64 count = 1; // point at infinity
    for (u64 x = 0; x < p; ++x) {
        u64 rhs = (mulmod(addmod(mulmod(addmod(x, a2, p), x, p), a4, p), x, p) + a6) % p;
        u64 lx = mulmod(a1, x, p);
        for (u64 y = 0; y < p; ++y) {
            u64 lhs = (mulmod(y, y, p) + mulmod(lx, y, p) + mulmod(a3, y, p)) % p;
            if (lhs == rhs) ++count;
        }
    }
    return count;
}

// a_p by character sum: for p > 2, #E(F_p) = p + 1 + sum_x chi(4x^3+b2x^2+2b4x+b6).
inline i64 trace_exhaustive(const CurveQ& E, u64 p) {
    if (p <= 3) return static_cast<i64>(p) + 1 - static_cast<i64>(count_points_naive(E, p));
    WeierstrassInvariants v = invariants(E.a1, E.a2, E.a3, E.a4, E.a6);
    u64 b2 = red(v.b2, p), b4two = red(2 * v.b4, p), b6 = red(v.b6, p);
    // quadratic-residue table
    std::vector<unsigned char> qr(p, 0);
    for (u64 i = 1; i <= (p - 1) / 2; ++i) qr[mulmod(i, i, p)] = 1;
    i64 sum = 0;
    for (u64 x = 0; x < p; ++x) {
        // g(x) = ((4x + b2) x + 2 b4) x + b6
        u64 t = addmod(mulmod(4 % p, x, p), b2, p);
        t = addmod(mulmod(t, x, p), b4two, p);
        t = addmod(mulmod(t, x, p), b6, p);
        if (t != 0) sum += qr[t] ? 1 : -1;
    }
    return -sum;
}

namespace detail {

struct Pt {
    u64 x = 0, y = 0;
    bool inf = true;
};

inline bool operator==(const Pt& a, const Pt& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.x == b.x && a.y == b.y;
}

struct ShortCurve {
    u64 p, A, B;

    Pt neg(const Pt& P) const {
        if (P.inf) return P;
        return {P.x, P.y ? p - P.y : 0, false};
    }

    Pt add(const Pt& P, const Pt& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        u64 lam;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return Pt{}; // P = -Q
            // doubling
            u64 num = addmod(mulmod(3, mulmod(P.x, P.x, p), p), A, p);
            lam = mulmod(num, invmod(addmod(P.y, P.y, p), p), p);
        } else {
            lam = mulmod(submod(Q.y, P.y, p), invmod(submod(Q.x, P.x, p), p), p);
        }
        u64 x3 = submod(submod(mulmod(lam, lam, p), P.x, p), Q.x, p);
        u64 y3 = submod(mulmod(lam, submod(P.x, x3, p), p), P.y, p);
        return {x3, y3, false};
    }

    Pt mul(Pt P, u64 k) const {
        Pt R;
        while (k) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }
};

// If a multiple m >= 1 kills P, strip prime factors to get ord(P).
inline u64 order_from_multiple(const ShortCurve& C, const Pt& P, u64 m) {
    u64 d = m;
    u64 rem = m;
    for (u64 q = 2; q * q <= rem; q += (q == 2 ? 1 : 2)) {
        while (rem % q == 0) {
            rem /= q;
            if (d % q == 0 && C.mul(P, d / q).inf) d /= q;
        }
    }
    if (rem > 1 && d % rem == 0 && C.mul(P, d / rem).inf) d /= rem;
    return d;
}

// Smallest m in [p+1-H, p+1+H] with m P = O, found by BSGS over the Hasse
// interval; 0 if none (cannot happen for a point on the curve).
// As a side effect, if a small order is detected during baby steps it is
// returned directly via ord_out.
inline u64 kill_multiple_in_hasse(const ShortCurve& C, const Pt& P, u64 H) {
    const u64 p = C.p;
    u64 lo = p + 1 - H;
    u64 span = 2 * H;
    if (P.inf) return lo;
    u64 w = isqrt_u64(span) + 1;
    auto pack = [&](const Pt& Q) { return Q.inf ? ~0ull : Q.x * p + Q.y; }; // injective for p < 2^32
    // baby steps j*P, j in [0, w)
    std::unordered_map<u64, u64> baby; // packed point -> j
    baby.reserve(w * 2);
    Pt J; // j*P
    for (u64 j = 0; j < w; ++j) {
        if (j > 0 && J.inf) return lo % j == 0 ? lo : lo + (j - lo % j); // ord(P) = j
        baby.emplace(pack(J), j);
        J = C.add(J, P);
    }
    Pt G = C.neg(J);            // -w*P
    Pt cur = C.neg(C.mul(P, lo)); // want u*P = cur0, u in [0, span]; cur = cur0 - k*w*P
    for (u64 k = 0; k * w <= span + w; ++k) {
        auto it = baby.find(pack(cur));
        if (it != baby.end()) {
            u64 u = k * w + it->second;
            if (u <= span) return lo + u;
        }
        cur = C.add(cur, G);
    }
    return 0;
}

} // namespace detail

// a_p via baby-step/giant-step group-order computation; p > 3 with good
// reduction. Deterministically seeded from (curve key, p).
inline i64 trace_bsgs(const CurveQ& E, u64 p) {
    if (p <= 3) throw std::invalid_argument("trace_bsgs: requires p > 3");
    WeierstrassInvariants v = invariants(E.a1, E.a2, E.a3, E.a4, E.a6);
    detail::ShortCurve C{p, red(-27 * v.c4, p), red(-54 * v.c6, p)};
    const u64 H = isqrt_u64(4 * p);

    // twist by the smallest nonresidue
    u64 d = 2;
    while (legendre(d, p) != -1) ++d;
    detail::ShortCurve Ct{p, mulmod(C.A, mulmod(d, d, p), p), mulmod(C.B, mulmod(mulmod(d, d, p), d, p), p)};

    std::mt19937_64 rng(fnv1a64(E.key() + "@" + std::to_string(p)));
    std::uniform_int_distribution<u64> dist(0, p - 1);

    u64 lcmE = 1, lcmT = 1;
    auto resolve = [&](i64& a_out) {
        // candidates a with a^2 <= 4p, lcmE | p+1-a, lcmT | p+1+a
        u64 n0 = p + 1 - H;
        u64 first = ((n0 + lcmE - 1) / lcmE) * lcmE;
        int hits = 0;
        i64 a = 0;
        for (u64 N = first; N <= p + 1 + H; N += lcmE) {
            i64 cand = static_cast<i64>(p) + 1 - static_cast<i64>(N);
            if (u128(std::abs(cand)) * std::abs(cand) > u128(4) * p) continue;
            if ((2 * p + 2 - N) % lcmT == 0) {
                ++hits;
                a = cand;
                if (hits > 1) break;
            }
        }
        if (hits == 1) { a_out = a; return true; }
        if (hits == 0) throw std::logic_error("trace_bsgs: no group-order candidate");
        return false;
    };

    auto lcm_u64 = [](u64 a, u64 b) { return a / std::gcd(a, b) * b; };

    for (int iter = 0; iter < 64; ++iter) {
        i64 a;
        if (resolve(a)) return a;
        u64 x = dist(rng);
        u64 f = (mulmod(addmod(mulmod(x, x, p), C.A, p), x, p) + C.B) % p;
        if (f == 0) {
            // (x, 0) has order 2 on E; the twisted image likewise on the twist
            lcmE = lcm_u64(lcmE, 2);
            lcmT = lcm_u64(lcmT, 2);
            continue;
        }
        if (legendre(f, p) == 1) {
            detail::Pt P{x, sqrtmod(f, p), false};
            u64 m = detail::kill_multiple_in_hasse(C, P, H);
            if (m == 0) throw std::logic_error("trace_bsgs: BSGS found no annihilator");
            lcmE = lcm_u64(lcmE, detail::order_from_multiple(C, P, m));
        } else {
            u64 X = mulmod(d, x, p);
            u64 Y2 = mulmod(mulmod(mulmod(d, d, p), d, p), f, p);
            detail::Pt P{X, sqrtmod(Y2, p), false};
            u64 m = detail::kill_multiple_in_hasse(Ct, P, H);
            if (m == 0) throw std::logic_error("trace_bsgs: BSGS found no annihilator (twist)");
            lcmT = lcm_u64(lcmT, detail::order_from_multiple(Ct, P, m));
        }
    }
    // ambiguity persisted (tiny p with very non-cyclic groups): count directly
    return trace_exhaustive(E, p);
}

inline i64 trace_of_frobenius(const CurveQ& E, u64 p, TraceStrategy strategy = TraceStrategy::automatic) {
    if (reduction_type(E, p) == Reduction::bad)
        throw std::invalid_argument("trace_of_frobenius: bad reduction at p=" + std::to_string(p));
    switch (strategy) {
        case TraceStrategy::exhaustive: return trace_exhaustive(E, p);
        case TraceStrategy::bsgs: return p <= 3 ? trace_exhaustive(E, p) : trace_bsgs(E, p);
        case TraceStrategy::automatic:
        default: return p <= kTraceStrategyThreshold ? trace_exhaustive(E, p) : trace_bsgs(E, p);
    }
}

// theta_p = arccos(a_p / (2 sqrt p)) in [0, pi]
inline double frobenius_angle(i64 a_p, u64 p) {
    if (u128(std::abs(a_p)) * std::abs(a_p) > u128(4) * p)
        throw std::invalid_argument("frobenius_angle: Hasse bound violated");
    double c = static_cast<double>(a_p) / (2.0 * std::sqrt(static_cast<double>(p)));
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return std::acos(c);
}

} // namespace effst
