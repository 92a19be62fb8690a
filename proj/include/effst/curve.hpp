#pragma once

// Integral Weierstrass models over Q: standard invariants, global minimal
// models (Laska-Kraus-Connell), reduction type, j-invariant CM screen, and
// a radical-of-discriminant conductor approximation.

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "effst/mod.hpp"
#include "effst/primes.hpp"

namespace effst {

using bigint = boost::multiprecision::cpp_int;

struct CurveQ {
    bigint a1, a2, a3, a4, a6; // long Weierstrass coefficients, globally minimal
    std::string label;         // optional short name
    bigint disc_min;           // minimal discriminant, nonzero
    bigint conductor;          // >= 1
    bool conductor_supplied = false; // false: radical-of-discriminant approximation
    int degree = 1;            // field degree [K:Q]; kept for bound formulas

    // canonical coefficient string, used for cache keys and seeding
    std::string key() const {
        std::ostringstream os;
        os << a1 << ',' << a2 << ',' << a3 << ',' << a4 << ',' << a6;
        return os.str();
    }
};

struct WeierstrassInvariants {
    bigint b2, b4, b6, b8, c4, c6, disc;
};

inline WeierstrassInvariants invariants(const bigint& a1, const bigint& a2, const bigint& a3,
                                        const bigint& a4, const bigint& a6) {
    WeierstrassInvariants v;
    v.b2 = a1 * a1 + 4 * a2;
    v.b4 = 2 * a4 + a1 * a3;
    v.b6 = a3 * a3 + 4 * a6;
    v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    v.c4 = v.b2 * v.b2 - 24 * v.b4;
    v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
    v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
    return v;
}

inline bigint mod_nonneg(const bigint& a, const bigint& m) {
    bigint r = a % m;
    if (r < 0) r += m;
    return r;
}

// Kraus' criterion: (c4, c6) with c4^3 - c6^2 = 1728*disc, disc != 0, arises
// from an integral Weierstrass model over Z iff
//   ord_3(c6) != 2, and
//   c6 = -1 (mod 4), or c4 = 0 (mod 16) and c6 = 0 or 8 (mod 32).
inline bool kraus_valid(const bigint& c4, const bigint& c6) {
    if (c6 != 0) {
        bigint t = c6;
        int v3 = 0;
        while (t % 3 == 0 && v3 < 3) { t /= 3; ++v3; }
        if (v3 == 2) return false;
    }
    if (mod_nonneg(c6, 4) == 3) return true;
    if (mod_nonneg(c4, 16) == 0) {
        bigint r = mod_nonneg(c6, 32);
        if (r == 0 || r == 8) return true;
    }
    return false;
}

// Reconstruct the canonical integral model from Kraus-valid (c4, c6).
inline std::array<bigint, 5> model_from_c4c6(const bigint& c4, const bigint& c6) {
    bigint b2 = mod_nonneg(-c6, 12);
    if (b2 > 6) b2 -= 12;
    bigint b4 = (b2 * b2 - c4) / 24;
    bigint b6 = (-b2 * b2 * b2 + 36 * b2 * b4 - c6) / 216;
    bigint a1 = mod_nonneg(b2, 2);
    bigint a2 = (b2 - a1) / 4;
    bigint a3 = mod_nonneg(b6, 2);
    bigint a4 = (b4 - a1 * a3) / 2;
    bigint a6 = (b6 - a3) / 4;
    return {a1, a2, a3, a4, a6};
}

// floor(n^(1/k)) for n >= 0 by binary search
inline bigint integer_kth_root(const bigint& n, unsigned k) {
    if (n <= 1) return n;
    bigint lo = 1, hi = n;
    while (lo < hi) {
        bigint mid = (lo + hi + 1) / 2;
        if (boost::multiprecision::pow(mid, k) <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// Radical of |n| by trial division. Factors beyond the trial bound are handled
// by perfect-power reduction; a residual composite cofactor enters the radical
// whole (harmless here: the conductor is only used through log N).
inline bigint radical(bigint n) {
    if (n < 0) n = -n;
    if (n <= 1) return 1;
    bigint rad = 1;
    for (u64 q : {2ull, 3ull, 5ull}) {
        if (n % q == 0) {
            rad *= q;
            while (n % q == 0) n /= q;
        }
    }
    for (u64 q = 7; q <= 1000000 && bigint(q) * q <= n; q += 2) {
        if (n % q == 0) {
            rad *= q;
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) {
        // reduce a leftover perfect power to its base
        bool reduced = true;
        while (reduced && n > 1) {
            reduced = false;
            for (unsigned k = 12; k >= 2; --k) {
                bigint root = integer_kth_root(n, k);
                if (boost::multiprecision::pow(root, k) == n) {
                    n = root;
                    reduced = true;
                    break;
                }
            }
        }
        rad *= n;
    }
    return rad;
}

// Globally minimal model via Laska-Kraus-Connell: scale (c4, c6) down by the
// largest u with u^4 | c4, u^6 | c6, u^12 | disc subject to Kraus' criterion,
// then rebuild the model from the minimal pair.
inline CurveQ minimal_model(const bigint& a1, const bigint& a2, const bigint& a3,
                            const bigint& a4, const bigint& a6,
                            const std::string& label = std::string()) {
    WeierstrassInvariants v = invariants(a1, a2, a3, a4, a6);
    if (v.disc == 0) throw std::invalid_argument("minimal_model: singular curve (discriminant 0)");

    // candidate scaling primes q: need q^12 | disc
    std::vector<bigint> qs;
    {
        bigint d = v.disc < 0 ? -v.disc : v.disc;
        for (u64 q = 2; q <= 100000; q = (q == 2 ? 3 : q + 2)) {
            if (!is_prime_u64(q)) continue;
            bigint qq = bigint(q);
            bigint q12 = boost::multiprecision::pow(qq, 12);
            if (q12 > d) break;
            if (d % q12 == 0) qs.push_back(qq);
            while (d % qq == 0) d /= qq;
        }
    }

    bigint u = 1;
    bigint c4 = v.c4, c6 = v.c6, disc = v.disc;
    for (const bigint& q : qs) {
        auto vq = [&](bigint n, unsigned cap) {
            unsigned e = 0;
            if (n == 0) return cap;
            if (n < 0) n = -n;
            while (e < cap && n % q == 0) { n /= q; ++e; }
            return e;
        };
        while (true) {
            unsigned e4 = vq(c4, 4), e6 = vq(c6, 6), e12 = vq(disc, 12);
            if (e4 < 4 || e6 < 6 || e12 < 12) break;
            bigint q4 = boost::multiprecision::pow(q, 4);
            bigint q6 = q4 * q * q;
            bigint nc4 = c4 / q4, nc6 = c6 / q6;
            if ((q == 2 || q == 3) && !kraus_valid(nc4, nc6)) break;
            c4 = nc4;
            c6 = nc6;
            disc /= boost::multiprecision::pow(q, 12);
            u *= q;
        }
    }

    CurveQ E;
    if (u == 1) {
        // input already minimal; keep its coefficients verbatim
        E.a1 = a1; E.a2 = a2; E.a3 = a3; E.a4 = a4; E.a6 = a6;
    } else {
        auto m = model_from_c4c6(c4, c6);
        E.a1 = m[0]; E.a2 = m[1]; E.a3 = m[2]; E.a4 = m[3]; E.a6 = m[4];
    }
    WeierstrassInvariants mv = invariants(E.a1, E.a2, E.a3, E.a4, E.a6);
    if (mv.c4 != c4 || mv.c6 != c6 || mv.disc != disc)
        throw std::logic_error("minimal_model: reconstruction mismatch");
    E.disc_min = disc;
    E.label = label;
    E.conductor = radical(disc);
    E.conductor_supplied = false;
    return E;
}

inline CurveQ minimal_model(const CurveQ& raw) {
    CurveQ E = minimal_model(raw.a1, raw.a2, raw.a3, raw.a4, raw.a6, raw.label);
    if (raw.conductor_supplied) {
        E.conductor = raw.conductor;
        E.conductor_supplied = true;
    }
    E.degree = raw.degree;
    return E;
}

enum class Reduction { good, bad };

inline Reduction reduction_type(const CurveQ& E, u64 p) {
    return E.disc_min % p == 0 ? Reduction::bad : Reduction::good;
}

// The thirteen rational j-invariants with complex multiplication
// (imaginary quadratic orders of class number one).
inline const std::vector<bigint>& cm_j_invariants() {
    static const std::vector<bigint> js = {
        bigint(0),
        bigint(1728),
        bigint(-3375),
        bigint(8000),
        bigint(-32768),
        bigint(54000),
        bigint(287496),
        bigint(-884736),
        bigint(-12288000),
        bigint(16581375),
        bigint(-884736000),
        bigint("-147197952000"),
        bigint("-262537412640768000"),
    };
    return js;
}

// true iff j(E) = c4^3 / disc is one of the thirteen rational CM j-invariants.
inline bool cm_check(const CurveQ& E) {
    WeierstrassInvariants v = invariants(E.a1, E.a2, E.a3, E.a4, E.a6);
    bigint num = v.c4 * v.c4 * v.c4;
    if (num % v.disc != 0) return false; // j not an integer => no CM over Q
    bigint j = num / v.disc;
    for (const bigint& c : cm_j_invariants())
        if (j == c) return true;
    return false;
}

// Accepts "a1,a2,a3,a4,a6" (long form) or "a4,a6" (short form y^2 = x^3+a4x+a6);
// spaces work as separators too. Returns the minimal model.
inline CurveQ parse_curve(const std::string& text, const std::string& label = std::string()) {
    std::string t = text;
    for (char& c : t)
        if (c == ',' || c == ':' || c == ';') c = ' ';
    std::istringstream is(t);
    std::vector<bigint> v;
    std::string tok;
    while (is >> tok) v.emplace_back(tok);
    if (v.size() == 2) return minimal_model(0, 0, 0, v[0], v[1], label);
    if (v.size() == 5) return minimal_model(v[0], v[1], v[2], v[3], v[4], label);
    throw std::invalid_argument("parse_curve: expected 2 or 5 integers, got " + std::to_string(v.size()));
}

// Quadratic twist by squarefree d of a short-form representative; returns the
// minimal model of y^2 = x^3 + c4' x + c6'-type twist of E.
inline CurveQ quadratic_twist(const CurveQ& E, const bigint& d, const std::string& label = std::string()) {
    WeierstrassInvariants v = invariants(E.a1, E.a2, E.a3, E.a4, E.a6);
    // E is isomorphic over Q to y^2 = x^3 - 27 c4 x - 54 c6; twist scales by d^2, d^3.
    bigint A = -27 * v.c4 * d * d;
    bigint B = -54 * v.c6 * d * d * d;
    return minimal_model(0, 0, 0, A, B, label);
}

// reduced coefficient a mod p as u64
inline u64 red(const bigint& a, u64 p) {
    bigint r = a % p;
    if (r < 0) r += p;
    return r.convert_to<u64>();
}

} // namespace effst
