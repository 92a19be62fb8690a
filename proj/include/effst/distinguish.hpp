#pragma once

// Smallest-prime searches separating two curves: opposite-sign traces,
// unequal traces, and unequal traces mod an auxiliary prime ell, with the
// corresponding bound shapes.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "effst/curve.hpp"
#include "effst/trace_table.hpp"

namespace effst {

struct DistinguishResult {
    std::string criterion; // "opposite-sign", "unequal-trace", "mod-ell(l)"
    bool found = false;
    u64 p_star = 0;        // valid iff found
    i64 a_p1 = 0, a_p2 = 0;
    double searched_to = 0;
    double bound_value = 0;
    bool within_bound = false; // p_star <= bound_value with constant 1
};

namespace detail {

inline double log_conductor_product(const CurveQ& E1, const CurveQ& E2) {
    // log(N1*N2) without materializing the product as a double
    return std::log(E1.conductor.convert_to<double>()) + std::log(E2.conductor.convert_to<double>());
}

inline double loglog_2N(const CurveQ& E1, const CurveQ& E2) {
    // log log 2N; the factor 2 guards N = 1
    return std::log(std::log(2.0) + log_conductor_product(E1, E2));
}

template <class Pred>
inline DistinguishResult scan(const TraceTable& t1, const TraceTable& t2, Pred&& pred,
                              const std::string& criterion, double bound_value) {
    DistinguishResult r;
    r.criterion = criterion;
    r.searched_to = std::min(t1.cutoff, t2.cutoff);
    r.bound_value = bound_value;
    std::size_t n = std::min(t1.records.size(), t2.records.size());
    for (std::size_t i = 0; i < n; ++i) {
        const TraceRecord& u = t1.records[i];
        const TraceRecord& v = t2.records[i];
        if (u.p != v.p) throw std::invalid_argument("distinguish: tables do not share a prime set");
        if (static_cast<double>(u.p) > r.searched_to) break;
        if (!u.good || !v.good) continue;
        if (pred(u.a_p, v.a_p)) {
            r.found = true;
            r.p_star = u.p;
            r.a_p1 = u.a_p;
            r.a_p2 = v.a_p;
            r.within_bound = static_cast<double>(u.p) <= bound_value;
            return r;
        }
    }
    return r;
}

} // namespace detail

// Smallest jointly-good p with a_p(E1) a_p(E2) < 0; bound shape
// [K:Q]^2 (log N)^2 (log log 2N)^2 with N the conductor product.
inline DistinguishResult find_opposite_sign(const TraceTable& t1, const TraceTable& t2,
                                            const CurveQ& E1, const CurveQ& E2) {
    double logN = detail::log_conductor_product(E1, E2);
    double ll = detail::loglog_2N(E1, E2);
    double bound = static_cast<double>(E1.degree) * E1.degree * logN * logN * ll * ll;
    return detail::scan(t1, t2, [](i64 a, i64 b) { return a != 0 && b != 0 && ((a < 0) != (b < 0)); },
                        "opposite-sign", bound);
}

// Smallest jointly-good p with a_p(E1) != a_p(E2); bound shape (log N)^2.
inline DistinguishResult find_unequal(const TraceTable& t1, const TraceTable& t2,
                                      const CurveQ& E1, const CurveQ& E2) {
    double logN = detail::log_conductor_product(E1, E2);
    return detail::scan(t1, t2, [](i64 a, i64 b) { return a != b; }, "unequal-trace", logN * logN);
}

// Smallest jointly-good p with a_p(E1) != a_p(E2) mod ell; bound shape
// (log N)^2 (log log 2N)^12.
inline DistinguishResult find_mod_l(const TraceTable& t1, const TraceTable& t2,
                                    const CurveQ& E1, const CurveQ& E2, u64 ell) {
    if (ell < 2 || !is_prime_u64(ell)) throw std::invalid_argument("find_mod_l: ell must be prime");
    double logN = detail::log_conductor_product(E1, E2);
    double ll = detail::loglog_2N(E1, E2);
    double bound = logN * logN * std::pow(ll, 12.0);
    i64 l = static_cast<i64>(ell);
    auto pred = [l](i64 a, i64 b) { return ((a - b) % l + l) % l != 0; };
    DistinguishResult r = detail::scan(t1, t2, pred, "mod-ell(" + std::to_string(ell) + ")", bound);
    return r;
}

struct IsogenyScreen {
    bool distinguished = false; // false: plausibly isogenous up to the cutoff (a warning, not a proof)
    u64 p = 0;                  // first unequal-trace prime when distinguished
};

inline IsogenyScreen isogeny_screen(const TraceTable& t1, const TraceTable& t2,
                                    const CurveQ& E1, const CurveQ& E2, double cutoff) {
    if (t1.cutoff < cutoff || t2.cutoff < cutoff)
        throw std::invalid_argument("isogeny_screen: tables do not cover the cutoff");
    DistinguishResult r = find_unequal(t1, t2, E1, E2);
    IsogenyScreen s;
    if (r.found && static_cast<double>(r.p_star) <= cutoff) {
        s.distinguished = true;
        s.p = r.p_star;
    }
    return s;
}

} // namespace effst
