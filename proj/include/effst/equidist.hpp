#pragma once

// Prime sums over trace tables, Li(x), the balancing-parameter formulas, and
// discrepancy reports for the single- and two-curve equidistribution bounds.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "effst/curve.hpp"
#include "effst/kernel.hpp"
#include "effst/su2.hpp"
#include "effst/trace_table.hpp"

namespace effst {

namespace detail {

template <class F>
inline double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                               double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Li(x) = integral_2^x dt / log t, adaptive Simpson, relative error <= 1e-10.
inline double li(double x) {
    if (x < 2) throw std::invalid_argument("li: x >= 2 required");
    if (x == 2) return 0.0;
    auto f = [](double t) { return 1.0 / std::log(t); };
    double fa = f(2.0), fb = f(x), fm = f(0.5 * (2.0 + x));
    double whole = (x - 2.0) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::max(1.0, (x - 2.0) / std::log(x));
    return detail::adaptive_simpson(f, 2.0, x, fa, fm, fb, whole, 1e-11 * scale, 48);
}

struct CharacterSum {
    double sum = 0;      // sum over good p <= x of chi_k(theta_p)
    double main = 0;     // mu(chi_k) Li(x)
    double residual = 0; // sum - main
    double shape = 0;    // d_chi x^{1/2} log(N (x + d_chi)), d_chi = (k+1) [K:Q]
    u64 good_count = 0;
};

inline CharacterSum character_prime_sum(const TraceTable& t, u64 k, double x,
                                        double N = 1.0, int degree = 1) {
    if (t.cutoff < x) throw std::invalid_argument("character_prime_sum: table cutoff below x");
    CharacterSum r;
    for (const TraceRecord& rec : t.records) {
        if (static_cast<double>(rec.p) > x) break;
        if (!rec.good) continue;
        ++r.good_count;
        r.sum += su2_character(k, rec.theta);
    }
    r.main = st_measure_character(k).value * li(x);
    r.residual = r.sum - r.main;
    double d_chi = (static_cast<double>(k) + 1.0) * degree;
    r.shape = d_chi * std::sqrt(x) * std::log(N * (x + d_chi));
    return r;
}

struct WindowSum {
    double direct = 0;         // sum of F_{A,B}(theta_p), truncated-series evaluation
    double via_characters = 0; // sum over m of d_m * character sum
    double agreement_bound = 0;
    u64 good_count = 0;
};

// Computes the window prime sum along both routes of eq-style consistency:
// direct kernel evaluation and the character expansion. Disagreement beyond
// the certified bound signals an expansion bug.
inline WindowSum window_prime_sum(const TraceTable& t, const EvenWindow& w, double x) {
    if (t.cutoff < x) throw std::invalid_argument("window_prime_sum: table cutoff below x");
    CharacterExpansion e = character_expansion(w);
    WindowSum r;
    double eval_tail = 2.0 * coefficient_tail_sum(w.params, w.c.size() - 1);
    for (const TraceRecord& rec : t.records) {
        if (static_cast<double>(rec.p) > x) break;
        if (!rec.good) continue;
        ++r.good_count;
        r.direct += evaluate_window(w, rec.theta).value;
        r.via_characters += evaluate_character_expansion(e, rec.theta);
    }
    r.agreement_bound = (e.tail + eval_tail) * static_cast<double>(r.good_count) + 1e-9 * (1.0 + std::abs(r.direct));
    if (std::abs(r.direct - r.via_characters) > r.agreement_bound)
        throw std::logic_error("window_prime_sum: evaluation paths disagree beyond certified bound");
    return r;
}

struct BalancingParams {
    double Delta = 0;
    u64 M = 0;
    bool in_regime = false; // Delta < 1/2; otherwise x is below the effective range
};

// Theorem balancing for the single-curve bound:
// Delta = x^{-1/4} [K:Q]^{1/2} (log x) (log(Nx))^{1/2}, M = ceil(Delta^{-2}).
inline BalancingParams single_params(double x, double N, int degree) {
    if (x < 3 || N < 1 || degree < 1) throw std::invalid_argument("single_params: need x >= 3, N >= 1, degree >= 1");
    BalancingParams b;
    b.Delta = std::pow(x, -0.25) * std::sqrt(static_cast<double>(degree)) * std::log(x) *
              std::sqrt(std::log(N * x));
    b.M = static_cast<u64>(std::ceil(std::pow(b.Delta, -2.0)));
    b.in_regime = b.Delta < 0.5;
    return b;
}

// Two-curve joint bound: Delta = x^{-1/6} [K:Q]^{1/3} (log x) (log(Nx))^{1/3},
// M = ceil(Delta^{-3}).
inline BalancingParams joint_params(double x, double N, int degree) {
    if (x < 3 || N < 1 || degree < 1) throw std::invalid_argument("joint_params: need x >= 3, N >= 1, degree >= 1");
    BalancingParams b;
    b.Delta = std::pow(x, -1.0 / 6.0) * std::pow(static_cast<double>(degree), 1.0 / 3.0) * std::log(x) *
              std::cbrt(std::log(N * x));
    b.M = static_cast<u64>(std::ceil(std::pow(b.Delta, -3.0)));
    b.in_regime = b.Delta < 0.5;
    return b;
}

// Opposite-sign search tuning (r = 2):
// Delta = x^{-1/10} [K:Q]^{1/5} (log x)^{1/5} (log(Nx))^{1/5}, M = ceil(Delta^{-5/2}).
inline BalancingParams distinguish_params(double x, double N, int degree) {
    if (x < 3 || N < 1 || degree < 1) throw std::invalid_argument("distinguish_params: need x >= 3, N >= 1, degree >= 1");
    BalancingParams b;
    b.Delta = std::pow(x, -0.1) * std::pow(static_cast<double>(degree), 0.2) *
              std::pow(std::log(x), 0.2) * std::pow(std::log(N * x), 0.2);
    b.M = static_cast<u64>(std::ceil(std::pow(b.Delta, -2.5)));
    b.in_regime = b.Delta < 0.5;
    return b;
}

struct DiscrepancyReport {
    std::string label;
    double x = 0;
    double a = 0, b = 0;       // interval [a, b] in [0, pi]
    u64 observed = 0;          // #{good p <= x : theta_p in [a, b]}
    double main_term = 0;      // mu_ST(I) Li(x)
    double difference = 0;     // observed - main_term
    double normalizer = 0;     // [K:Q]^{1/2} x^{3/4} (log Nx)^{1/2}
    double ratio = 0;          // difference / normalizer
    double delta_used = 0;
    u64 M_used = 0;
    bool in_regime = false;
    bool conductor_supplied = false;
    bool cm_warning = false;   // theorem hypothesis violated
    u64 bad_dropped = 0;
};

inline DiscrepancyReport discrepancy_report(const TraceTable& t, const CurveQ& E,
                                            double a, double b, double x) {
    if (a > b || a < 0 || b > M_PI + 1e-12)
        throw std::invalid_argument("discrepancy_report: interval must satisfy 0 <= a <= b <= pi");
    if (t.cutoff < x) throw std::invalid_argument("discrepancy_report: table cutoff below x");
    DiscrepancyReport r;
    r.label = E.label.empty() ? E.key() : E.label;
    r.x = x;
    r.a = a;
    r.b = b;
    r.cm_warning = cm_check(E);
    for (const TraceRecord& rec : t.records) {
        if (static_cast<double>(rec.p) > x) break;
        if (!rec.good) { ++r.bad_dropped; continue; }
        if (rec.theta >= a && rec.theta <= b) ++r.observed;
    }
    double N = E.conductor.convert_to<double>();
    r.main_term = st_measure_interval(a, b).value * li(x);
    r.difference = static_cast<double>(r.observed) - r.main_term;
    r.normalizer = std::sqrt(static_cast<double>(E.degree)) * std::pow(x, 0.75) * std::sqrt(std::log(N * x));
    r.ratio = r.difference / r.normalizer;
    BalancingParams bp = single_params(x, N, E.degree);
    r.delta_used = bp.Delta;
    r.M_used = bp.M;
    r.in_regime = bp.in_regime;
    r.conductor_supplied = E.conductor_supplied;
    return r;
}

struct JointDiscrepancyReport {
    std::string label1, label2;
    double x = 0;
    double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    u64 observed = 0;
    double main_term = 0;  // mu_ST(I1) mu_ST(I2) Li(x)
    double difference = 0;
    double normalizer = 0; // [K:Q]^{1/3} x^{5/6} (log Nx)^{1/3}
    double ratio = 0;
    double delta_used = 0;
    u64 M_used = 0;
    bool in_regime = false;
    bool conductor_supplied = false;
    bool cm_warning = false;
    u64 bad_dropped = 0; // primes bad for either curve
};

inline JointDiscrepancyReport joint_discrepancy_report(const TraceTable& t1, const TraceTable& t2,
                                                       const CurveQ& E1, const CurveQ& E2,
                                                       double a1, double b1, double a2, double b2,
                                                       double x) {
    if (t1.cutoff < x || t2.cutoff < x)
        throw std::invalid_argument("joint_discrepancy_report: table cutoff below x");
    JointDiscrepancyReport r;
    r.label1 = E1.label.empty() ? E1.key() : E1.label;
    r.label2 = E2.label.empty() ? E2.key() : E2.label;
    r.x = x;
    r.a1 = a1; r.b1 = b1; r.a2 = a2; r.b2 = b2;
    r.cm_warning = cm_check(E1) || cm_check(E2);
    std::size_t n = std::min(t1.records.size(), t2.records.size());
    for (std::size_t i = 0; i < n; ++i) {
        const TraceRecord& u = t1.records[i];
        const TraceRecord& v = t2.records[i];
        if (u.p != v.p) throw std::invalid_argument("joint_discrepancy_report: tables do not share a prime set");
        if (static_cast<double>(u.p) > x) break;
        if (!u.good || !v.good) { ++r.bad_dropped; continue; }
        if (u.theta >= a1 && u.theta <= b1 && v.theta >= a2 && v.theta <= b2) ++r.observed;
    }
    double N = (E1.conductor * E2.conductor).convert_to<double>();
    r.main_term = st_measure_interval(a1, b1).value * st_measure_interval(a2, b2).value * li(x);
    r.difference = static_cast<double>(r.observed) - r.main_term;
    int degree = E1.degree;
    r.normalizer = std::cbrt(static_cast<double>(degree)) * std::pow(x, 5.0 / 6.0) *
                   std::cbrt(std::log(N * x));
    r.ratio = r.difference / r.normalizer;
    BalancingParams bp = joint_params(x, N, degree);
    r.delta_used = bp.Delta;
    r.M_used = bp.M;
    r.in_regime = bp.in_regime;
    r.conductor_supplied = E1.conductor_supplied && E2.conductor_supplied;
    return r;
}

// Least-squares slope of log|difference| against log x; zero differences are
// floored at 1 before taking logs.
inline double bound_shape_fit(const std::vector<DiscrepancyReport>& reports) {
    if (reports.size() < 3) throw std::invalid_argument("bound_shape_fit: need at least 3 reports");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(reports.size());
    for (const DiscrepancyReport& r : reports) {
        double lx = std::log(r.x);
        double ly = std::log(std::max(std::abs(r.difference), 1.0));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace effst
