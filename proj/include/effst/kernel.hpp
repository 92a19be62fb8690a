#pragma once

// Smoothed interval indicator on the period-1 circle and its even window.
//
// D_{A,B} is constructed as the periodized indicator of [A, B] convolved r
// times with the normalized box of width Delta/r. This makes the complex
// Fourier coefficients closed-form:
//
//   Dhat(m) = (e^{-2 pi i m A} - e^{-2 pi i m B}) / (2 pi i m) * sinc(pi m Delta / r)^r
//
// and gives |a_m|, |b_m| <= min{ 2(B-A), 2/(pi m), (2/(pi m)) (r/(pi m Delta))^r }
// exactly (|sinc z| <= min(1, 1/|z|) and |Dhat(m)| <= integral of D = B-A).
//
// The even window F_{A,B}(theta) = D(theta/2pi) + D(-theta/2pi) has cosine
// coefficients c_0 = 2(B-A), c_m = a_m.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "effst/mod.hpp"

namespace effst {

struct KernelParams {
    double A = 0, B = 0, Delta = 0;
    int r = 1;
};

// Enforces 0 < Delta < 1/2 and Delta <= B - A <= 1 - Delta, r >= 1.
// Throws with the failing inequality spelled out.
inline KernelParams validate_params(double A, double B, double Delta, int r) {
    auto fail = [](const std::string& ineq) {
        throw std::invalid_argument("kernel parameters invalid: " + ineq);
    };
    if (!(r >= 1)) fail("r >= 1");
    if (!(Delta > 0)) fail("0 < Delta");
    if (!(Delta < 0.5)) fail("Delta < 1/2");
    if (!(Delta <= B - A)) fail("Delta <= B - A");
    if (!(B - A <= 1 - Delta)) fail("B - A <= 1 - Delta");
    return KernelParams{A, B, Delta, r};
}

struct FourierCoefficient {
    double a = 0, b = 0; // cos and sin coefficients
};

// The Vinogradov-type coefficient bound; decreasing in m.
inline double coefficient_bound(const KernelParams& k, u64 m) {
    if (m == 0) return k.B - k.A;
    double flat = 2.0 * (k.B - k.A);
    double harmonic = 2.0 / (M_PI * static_cast<double>(m));
    double decayed = harmonic * std::pow(k.r / (M_PI * static_cast<double>(m) * k.Delta), k.r);
    return std::min(flat, std::min(harmonic, decayed));
}

inline FourierCoefficient fourier_coefficient(const KernelParams& k, u64 m) {
    if (m == 0) return {k.B - k.A, 0.0};
    const double tau = 2.0 * M_PI * static_cast<double>(m);
    std::complex<double> num = std::exp(std::complex<double>(0, -tau * k.A)) -
                               std::exp(std::complex<double>(0, -tau * k.B));
    std::complex<double> hat = num / std::complex<double>(0, tau);
    double z = M_PI * static_cast<double>(m) * k.Delta / k.r;
    double sinc = std::sin(z) / z;
    hat *= std::pow(sinc, k.r);
    // D(x) = a0 + sum_m (a_m cos(2 pi m x) + b_m sin(2 pi m x))
    return {2.0 * hat.real(), -2.0 * hat.imag()};
}

// Upper bound on sum_{m > M} coefficient_bound(m): explicit partial sum plus
// an integral comparison sum_{m > M'} m^{-r-1} <= M'^{-r} / r on the decayed
// piece.
inline double coefficient_tail_sum(const KernelParams& k, u64 M) {
    const u64 explicit_terms = 1024;
    double s = 0;
    for (u64 m = M + 1; m <= M + explicit_terms; ++m) s += coefficient_bound(k, m);
    double C = (2.0 / M_PI) * std::pow(k.r / (M_PI * k.Delta), k.r);
    double M1 = static_cast<double>(M + explicit_terms);
    s += C * std::pow(M1, -static_cast<double>(k.r)) / k.r;
    return s;
}

struct Evaluation {
    double value = 0;
    double error_bound = 0;
};

// Truncated Fourier evaluation of D with a certified tail bound: the discarded
// amplitude at index m is sqrt(a_m^2+b_m^2) = 2|Dhat(m)| <= coefficient_bound(m).
inline Evaluation evaluate_D(const KernelParams& k, double x, u64 M_eval) {
    if (M_eval < 1) throw std::invalid_argument("evaluate_D: M_eval >= 1 required");
    double v = k.B - k.A;
    for (u64 m = 1; m <= M_eval; ++m) {
        FourierCoefficient c = fourier_coefficient(k, m);
        double w = 2.0 * M_PI * static_cast<double>(m) * x;
        v += c.a * std::cos(w) + c.b * std::sin(w);
    }
    return {v, coefficient_tail_sum(k, M_eval)};
}

// Smallest M with evaluation tail bound <= tol.
inline u64 default_m_eval(const KernelParams& k, double tol = 1e-6) {
    u64 lo = 1, hi = 1;
    while (coefficient_tail_sum(k, hi) > tol) {
        hi *= 2;
        if (hi > (u64(1) << 40)) throw std::runtime_error("default_m_eval: tolerance unreachable");
    }
    while (lo < hi) {
        u64 mid = lo + (hi - lo) / 2;
        if (coefficient_tail_sum(k, mid) <= tol)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

struct EvenWindow {
    KernelParams params;
    std::vector<double> c; // c[0] = 2(B-A), c[m] = a_m for 1 <= m <= M
};

inline EvenWindow even_window_coefficients(const KernelParams& k, u64 M) {
    EvenWindow w;
    w.params = k;
    w.c.resize(M + 1);
    w.c[0] = 2.0 * (k.B - k.A);
    for (u64 m = 1; m <= M; ++m) w.c[m] = fourier_coefficient(k, m).a;
    return w;
}

// F_{A,B}(theta) = 2(B-A) + 2 sum_{m>=1} a_m cos(m theta), truncated at the
// window's stored index; error bounded by 2 * coefficient_tail_sum.
inline Evaluation evaluate_window(const EvenWindow& w, double theta) {
    double v = w.c[0];
    for (std::size_t m = 1; m < w.c.size(); ++m)
        v += 2.0 * w.c[m] * std::cos(static_cast<double>(m) * theta);
    return {v, 2.0 * coefficient_tail_sum(w.params, w.c.size() - 1)};
}

// Sup-norm bound on F_{A,B} minus its character expansion through chi_{M-2}.
//
// With K = M-2 and S_K the character partial sum, collecting e^{im theta}
// coefficients gives
//   F - S_K = sum_{|m|>K} c_m e^{im theta} + sum_{|m|<=K} c_{K'(m)+2} e^{im theta}
// with K'(m) in {K-1, K}, hence
//   |F - S_K| <= 2 * sum_{m>K} bound(m) + (2K+1) * bound(K+1).
// This replaces the O((r/pi)^r / (M^r Delta^{r+1})) truncation estimate with an
// explicit constant; the integral comparison sum_{m>M} m^{-r-1} <= M^{-r}/r
// closes the tail.
inline double truncation_tail_bound(const KernelParams& k, u64 M) {
    if (M < 2) throw std::invalid_argument("truncation_tail_bound: M >= 2 required");
    u64 K = M - 2;
    if (K == 0) {
        // expansion is the constant d_0 alone; bound everything above index 0
        return 2.0 * coefficient_tail_sum(k, 0) + coefficient_bound(k, 1) + coefficient_bound(k, 2);
    }
    return 2.0 * coefficient_tail_sum(k, K) + (2.0 * static_cast<double>(K) + 1.0) * coefficient_bound(k, K + 1);
}

} // namespace effst
