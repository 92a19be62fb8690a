#pragma once

// SU(2) characters, the Sato-Tate measure, and the Fourier <-> character
// basis change.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "effst/kernel.hpp"
#include "effst/mod.hpp"

namespace effst {

// chi_k(theta) = sin((k+1) theta) / sin(theta), evaluated via the defining
// exponential sum sum_{j=0}^{k} cos((k-2j) theta) when sin(theta) is tiny.
inline double su2_character(u64 k, double theta) {
    double s = std::sin(theta);
    if (std::abs(s) < 1e-6) {
        double v = 0;
        for (u64 j = 0; j <= k; ++j) v += std::cos((static_cast<double>(k) - 2.0 * j) * theta);
        return v;
    }
    return std::sin((static_cast<double>(k) + 1.0) * theta) / s;
}

struct STMeasureValue {
    double value = 0;
};

// mu_ST([a,b]) for 0 <= a <= b <= pi; antiderivative of (2/pi) sin^2 is
// (theta - sin theta cos theta)/pi.
inline STMeasureValue st_measure_interval(double a, double b) {
    if (a > b) throw std::invalid_argument("st_measure_interval: reversed endpoints");
    if (a < 0 || b > M_PI + 1e-12) throw std::invalid_argument("st_measure_interval: endpoints outside [0, pi]");
    auto F = [](double t) { return (t - std::sin(t) * std::cos(t)) / M_PI; };
    return {F(b) - F(a)};
}

// mu_ST(chi_k): 1 for the trivial character, 0 otherwise (orthogonality).
inline STMeasureValue st_measure_character(u64 k) { return {k == 0 ? 1.0 : 0.0}; }

struct CharacterExpansion {
    u64 M = 0;             // truncation index of the source window
    std::vector<double> d; // d[k] = c_k - c_{k+2}, 0 <= k <= M-2
    double tail = 0;       // certified sup-norm bound on the remainder
};

// Character coefficients from cosine coefficients: d_k = c_k - c_{k+2}.
inline CharacterExpansion fourier_to_character(const std::vector<double>& c, double tail = 0.0) {
    if (c.size() < 3) throw std::invalid_argument("fourier_to_character: need coefficients through index >= 2");
    CharacterExpansion e;
    e.M = c.size() - 1;
    e.d.resize(c.size() - 2);
    for (std::size_t k = 0; k + 2 < c.size(); ++k) e.d[k] = c[k] - c[k + 2];
    e.tail = tail;
    return e;
}

inline CharacterExpansion character_expansion(const EvenWindow& w) {
    return fourier_to_character(w.c, truncation_tail_bound(w.params, w.c.size() - 1));
}

// Inverse basis change (finite): c_k = d_k + d_{k+2} + d_{k+4} + ...
inline std::vector<double> character_to_fourier(const std::vector<double>& d) {
    std::vector<double> c(d.size() + 2, 0.0);
    for (std::size_t k = d.size(); k-- > 0;) {
        c[k] = d[k] + (k + 2 < c.size() ? c[k + 2] : 0.0);
    }
    return c;
}

inline double evaluate_character_expansion(const CharacterExpansion& e, double theta) {
    double v = 0;
    for (std::size_t k = 0; k < e.d.size(); ++k) v += e.d[k] * su2_character(k, theta);
    return v;
}

// Composite Gauss-Legendre quadrature of f over [a, b] (5-point rule per panel).
template <class F>
inline double gauss_legendre(F&& f, double a, double b, unsigned panels = 2048) {
    static const double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
    static const double weight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};
    double h = (b - a) / panels;
    double s = 0;
    for (unsigned i = 0; i < panels; ++i) {
        double mid = a + (i + 0.5) * h;
        double half = 0.5 * h;
        for (int j = 0; j < 5; ++j) s += weight[j] * f(mid + half * node[j]);
        // Kahan not needed at these sizes
    }
    return s * 0.5 * h;
}

// mu_ST(f) by quadrature; used by tests as an independent check.
template <class F>
inline double st_measure_quadrature(F&& f, unsigned panels = 2048) {
    return gauss_legendre([&](double t) { return (2.0 / M_PI) * std::sin(t) * std::sin(t) * f(t); },
                          0.0, M_PI, panels);
}

} // namespace effst
