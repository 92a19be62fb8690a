#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "effst/kernel.hpp"
#include "effst/su2.hpp"

using namespace effst;

TEST_CASE("su2_character matches the Chebyshev recurrence") {
    // chi_{k+1}(theta) = 2 cos(theta) chi_k(theta) - chi_{k-1}(theta)
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> U(0.05, M_PI - 0.05);
    for (int trial = 0; trial < 200; ++trial) {
        double theta = U(rng);
        double prev = 1.0, cur = 2 * std::cos(theta);
        CHECK(su2_character(0, theta) == doctest::Approx(prev).epsilon(1e-12));
        CHECK(su2_character(1, theta) == doctest::Approx(cur).epsilon(1e-12));
        for (u64 k = 2; k <= 20; ++k) {
            double next = 2 * std::cos(theta) * cur - prev;
            CHECK(su2_character(k, theta) == doctest::Approx(next).scale(1.0).epsilon(1e-10));
            prev = cur;
            cur = next;
        }
    }
}

TEST_CASE("su2_character endpoint limits") {
    for (u64 k = 0; k <= 12; ++k) {
        CHECK(su2_character(k, 0.0) == doctest::Approx(k + 1.0).epsilon(1e-12));
        CHECK(su2_character(k, M_PI) ==
              doctest::Approx((k % 2 == 0 ? 1.0 : -1.0) * (k + 1.0)).scale(1.0).epsilon(1e-8));
        // the exponential-sum fallback branch is continuous with the ratio branch
        double lo = su2_character(k, 9e-7), hi = su2_character(k, 1.1e-6);
        CHECK(std::abs(lo - hi) < 1e-6 * (k + 1) * (k + 1));
    }
}

TEST_CASE("characters are orthonormal for the Sato-Tate measure") {
    for (u64 j = 0; j <= 8; ++j) {
        for (u64 k = j; k <= 8; ++k) {
            double ip = st_measure_quadrature(
                [&](double t) { return su2_character(j, t) * su2_character(k, t); });
            CHECK(ip == doctest::Approx(j == k ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("st_measure_interval closed form") {
    CHECK(st_measure_interval(0.0, M_PI).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(st_measure_interval(M_PI / 3, 2 * M_PI / 3).value ==
          doctest::Approx(1.0 / 3 + std::sqrt(3.0) / (2 * M_PI)).epsilon(1e-14));
    CHECK(st_measure_interval(0.4, 0.4).value == 0.0);

    // quadrature oracle on random subintervals
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> U(0.0, M_PI);
    for (int trial = 0; trial < 50; ++trial) {
        double a = U(rng), b = U(rng);
        if (a > b) std::swap(a, b);
        double byquad = gauss_legendre(
            [](double t) { return (2.0 / M_PI) * std::sin(t) * std::sin(t); }, a, b);
        CHECK(st_measure_interval(a, b).value == doctest::Approx(byquad).scale(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(st_measure_interval(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(st_measure_interval(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(st_measure_interval(0.1, 3.5), std::invalid_argument);
}

TEST_CASE("st_measure_character agrees with quadrature") {
    for (u64 k = 0; k <= 6; ++k) {
        double byquad = st_measure_quadrature([&](double t) { return su2_character(k, t); });
        CHECK(st_measure_character(k).value == doctest::Approx(byquad).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("basis change round trips") {
    // c with the top two entries zero inverts exactly
    std::vector<double> c = {0.7, -0.2, 0.31, 0.05, -0.04, 0.0, 0.0};
    CharacterExpansion e = fourier_to_character(c, 0.0);
    REQUIRE(e.d.size() == c.size() - 2);
    std::vector<double> back = character_to_fourier(e.d);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(back[i] == doctest::Approx(c[i]).scale(1.0).epsilon(1e-14));

    // d -> c -> d is exact for any d
    std::vector<double> d = {0.4, 0.1, -0.3, 0.2, 0.05};
    std::vector<double> c2 = character_to_fourier(d);
    CharacterExpansion e2 = fourier_to_character(c2, 0.0);
    REQUIRE(e2.d.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK(e2.d[i] == doctest::Approx(d[i]).scale(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(fourier_to_character({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("character expansion of a window reproduces the window pointwise") {
    KernelParams k = validate_params(0.1, 0.3, 0.08, 2);
    const u64 M = 400;
    EvenWindow w = even_window_coefficients(k, M);
    CharacterExpansion e = character_expansion(w);
    REQUIRE(e.M == M);
    for (int i = 0; i <= 200; ++i) {
        double theta = M_PI * i / 200.0;
        Evaluation f = evaluate_window(w, theta);
        double s = evaluate_character_expansion(e, theta);
        CHECK(std::abs(f.value - s) <= e.tail + f.error_bound + 1e-12);
    }
    // measure of the expansion is d_0, close to mu_ST of the target interval
    double mu = st_measure_interval(2 * M_PI * k.A, 2 * M_PI * k.B).value;
    CHECK(std::abs(e.d[0] - mu) < 0.2); // crude: exact O(Delta) rate tested elsewhere
    double byquad = st_measure_quadrature([&](double t) { return evaluate_character_expansion(e, t); });
    CHECK(byquad == doctest::Approx(e.d[0]).scale(1.0).epsilon(1e-9));
}
