#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracbubble/bubble.hpp"

using namespace fracbubble;

namespace {
const FracDims kDims = compute_constants(1, 0.4);
}

TEST_CASE("bubble value at the center equals the amplitude") {
    BubbleParams prm;
    prm.lambda = 1.0;
    prm.xi = Point{0.0};
    CHECK(bubble_value(kDims, prm, Point{0.0}) ==
          doctest::Approx(kDims.a_ns).epsilon(1e-15));
}

TEST_CASE("lambda-rescaling identity holds to rounding") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    std::uniform_real_distribution<double> L(0.2, 5.0);
    for (int t = 0; t < 100; ++t) {
        const double lam = L(rng);
        const double xi = U(rng), x = U(rng);
        BubbleParams a{lam, Point{xi}};
        BubbleParams b{1.0, Point{0.0}};
        const double lhs = bubble_value(kDims, a, Point{x});
        const double rhs = std::pow(lam, -0.5 * kDims.nu()) *
                           bubble_value(kDims, b, Point{(x - xi) / lam});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("far-field tail approaches the amplitude") {
    BubbleParams prm{1.0, Point{0.0}};
    const double x = 1e4;
    const double v = bubble_value(kDims, prm, Point{x});
    CHECK(std::pow(x, kDims.nu()) * v ==
          doctest::Approx(kDims.a_ns).epsilon(1e-3));
}

TEST_CASE("gradient closed forms at the center") {
    BubbleParams prm{1.0, Point{0.0}};
    auto g = bubble_gradients(kDims, prm, Point{0.0});
    CHECK(g.psi0 == doctest::Approx(-kDims.a_ns * kDims.nu() / 2.0).epsilon(1e-14));
    CHECK(g.psi[0] == doctest::Approx(0.0));
}

TEST_CASE("gradients match central finite differences at random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::uniform_real_distribution<double> L(0.5, 2.0);
    const double h = 1e-5;
    for (int t = 0; t < 100; ++t) {
        const double lam = L(rng), xi = U(rng), x = U(rng);
        Point px{x};
        auto g = bubble_gradients(kDims, BubbleParams{lam, Point{xi}}, px);
        const double dl =
            (bubble_value(kDims, BubbleParams{lam + h, Point{xi}}, px) -
             bubble_value(kDims, BubbleParams{lam - h, Point{xi}}, px)) /
            (2.0 * h);
        CHECK(std::fabs(g.psi0 - dl) < 1e-6);
        const double dxi =
            (bubble_value(kDims, BubbleParams{lam, Point{xi + h}}, px) -
             bubble_value(kDims, BubbleParams{lam, Point{xi - h}}, px)) /
            (2.0 * h);
        CHECK(std::fabs(g.psi[0] - dxi) < 1e-6);
    }
}

TEST_CASE("constants: closed forms vs adaptive quadrature") {
    // c0 = pi a^10 in this configuration
    CHECK(kDims.c0 ==
          doctest::Approx(M_PI * std::pow(kDims.a_ns, 10.0)).epsilon(1e-10));
    CHECK(kDims.c0 == doctest::Approx(c0_closed_form(kDims)).epsilon(1e-10));
    CHECK(kDims.c1 == doctest::Approx(c1_closed_form(kDims)).epsilon(1e-10));
    CHECK(kDims.p == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(kDims.alpha0 == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("c0 is lambda-invariant; c1 scales like lambda^((N-2s)/2)") {
    // direct radial quadrature of the rescaled bubble
    auto integral_of_power = [&](double lam, double power) {
        BubbleParams prm{lam, Point{0.0}};
        auto f = [&](double r) {
            return std::pow(bubble_value(kDims, prm, Point{r}), power);
        };
        return 2.0 * num::integrate_to_infinity(f, 0.0, 1e-13);
    };
    const double ref0 = integral_of_power(1.0, kDims.p + 1.0);
    for (double lam : {0.5, 2.0}) {
        CHECK(integral_of_power(lam, kDims.p + 1.0) ==
              doctest::Approx(ref0).epsilon(1e-10));
        CHECK(integral_of_power(lam, kDims.p) ==
              doctest::Approx(std::pow(lam, 0.5 * kDims.nu()) * kDims.c1)
                  .epsilon(1e-10));
    }
}

TEST_CASE("tail identity a = c1 * c_ns") {
    CHECK(kDims.c1 * kDims.c_ns == doctest::Approx(kDims.a_ns).epsilon(1e-9));
}

TEST_CASE("amplitude reduces to the classical value at s=1") {
    const FracDims d3 = compute_constants(3, 1.0);
    CHECK(d3.a_ns == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-13));
}

TEST_CASE("Sobolev constant: gamma formula agrees with c0^(-s/N)") {
    CHECK(kDims.sobolev_gamma_formula ==
          doctest::Approx(kDims.sobolev_derived).epsilon(1e-9));
    CHECK_FALSE(kDims.sobolev_flagged);
}

TEST_CASE("nonlinearity is odd and reduces to the pure power at eps=0") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int t = 0; t < 50; ++t) {
        const double v = U(rng);
        CHECK(f_eps(kDims, 0.03, -v) ==
              doctest::Approx(-f_eps(kDims, 0.03, v)).epsilon(1e-14));
    }
    BubbleParams prm{1.0, Point{0.0}};
    for (double x : {0.0, 0.7, 2.2}) {
        const double w = bubble_value(kDims, prm, Point{x});
        CHECK(f_eps(kDims, 0.0, w) ==
              doctest::Approx(std::pow(w, kDims.p)).epsilon(1e-13));
    }
}

TEST_CASE("nonlinearity derivative matches finite differences") {
    const double t0 = 1.7, eps = 0.01, h = 1e-6;
    const double fd =
        (f_eps(kDims, eps, t0 + h) - f_eps(kDims, eps, t0 - h)) / (2.0 * h);
    CHECK(std::fabs(f_eps_prime(kDims, eps, t0) - fd) < 1e-6);
    CHECK(f_eps_prime(kDims, eps, 0.0) == 0.0);
}

TEST_CASE("invalid dimensions are rejected") {
    CHECK_THROWS_AS(compute_constants(1, 0.6), ConfigError);
    CHECK_THROWS_AS(compute_constants(1, -0.1), ConfigError);
    CHECK_THROWS_AS(compute_constants(1, 1.2), ConfigError);
}

TEST_CASE("quadrature constants stable under node doubling") {
    // recompute c0 with a coarser tolerance and compare: adaptive refinement
    // must have converged well past 1e-10
    const double area = surface_area(1);
    auto f = [&](double r) {
        return std::pow(kDims.a_ns * unit_profile(kDims, r), kDims.p + 1.0);
    };
    const double c0a = area * num::integrate_to_infinity(f, 0.0, 1e-10);
    const double c0b = area * num::integrate_to_infinity(f, 0.0, 1e-13);
    CHECK(std::fabs(c0a - c0b) < 1e-10 * std::fabs(c0b));
}
