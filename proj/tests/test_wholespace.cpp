#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracbubble/wholespace.hpp"

using namespace fracbubble;

namespace {

const FracDims kD = compute_constants(1, 0.4);
const PVQuadrature kQ;

// Fourier-side oracle for the line: (-Lap)^s u (x) with u_hat computed
// analytically for the Gaussian e^{-x^2}
double gaussian_fourier_oracle(double s, double x) {
    auto f = [&](double xi) {
        return std::pow(xi, 2.0 * s) * std::sqrt(M_PI) *
               std::exp(-0.25 * xi * xi) * std::cos(xi * x);
    };
    return num::adaptive_integrate(f, 0.0, 60.0, 1e-13) / M_PI;
}

}  // namespace

TEST_CASE("pv operator validates against the Fourier oracle on a Gaussian") {
    auto gauss = [](double t) { return std::exp(-t * t); };
    for (double x : {0.0, 1.0}) {
        const double pv = frac_lap_pv(kQ, gauss, x, kD);
        const double fo = gaussian_fourier_oracle(kD.s, x);
        CHECK(std::fabs(pv - fo) <= 1e-4 * std::fabs(fo));
    }
}

TEST_CASE("pv operator is linear and translation covariant") {
    auto u = [](double t) { return std::exp(-t * t); };
    auto v = [](double t) { return std::exp(-0.5 * (t - 0.3) * (t - 0.3)); };
    auto sum = [&](double t) { return u(t) + v(t); };
    const double x = 0.4;
    CHECK(frac_lap_pv(kQ, sum, x, kD) ==
          doctest::Approx(frac_lap_pv(kQ, u, x, kD) + frac_lap_pv(kQ, v, x, kD))
              .epsilon(1e-11));

    const double shift = 0.7;
    auto shifted = [&](double t) { return u(t - shift); };
    CHECK(frac_lap_pv(kQ, shifted, x + shift, kD) ==
          doctest::Approx(frac_lap_pv(kQ, u, x, kD)).epsilon(1e-9));
}

TEST_CASE("refinement changes the Gaussian value within 1e-4 relative") {
    auto gauss = [](double t) { return std::exp(-t * t); };
    const double base = frac_lap_pv(kQ, gauss, 0.0, kD);
    const double fine = frac_lap_pv(kQ.refined(), gauss, 0.0, kD);
    CHECK(std::fabs(fine - base) <= 1e-4 * std::fabs(base));
}

TEST_CASE("whole-space bubble equation holds at the spec points") {
    auto rep = verify_bubble(kQ, kD, {0.0, 0.5, 1.0, 2.0, 5.0});
    CHECK(rep.pass);
    CHECK(rep.max_rel <= 1e-3);
}

TEST_CASE("wrong amplitude breaks the balance (negative control)") {
    auto rep = verify_bubble(kQ, kD, {0.0, 0.5, 1.0, 2.0, 5.0}, 1.1);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_rel > 0.1);
}

TEST_CASE("bubble residual profile is invariant under rescaling") {
    const double a1 = calibrate_amplitude(kQ, kD, 1.0);
    const double a2 = calibrate_amplitude(kQ, kD, 2.0);
    CHECK(a1 == doctest::Approx(a2).epsilon(1e-8));
}

TEST_CASE("pv calibration matches the closed-form amplitude") {
    const double a = calibrate_amplitude(kQ, kD);
    CHECK(std::fabs(a - kD.a_ns) <= 1e-3 * kD.a_ns);
    // far tighter in practice
    CHECK(std::fabs(a - kD.a_ns) <= 1e-6 * kD.a_ns);
}

TEST_CASE("s = 1 classical amplitude at N = 3 via the local laplacian") {
    // -Lap (1+r^2)^(-1/2) at r=0 equals 3 in three dimensions; balancing
    // a (-Lap profile) against (a profile)^p gives a^4 = 3
    auto profile = [](double r) { return std::pow(1.0 + r * r, -0.5); };
    const double h = 1e-4;
    const double upp =
        (profile(2 * h) - 2.0 * profile(h) + profile(0.0)) / (h * h);
    const double lap0 = 3.0 * upp;  // radial at the origin: N u''(0)
    const double a = std::pow(-lap0 / std::pow(profile(0.0), 5.0), 0.25);
    CHECK(a == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-5));
    const FracDims d3 = compute_constants(3, 1.0);
    CHECK(d3.a_ns == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("nondegeneracy kernel: psi0 and psi1 solve the linearized equation") {
    for (int j : {0, 1}) {
        auto rep = verify_kernel(kQ, kD, {0.3, 1.0, 2.0}, j);
        CHECK(rep.pass);
        CHECK(rep.max_rel <= 1e-3);
    }
}

TEST_CASE("the bubble itself fails the linearized equation (negative control)") {
    auto rep = verify_kernel(kQ, kD, {0.3, 1.0, 2.0}, 0, true);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_rel > 0.5);
}

TEST_CASE("sobolev report: derived constant, gamma formula, sharpness witness") {
    auto rep = verify_sobolev(kD);
    CHECK(rep.s_derived ==
          doctest::Approx(std::pow(kD.c0, -kD.s / kD.N)).epsilon(1e-14));
    CHECK(rep.rel_gap < 1e-6);
    CHECK_FALSE(rep.flagged);
    CHECK(rep.bubble_quotient ==
          doctest::Approx(rep.bubble_quotient_lam2).epsilon(1e-9));
    // Gaussian quotient strictly below the sharp constant
    CHECK(rep.gaussian_quotient < rep.s_derived);
    CHECK(rep.gaussian_quotient > 0.0);
}

TEST_CASE("radial reduction in two dimensions matches the closed form at the origin") {
    const FracDims d2 = compute_constants(2, 0.6);
    auto gauss = [](double r) { return std::exp(-r * r); };
    const double v = frac_lap_radial(gauss, 0.0, d2);
    const double exact = std::pow(2.0, 2.0 * d2.s) * num::gamma_fn(d2.s + 1.0);
    CHECK(v == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("pv rejects unsupported configurations") {
    const FracDims d2 = compute_constants(2, 0.6);
    auto gauss = [](double t) { return std::exp(-t * t); };
    CHECK_THROWS_AS(frac_lap_pv(kQ, gauss, 0.0, d2), ConfigError);
    CHECK_THROWS_AS(frac_lap_radial(gauss, 0.0, kD), ConfigError);
}
