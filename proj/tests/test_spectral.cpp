#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracbubble/spectral.hpp"

using namespace fracbubble;

namespace {

SpectralBasis interval_basis(int M = 24) {
    return SpectralBasis(BoxDomain{{1.0}}, M);
}

CoeffVector random_coeffs(const SpectralBasis& b, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> G(0.0, 1.0);
    CoeffVector v;
    v.a.resize(b.num_modes());
    for (int i = 0; i < b.num_modes(); ++i) v.a[i] = G(rng);
    return v;
}

}  // namespace

TEST_CASE("interval eigenvalues are (k pi)^2") {
    auto b = interval_basis(8);
    CHECK(b.eigenvalue(0) == doctest::Approx(M_PI * M_PI).epsilon(1e-14));
    CHECK(b.eigenvalue(1) == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-14));
    CHECK(b.eigenvalue(2) == doctest::Approx(9.0 * M_PI * M_PI).epsilon(1e-14));
    // nondecreasing in 1d lexicographic order
    for (int m = 1; m < b.num_modes(); ++m)
        CHECK(b.eigenvalue(m) >= b.eigenvalue(m - 1));
}

TEST_CASE("square eigenvalue of mode (1,1) is 2 pi^2") {
    SpectralBasis b(BoxDomain{{1.0, 1.0}}, 6);
    CHECK(b.eigenvalue(0) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
    CHECK(b.num_modes() == 36);
    for (int m = 0; m < b.num_modes(); ++m) CHECK(b.eigenvalue(m) > 0.0);
}

TEST_CASE("grid orthonormality matrix is the identity to 1e-10") {
    auto b = interval_basis(16);
    for (int i = 0; i < b.num_modes(); ++i) {
        std::vector<double> fi(b.total_grid_size());
        for (int g = 0; g < b.grid_size(0); ++g) {
            Point p{b.axis_nodes(0)[g]};
            fi[g] = b.eigenfunction(i, p);
        }
        auto ci = b.to_coeffs(fi);
        for (int j = 0; j < b.num_modes(); ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            CHECK(std::fabs(ci.a[j] - target) < 1e-10);
        }
    }
}

TEST_CASE("orthonormality in 2d (spot check)") {
    SpectralBasis b(BoxDomain{{1.0, 1.3}}, 5);
    auto f = b.sample([&](const Point& p) { return b.eigenfunction(7, p); });
    auto c = b.to_coeffs(f);
    for (int j = 0; j < b.num_modes(); ++j) {
        const double target = (j == 7) ? 1.0 : 0.0;
        CHECK(std::fabs(c.a[j] - target) < 1e-10);
    }
}

TEST_CASE("round trip is the identity on band-limited functions") {
    auto b = interval_basis(24);
    auto v = random_coeffs(b, 5);
    auto grid = b.from_coeffs(v);
    auto back = b.to_coeffs(grid);
    CHECK((back.a - v.a).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Parseval holds to 1e-8 on random coefficients") {
    auto b = interval_basis(20);
    auto v = random_coeffs(b, 17);
    auto grid = b.from_coeffs(v);
    std::vector<double> sq(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) sq[i] = grid[i] * grid[i];
    const double l2 = b.grid_integral(sq);
    CHECK(l2 == doctest::Approx(v.a.squaredNorm()).epsilon(1e-8));
}

TEST_CASE("sine coefficients of x(1-x) match the analytic values") {
    auto b = interval_basis(32);
    auto f = b.sample([](const Point& p) { return p[0] * (1.0 - p[0]); });
    auto c = b.to_coeffs(f);
    for (int k = 1; k <= b.cutoff(); ++k) {
        const double exact =
            (k % 2 == 1) ? 4.0 * std::sqrt(2.0) / std::pow(k * M_PI, 3.0) : 0.0;
        CHECK(std::fabs(c.a[k - 1] - exact) < 1e-12);
    }
    // reconstruction error bounded by the analytic tail
    double tail2 = 0.0;
    for (int k = b.cutoff() + 1; k < 4000; k += 2)
        tail2 += 32.0 / std::pow(k * M_PI, 6.0);
    auto recon = b.from_coeffs(c);
    std::vector<double> diff2(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - recon[i];
        diff2[i] = d * d;
    }
    const double err2 = b.grid_integral(diff2);
    CHECK(err2 <= tail2 * 1.0001 + 1e-18);
}

TEST_CASE("fractional apply: multiplier semigroup and s=1 laplacian") {
    auto b = interval_basis(12);
    CoeffVector e3;
    e3.a = Eigen::VectorXd::Zero(b.num_modes());
    e3.a[3] = 1.0;
    auto lap = fractional_apply(b, e3, 1.0);
    CHECK(lap.a[3] == doctest::Approx(b.eigenvalue(3)).epsilon(1e-14));

    auto v = random_coeffs(b, 3);
    auto one_step = fractional_apply(b, v, 0.7);
    auto two_step = fractional_apply(b, fractional_apply(b, v, 0.3), 0.4);
    CHECK((one_step.a - two_step.a).cwiseAbs().maxCoeff() < 1e-12);

    // dense diagonal-power oracle
    auto w = fractional_apply(b, v, 0.4);
    for (int m = 0; m < b.num_modes(); ++m) {
        CHECK(w.a[m] ==
              doctest::Approx(std::pow(b.eigenvalue(m), 0.4) * v.a[m])
                  .epsilon(1e-13));
    }
}

TEST_CASE("fractional solve inverts apply and preserves positivity of a bump") {
    auto b = interval_basis(48);
    auto g = random_coeffs(b, 9);
    auto round = fractional_apply(b, fractional_solve(b, g, 0.4), 0.4);
    CHECK((round.a - g.a).cwiseAbs().maxCoeff() <
          1e-12 * g.a.cwiseAbs().maxCoeff());

    CoeffVector e1;
    e1.a = Eigen::VectorXd::Zero(b.num_modes());
    e1.a[0] = 1.0;
    auto sol = fractional_solve(b, e1, 0.4);
    CHECK(sol.a[0] ==
          doctest::Approx(std::pow(b.eigenvalue(0), -0.4)).epsilon(1e-14));

    // positive right-hand side (smooth bump) gives a positive solution
    auto bump = b.sample([](const Point& p) {
        const double t = (p[0] - 0.5) / 0.15;
        return std::exp(-t * t);
    });
    auto u = fractional_solve(b, b.to_coeffs(bump), 0.4);
    for (double x = 0.05; x < 1.0; x += 0.05)
        CHECK(b.evaluate(u, Point{x}) > 0.0);
}

TEST_CASE("hs inner product: diagonal values, symmetry, quadrature identity") {
    auto b = interval_basis(20);
    CoeffVector e1;
    e1.a = Eigen::VectorXd::Zero(b.num_modes());
    e1.a[0] = 1.0;
    CHECK(hs_inner(b, e1, e1, 0.4) ==
          doctest::Approx(std::pow(b.eigenvalue(0), 0.4)).epsilon(1e-14));

    auto u = random_coeffs(b, 21);
    auto v = random_coeffs(b, 22);
    CHECK(hs_inner(b, u, v, 0.4) ==
          doctest::Approx(hs_inner(b, v, u, 0.4)).epsilon(1e-14));
    CHECK(hs_inner(b, u, u, 0.4) > 0.0);

    // <u,u>_{H^s} equals the grid integral of u * (-Lap)^s u
    auto lap_u = fractional_apply(b, u, 0.4);
    auto ug = b.from_coeffs(u);
    auto lg = b.from_coeffs(lap_u);
    std::vector<double> prod(ug.size());
    for (std::size_t i = 0; i < ug.size(); ++i) prod[i] = ug[i] * lg[i];
    CHECK(b.grid_integral(prod) ==
          doctest::Approx(hs_inner(b, u, u, 0.4)).epsilon(1e-8));
}

TEST_CASE("peaked coefficient quadrature matches the grid transform at a resolvable scale") {
    auto b = interval_basis(32);
    const double mu = 0.05, sigma = 0.4;
    auto peak = [&](double x) {
        const double t = (x - sigma) / mu;
        return std::pow(1.0 + t * t, -1.5);
    };
    auto cg = b.to_coeffs(b.sample([&](const Point& p) { return peak(p[0]); }));
    auto cp = b.peaked_to_coeffs_1d(peak, sigma, mu);
    CHECK((cg.a - cp.a).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("configuration errors are rejected") {
    CHECK_THROWS_AS(SpectralBasis(BoxDomain{{1.0}}, 8, 2), ConfigError);
    CHECK_THROWS_AS(SpectralBasis(BoxDomain{{-1.0}}, 8), ConfigError);
    CHECK_THROWS_AS(SpectralBasis(BoxDomain{{1.0}}, 0), ConfigError);
    auto b = interval_basis(4);
    std::vector<double> wrong(3, 0.0);
    CHECK_THROWS_AS(b.to_coeffs(wrong), ConfigError);
}
