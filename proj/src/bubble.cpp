#include "fracbubble/bubble.hpp"

#include <cmath>

namespace fracbubble {

using num::gamma_fn;

double dist2(const Point& a, const Point& b) {
    double d = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        const double t = a.x[i] - b.x[i];
        d += t * t;
    }
    return d;
}

double surface_area(int N) {
    return 2.0 * std::pow(M_PI, 0.5 * N) / gamma_fn(0.5 * N);
}

double unit_profile(const FracDims& dims, double r) {
    return std::pow(1.0 / (1.0 + r * r), 0.5 * dims.nu());
}

namespace {

void validate(int N, double s) {
    if (N < 1 || N > kMaxDim) throw ConfigError("dims: N out of range");
    if (!(s > 0.0) || !(s > 0.0 && s <= 1.0))
        throw ConfigError("dims: s must lie in (0, 1]");
    if (!(N > 2.0 * s)) throw ConfigError("dims: N > 2s violated");
}

// Radial integral of g(r) r^(N-1) over (0, inf), mapped to (0,1).
double radial_integral(int N, const std::function<double(double)>& g,
                       double rel_tol = 1e-12) {
    auto f = [&](double t) {
        const double om = 1.0 - t;
        const double r = t / om;
        return g(r) * std::pow(r, N - 1) / (om * om);
    };
    return num::adaptive_integrate(f, 0.0, 1.0 - 1e-13, rel_tol);
}

}  // namespace

FracDims compute_constants(int N, double s) {
    validate(N, s);
    FracDims d;
    d.N = N;
    d.s = s;
    const double nu = N - 2.0 * s;
    d.p = (N + 2.0 * s) / nu;
    d.alpha0 = 1.0 / nu;
    // amplitude making the whole-space equation balance (verified
    // independently by the principal-value oracle)
    d.a_ns = std::pow(2.0, 0.5 * nu) *
             std::pow(gamma_fn(0.5 * (N + 2.0 * s)) / gamma_fn(0.5 * nu),
                      nu / (4.0 * s));
    d.c_ns = std::pow(2.0, 1.0 - 2.0 * s) * gamma_fn(0.5 * nu) /
             (2.0 * std::pow(M_PI, 0.5 * N) * gamma_fn(s));

    const double area = surface_area(N);
    auto w = [&](double r) { return d.a_ns * unit_profile(d, r); };
    d.c0 = area * radial_integral(N, [&](double r) {
        return std::pow(w(r), d.p + 1.0);
    });
    d.c1 = area * radial_integral(N, [&](double r) {
        return std::pow(w(r), d.p);
    });
    d.c_log = area * radial_integral(
                  N,
                  [&](double r) {
                      const double v = w(r);
                      return std::pow(v, d.p + 1.0) * std::log(v);
                  },
                  1e-11);

    d.sobolev_gamma_formula =
        std::pow(2.0, -s) * std::pow(M_PI, -0.5 * s) *
        std::sqrt(gamma_fn(0.5 * nu) / gamma_fn(0.5 * (N + 2.0 * s))) *
        std::pow(gamma_fn(static_cast<double>(N)) / gamma_fn(0.5 * N),
                 s / static_cast<double>(N));
    d.sobolev_derived = std::pow(d.c0, -s / static_cast<double>(N));
    d.sobolev_flagged =
        std::fabs(d.sobolev_gamma_formula - d.sobolev_derived) >
        1e-6 * std::fabs(d.sobolev_derived);
    return d;
}

double bubble_value(const FracDims& dims, const BubbleParams& params,
                    const Point& x) {
    if (!(params.lambda > 0.0)) throw ConfigError("bubble: lambda <= 0");
    const double l = params.lambda;
    const double r2 = dist2(x, params.xi);
    return dims.a_ns * std::pow(l / (l * l + r2), 0.5 * dims.nu());
}

BubbleGradient bubble_gradients(const FracDims& dims,
                                const BubbleParams& params, const Point& x) {
    if (!(params.lambda > 0.0)) throw ConfigError("bubble: lambda <= 0");
    const double nu = dims.nu();
    const double l = params.lambda;
    const double r2 = dist2(x, params.xi);
    const double denom = l * l + r2;
    BubbleGradient g;
    g.psi0 = dims.a_ns * 0.5 * nu * std::pow(l, 0.5 * (nu - 2.0)) *
             (r2 - l * l) / std::pow(denom, 0.5 * (nu + 2.0));
    // center derivative: +nu (x_j - xi_j); the x-derivative carries the
    // opposite sign
    const double common =
        dims.a_ns * nu * std::pow(l, 0.5 * nu) / std::pow(denom, 0.5 * (nu + 2.0));
    for (int j = 0; j < x.dim; ++j)
        g.psi[j] = common * (x.x[j] - params.xi.x[j]);
    return g;
}

double f_eps(const FracDims& dims, double eps, double t) {
    if (!(eps >= 0.0) || eps >= dims.p - 1.0)
        throw ConfigError("f_eps: eps out of [0, p-1)");
    if (t == 0.0) return 0.0;
    return std::pow(std::fabs(t), dims.p - 1.0 - eps) * t;
}

double f_eps_prime(const FracDims& dims, double eps, double t) {
    if (!(eps >= 0.0) || eps >= dims.p - 1.0)
        throw ConfigError("f_eps_prime: eps out of [0, p-1)");
    if (t == 0.0) return 0.0;
    return (dims.p - eps) * std::pow(std::fabs(t), dims.p - 1.0 - eps);
}

double f_eps_primitive(const FracDims& dims, double eps, double t) {
    const double q = dims.p + 1.0 - eps;
    if (t == 0.0) return 0.0;
    return std::pow(std::fabs(t), q) / q;
}

double c0_closed_form(const FracDims& dims) {
    const int N = dims.N;
    return std::pow(dims.a_ns, dims.p + 1.0) * std::pow(M_PI, 0.5 * N) *
           gamma_fn(0.5 * N) / gamma_fn(static_cast<double>(N));
}

double c1_closed_form(const FracDims& dims) {
    const int N = dims.N;
    return std::pow(dims.a_ns, dims.p) * std::pow(M_PI, 0.5 * N) *
           gamma_fn(dims.s) / gamma_fn(0.5 * (N + 2.0 * dims.s));
}

}  // namespace fracbubble
