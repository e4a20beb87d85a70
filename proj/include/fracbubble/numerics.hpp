#ifndef FRACBUBBLE_NUMERICS_HPP
#define FRACBUBBLE_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracbubble {

// Thrown when a quadrature or iteration fails to reach its tolerance.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on invalid configuration (bad dimensions, inadmissible points, ...).
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

namespace num {

// ----------------------------------------------------------------------------
// Gamma-family special functions
// ----------------------------------------------------------------------------

// Lanczos (g = 7, 9-term) evaluation, ~15 significant digits on (0, 30).
double gamma_fn(double x);
double log_gamma(double x);

// Regularized incomplete gammas, a > 0, x >= 0.
// P(a,x) + Q(a,x) = 1; P is the lower tail.
double igamma_p(double a, double x);
double igamma_q(double a, double x);

// Unnormalized upper incomplete gamma, valid for a > -2 (recursion below 0).
double gamma_upper(double a, double x);

// ----------------------------------------------------------------------------
// Gauss-Legendre quadrature
// ----------------------------------------------------------------------------

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

// Cached rule of size n (Newton iteration on the Legendre recurrence).
const GaussRule& gauss_rule(int n);

// Integral of f over [a, b] with a single n-point rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n = 16);

// Integral over a list of panel edges e_0 < e_1 < ... (n-point rule on each).
double panel_integrate(const std::function<double(double)>& f,
                       const std::vector<double>& edges, int n = 16);

// Adaptive bisection on [a, b] to a relative tolerance.
double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-12, int max_depth = 40);

// Semi-infinite integral of f over [a, inf) via r = a + t/(1-t).
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol = 1e-12);

// Panel edges geometrically graded from a peak: |x - center| in
// [inner, outer], panels on both sides plus a symmetric core.  Used to
// resolve bubble-scale structure inside an enclosing interval.
std::vector<double> graded_peak_edges(double lo, double hi, double center,
                                      double scale);

// ----------------------------------------------------------------------------
// Chebyshev interpolation (smooth kernels on an interval)
// ----------------------------------------------------------------------------

struct ChebInterp {
    double a = 0.0, b = 1.0;
    std::vector<double> coef;

    static ChebInterp build(const std::function<double(double)>& f, double a,
                            double b, int n = 32);
    double eval(double x) const;
    ChebInterp derivative() const;
};

// ----------------------------------------------------------------------------
// Fits and hashing
// ----------------------------------------------------------------------------

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // in log space
};

// Least-squares fit of log(y) against log(x); all y must be positive.
SlopeFit fit_log_slope(const std::vector<double>& x,
                       const std::vector<double>& y);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

// Fixed-format float for deterministic reports (17 significant digits).
std::string fmt17(double v);

}  // namespace num
}  // namespace fracbubble

#endif
