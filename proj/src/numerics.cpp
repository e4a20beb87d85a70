#include "fracbubble/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>

namespace fracbubble {
namespace num {

// ----------------------------------------------------------------------------
// Gamma family
// ----------------------------------------------------------------------------

namespace {

// Lanczos g = 7, n = 9 coefficients (Godfrey tables).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_core(double x) {
    // x >= 0.5 assumed; returns Gamma(x).
    x -= 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i);
    const double t = x + kLanczosG + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw NumericError("gamma_fn: pole at non-positive integer");
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return M_PI / (std::sin(M_PI * x) * lanczos_core(1.0 - x));
    }
    return lanczos_core(x);
}

double log_gamma(double x) {
    if (x <= 0.0) throw NumericError("log_gamma: requires x > 0");
    if (x < 0.5) return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
    x -= 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i);
    const double t = x + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t +
           std::log(acc);
}

namespace {

// Lower incomplete gamma by series, x < a + 1.
double igamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) {
            return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
        }
    }
    throw NumericError("igamma_p: series did not converge");
}

// Upper incomplete gamma by Lentz continued fraction, x >= a + 1.
double igamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            return h * std::exp(-x + a * std::log(x) - log_gamma(a));
        }
    }
    throw NumericError("igamma_q: continued fraction did not converge");
}

}  // namespace

double igamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw NumericError("igamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return igamma_p_series(a, x);
    return 1.0 - igamma_q_cf(a, x);
}

double igamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw NumericError("igamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - igamma_p_series(a, x);
    return igamma_q_cf(a, x);
}

double gamma_upper(double a, double x) {
    if (x < 0.0) throw NumericError("gamma_upper: x < 0");
    if (x == 0.0) {
        if (a <= 0.0) throw NumericError("gamma_upper: diverges at x=0, a<=0");
        return gamma_fn(a);
    }
    if (a > 0.0) return igamma_q(a, x) * gamma_fn(a);
    // Upward recursion Gamma(a,x) = (Gamma(a+1,x) - x^a e^-x) / a, a in (-2,0].
    if (a > -1.0) {
        const double g1 = gamma_upper(a + 1.0, x);
        return (g1 - std::pow(x, a) * std::exp(-x)) / a;
    }
    if (a > -2.0) {
        const double g1 = gamma_upper(a + 1.0, x);
        return (g1 - std::pow(x, a) * std::exp(-x)) / a;
    }
    throw NumericError("gamma_upper: a <= -2 not supported");
}

// ----------------------------------------------------------------------------
// Gauss-Legendre
// ----------------------------------------------------------------------------

const GaussRule& gauss_rule(int n) {
    if (n < 1) throw NumericError("gauss_rule: n < 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    auto [pos, ok] = cache.emplace(n, std::move(rule));
    return pos->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n) {
    const GaussRule& r = gauss_rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += r.weights[i] * f(mid + half * r.nodes[i]);
    return sum * half;
}

double panel_integrate(const std::function<double(double)>& f,
                       const std::vector<double>& edges, int n) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        sum += gl_integrate(f, edges[i], edges[i + 1], n);
    return sum;
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double whole, double tol, int depth, int max_depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl_integrate(f, a, mid, 12);
    const double right = gl_integrate(f, mid, b, 12);
    const double diff = left + right - whole;
    if (std::fabs(diff) <= tol || depth >= max_depth) {
        // at max depth the interval is ~2^-60 of the original; remaining
        // error is dominated by endpoint-singularity truncation
        return left + right;
    }
    return adaptive_rec(f, a, mid, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_rec(f, mid, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth) {
    const double whole = gl_integrate(f, a, b, 12);
    const double scale = std::max(std::fabs(whole), 1e-30);
    return adaptive_rec(f, a, b, whole, rel_tol * scale, 0,
                        std::max(max_depth, 60));
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol) {
    // near field, then geometrically growing panels until contributions
    // stay negligible
    const double h0 = std::max(1.0, std::fabs(a));
    double total = adaptive_integrate(f, a, a + h0, rel_tol);
    double lo = a + h0;
    double width = h0;
    int calm = 0;
    for (int j = 0; j < 400; ++j) {
        width *= 2.0;
        const double hi = lo + width;
        const double c = adaptive_integrate(f, lo, hi, rel_tol);
        total += c;
        lo = hi;
        if (std::fabs(c) < rel_tol * std::fabs(total) + 1e-300) {
            if (++calm >= 3) return total;
        } else {
            calm = 0;
        }
    }
    throw NumericError("integrate_to_infinity: tail did not settle");
}

std::vector<double> graded_peak_edges(double lo, double hi, double center,
                                      double scale) {
    if (!(lo < hi)) throw NumericError("graded_peak_edges: empty interval");
    std::vector<double> offs;  // positive offsets from center
    offs.push_back(0.0);
    const double span = std::max(center - lo, hi - center);
    double r = scale;
    // core at the peak scale, then geometric growth
    offs.push_back(0.25 * r);
    offs.push_back(0.5 * r);
    while (r < span) {
        offs.push_back(r);
        r *= 4.0;
    }
    std::vector<double> edges;
    for (double o : offs) {
        const double xl = center - o;
        const double xr = center + o;
        if (xl > lo) edges.push_back(xl);
        if (xr < hi) edges.push_back(xr);
    }
    edges.push_back(lo);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double p, double q) {
                                return std::fabs(p - q) < 1e-300;
                            }),
                edges.end());
    return edges;
}

// ----------------------------------------------------------------------------
// Chebyshev interpolation
// ----------------------------------------------------------------------------

ChebInterp ChebInterp::build(const std::function<double(double)>& f, double a,
                             double b, int n) {
    ChebInterp c;
    c.a = a;
    c.b = b;
    c.coef.resize(n);
    std::vector<double> fv(n);
    for (int j = 0; j < n; ++j) {
        const double t = std::cos(M_PI * (j + 0.5) / n);
        fv[j] = f(0.5 * (b - a) * t + 0.5 * (b + a));
    }
    for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
            sum += fv[j] * std::cos(M_PI * k * (j + 0.5) / n);
        c.coef[k] = 2.0 * sum / n;
    }
    return c;
}

double ChebInterp::eval(double x) const {
    const double t = (2.0 * x - a - b) / (b - a);
    double d = 0.0, dd = 0.0;
    for (int k = static_cast<int>(coef.size()) - 1; k >= 1; --k) {
        const double sv = d;
        d = 2.0 * t * d - dd + coef[k];
        dd = sv;
    }
    return t * d - dd + 0.5 * coef[0];
}

ChebInterp ChebInterp::derivative() const {
    const int n = static_cast<int>(coef.size());
    ChebInterp d;
    d.a = a;
    d.b = b;
    d.coef.assign(n, 0.0);
    if (n >= 2) {
        d.coef[n - 2] = 2.0 * (n - 1) * coef[n - 1];
        for (int k = n - 3; k >= 0; --k)
            d.coef[k] = d.coef[k + 2] + 2.0 * (k + 1) * coef[k + 1];
        const double scale = 2.0 / (b - a);
        for (double& v : d.coef) v *= scale;
    }
    return d;
}

// ----------------------------------------------------------------------------
// Fits and hashing
// ----------------------------------------------------------------------------

SlopeFit fit_log_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw NumericError("fit_log_slope: need >= 2 samples");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw NumericError("fit_log_slope: nonpositive sample");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double dn = static_cast<double>(n);
    const double det = dn * sxx - sx * sx;
    SlopeFit fit;
    fit.slope = (dn * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / dn;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.intercept + fit.slope * lx[i];
        fit.max_residual = std::max(fit.max_residual, std::fabs(ly[i] - pred));
    }
    return fit;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace num
}  // namespace fracbubble
