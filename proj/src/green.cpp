#include "fracbubble/green.hpp"

#include <cmath>
#include <sstream>

namespace fracbubble {

using num::gamma_fn;
using num::gamma_upper;
using num::igamma_q;

namespace {

// sum_k z^k / (a (a+1) ... (a+k)); P(a,z) = z^a e^-z sum / Gamma(a)
double pstar_sum(double a, double z) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int k = 0; k < 400; ++k) {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) return sum;
    }
    throw NumericError("pstar_sum: no convergence");
}

}  // namespace

GreenEvaluator::GreenEvaluator(const FracDims& dims, BoxDomain domain,
                               GreenOptions opts)
    : dims_(dims), domain_(std::move(domain)) {
    const int N = domain_.dim();
    if (N != dims_.N) throw ConfigError("green: dims/domain dimension mismatch");
    if (std::fabs(0.5 * N - dims_.s) < 1e-12)
        throw ConfigError("green: s = N/2 not supported");
    tail_ = opts.tail_threshold;
    guard_ = opts.guard_factor * domain_.min_length();
    grad_step_ = opts.grad_step_factor * domain_.min_length();
    modes_per_axis_ = opts.modes_per_axis > 0 ? opts.modes_per_axis
                                              : (N == 1 ? 64 : 32);

    // screening time: top retained mode sits at the threshold
    const double lam_top =
        N * std::pow(modes_per_axis_ * M_PI / domain_.min_length(), 2.0);
    eta_ = tail_ / lam_top;

    // image radius: screened tails vanish beyond d = 2 sqrt(tail * eta)
    const double d_max = 2.0 * std::sqrt(tail_ * eta_);
    n_images_ = 1 + static_cast<int>(std::ceil(d_max / (2.0 * domain_.min_length())));

    // screened eigen-series weights, lexicographic multi-index
    int total = 1;
    for (int ax = 0; ax < N; ++ax) total *= modes_per_axis_;
    weights_.resize(total);
    for (int m = 0; m < total; ++m) {
        int rem = m;
        double lam = 0.0;
        for (int ax = N - 1; ax >= 0; --ax) {
            const int k = rem % modes_per_axis_ + 1;
            rem /= modes_per_axis_;
            const double w = k * M_PI / domain_.lengths[ax];
            lam += w * w;
        }
        const double z = lam * eta_;
        weights_[m] =
            (z > 500.0) ? 0.0 : std::pow(lam, -dims_.s) * igamma_q(dims_.s, z);
    }
}

void GreenEvaluator::check_interior(const Point& x, const char* who) const {
    if (x.dim != domain_.dim())
        throw ConfigError(std::string(who) + ": point dimension mismatch");
    if (!domain_.contains(x))
        throw ConfigError(std::string(who) + ": point outside the open box");
}

double GreenEvaluator::image_kernel(double d2) const {
    const double z = d2 / (4.0 * eta_);
    if (z > tail_) return 0.0;
    const int N = dims_.N;
    const double a = 0.5 * N - dims_.s;
    return std::pow(4.0 * M_PI, -0.5 * N) * std::pow(0.25 * d2, dims_.s - 0.5 * N) *
           gamma_upper(a, z) / gamma_fn(dims_.s);
}

double GreenEvaluator::principal_smooth(double d2) const {
    // free kernel minus the principal screened image: c d^-nu P(nu/2, z)
    const double nu = dims_.nu();
    const double z = d2 / (4.0 * eta_);
    if (z > 45.0) return dims_.c_ns * std::pow(d2, -0.5 * nu);
    return dims_.c_ns * std::pow(4.0 * eta_, -0.5 * nu) * std::exp(-z) *
           pstar_sum(0.5 * nu, z) / gamma_fn(0.5 * nu);
}

double GreenEvaluator::fourier_part(const Point& x, const Point& y) const {
    const int N = dims_.N;
    const int M = modes_per_axis_;
    if (N == 1) {
        const double L = domain_.lengths[0];
        const double thx = M_PI * x[0] / L, thy = M_PI * y[0] / L;
        const double cx = 2.0 * std::cos(thx), cy = 2.0 * std::cos(thy);
        double sxp = 0.0, sx = std::sin(thx);
        double syp = 0.0, sy = std::sin(thy);
        double acc = 0.0;
        for (int k = 0; k < M; ++k) {
            acc += weights_[k] * sx * sy;
            const double nx = cx * sx - sxp;
            sxp = sx;
            sx = nx;
            const double ny = cy * sy - syp;
            syp = sy;
            sy = ny;
        }
        return acc * 2.0 / L;
    }
    // N == 2: per-axis sine vectors, then a weighted double sum
    const double L0 = domain_.lengths[0], L1 = domain_.lengths[1];
    std::vector<double> s0x(M), s0y(M), s1x(M), s1y(M);
    auto fill = [M](std::vector<double>& out, double theta) {
        const double c2 = 2.0 * std::cos(theta);
        double sp = 0.0, sc = std::sin(theta);
        for (int k = 0; k < M; ++k) {
            out[k] = sc;
            const double sn = c2 * sc - sp;
            sp = sc;
            sc = sn;
        }
    };
    fill(s0x, M_PI * x[0] / L0);
    fill(s0y, M_PI * y[0] / L0);
    fill(s1x, M_PI * x[1] / L1);
    fill(s1y, M_PI * y[1] / L1);
    double acc = 0.0;
    for (int k0 = 0; k0 < M; ++k0) {
        const double f0 = s0x[k0] * s0y[k0];
        if (f0 == 0.0) continue;
        double row = 0.0;
        const double* wrow = &weights_[static_cast<std::size_t>(k0) * M];
        for (int k1 = 0; k1 < M; ++k1) row += wrow[k1] * s1x[k1] * s1y[k1];
        acc += f0 * row;
    }
    return acc * 4.0 / (L0 * L1);
}

double GreenEvaluator::image_part(const Point& x, const Point& y,
                                  bool skip_principal) const {
    const int N = dims_.N;
    double acc = 0.0;
    const int R = n_images_;
    // reflections r in {+1,-1}^N, lattice shifts 2 n L per axis
    const int n_refl = 1 << N;
    for (int refl = 0; refl < n_refl; ++refl) {
        double sign = 1.0;
        for (int ax = 0; ax < N; ++ax)
            if (refl & (1 << ax)) sign = -sign;
        if (N == 1) {
            const double ybase = (refl & 1) ? -y[0] : y[0];
            for (int n = -R; n <= R; ++n) {
                if (skip_principal && refl == 0 && n == 0) continue;
                const double d = x[0] - (ybase + 2.0 * n * domain_.lengths[0]);
                acc += sign * image_kernel(d * d);
            }
        } else {
            const double y0 = (refl & 1) ? -y[0] : y[0];
            const double y1 = (refl & 2) ? -y[1] : y[1];
            for (int n0 = -R; n0 <= R; ++n0)
                for (int n1 = -R; n1 <= R; ++n1) {
                    if (skip_principal && refl == 0 && n0 == 0 && n1 == 0)
                        continue;
                    const double d0 =
                        x[0] - (y0 + 2.0 * n0 * domain_.lengths[0]);
                    const double d1 =
                        x[1] - (y1 + 2.0 * n1 * domain_.lengths[1]);
                    acc += sign * image_kernel(d0 * d0 + d1 * d1);
                }
        }
    }
    return acc;
}

double GreenEvaluator::green(const Point& x, const Point& y) const {
    check_interior(x, "green");
    check_interior(y, "green");
    if (dist2(x, y) < 1e-28)
        throw ConfigError("green: singular at coincident points");
    return fourier_part(x, y) + image_part(x, y, /*skip_principal=*/false);
}

double GreenEvaluator::free_kernel(const Point& x, const Point& y) const {
    if (!(dims_.nu() > 0.0))
        throw ConfigError("free_kernel: requires N > 2s");
    const double d2 = dist2(x, y);
    if (d2 < 1e-28) throw ConfigError("free_kernel: singular at x = y");
    return dims_.c_ns * std::pow(d2, -0.5 * dims_.nu());
}

double GreenEvaluator::regular_part(const Point& x, const Point& y) const {
    check_interior(x, "regular_part");
    check_interior(y, "regular_part");
    if (!(dims_.nu() > 0.0))
        throw ConfigError("regular_part: requires N > 2s");
    return principal_smooth(dist2(x, y)) -
           image_part(x, y, /*skip_principal=*/true) - fourier_part(x, y);
}

double GreenEvaluator::robin(const Point& x) const {
    return regular_part(x, x);
}

bool GreenEvaluator::guard_warning(const Point& x) const {
    return domain_.boundary_distance(x) < guard_;
}

double GreenEvaluator::varphi(const Point& s1, const Point& s2) const {
    check_interior(s1, "varphi");
    check_interior(s2, "varphi");
    if (dist2(s1, s2) < 1e-28)
        throw ConfigError("varphi: singular at coincident points");
    const double h1 = robin(s1);
    const double h2 = robin(s2);
    if (!(h1 > 0.0) || !(h2 > 0.0))
        throw NumericError("varphi: nonpositive Robin value (under-resolved)");
    return std::sqrt(h1) * std::sqrt(h2) + green(s1, s2);
}

Eigen::VectorXd GreenEvaluator::grad_varphi(const Point& s1,
                                            const Point& s2) const {
    const int N = dims_.N;
    Eigen::VectorXd g(2 * N);
    const double h = grad_step_;
    for (int i = 0; i < 2 * N; ++i) {
        Point a = s1, b = s2;
        Point a2 = s1, b2 = s2;
        if (i < N) {
            a[i] += h;
            a2[i] -= h;
        } else {
            b[i - N] += h;
            b2[i - N] -= h;
        }
        g[i] = (varphi(a, b) - varphi(a2, b2)) / (2.0 * h);
    }
    return g;
}

std::string GreenEvaluator::cache_key() const {
    std::ostringstream os;
    os << "N=" << dims_.N << ";s=" << num::fmt17(dims_.s)
       << ";M=" << modes_per_axis_ << ";L=";
    for (double l : domain_.lengths) os << num::fmt17(l) << ",";
    return os.str();
}

}  // namespace fracbubble
