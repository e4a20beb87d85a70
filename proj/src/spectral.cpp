#include "fracbubble/spectral.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fracbubble {

double BoxDomain::min_length() const {
    double m = lengths.at(0);
    for (double l : lengths) m = std::min(m, l);
    return m;
}

bool BoxDomain::contains(const Point& x) const {
    for (int i = 0; i < dim(); ++i)
        if (!(x[i] > 0.0 && x[i] < lengths[i])) return false;
    return true;
}

double BoxDomain::boundary_distance(const Point& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) {
        d = std::min(d, x[i]);
        d = std::min(d, lengths[i] - x[i]);
    }
    return d;
}

SpectralBasis::SpectralBasis(BoxDomain domain, int cutoff,
                             int points_per_halfwave)
    : domain_(std::move(domain)), cutoff_(cutoff), res_(points_per_halfwave) {
    const int N = domain_.dim();
    if (N < 1 || N > kMaxDim) throw ConfigError("basis: dimension out of range");
    for (double l : domain_.lengths)
        if (!(l > 0.0)) throw ConfigError("basis: nonpositive side length");
    if (cutoff_ < 1) throw ConfigError("basis: cutoff < 1");
    if (res_ < 4)
        throw ConfigError(
            "basis: grid must resolve the top mode (>= 4 points per half-wave)");

    num_modes_ = 1;
    for (int ax = 0; ax < N; ++ax) num_modes_ *= cutoff_;

    // composite Gauss-Legendre grid: `cutoff` panels per axis (one per
    // half-wave of the top mode), res_ points each
    const int gl_pts = res_;
    const auto& rule = num::gauss_rule(gl_pts);
    nodes_.resize(N);
    weights_.resize(N);
    sine_.resize(N);
    for (int ax = 0; ax < N; ++ax) {
        const double L = domain_.lengths[ax];
        const double h = L / cutoff_;
        for (int pnl = 0; pnl < cutoff_; ++pnl) {
            const double mid = (pnl + 0.5) * h;
            for (int q = 0; q < gl_pts; ++q) {
                nodes_[ax].push_back(mid + 0.5 * h * rule.nodes[q]);
                weights_[ax].push_back(0.5 * h * rule.weights[q]);
            }
        }
        const int G = static_cast<int>(nodes_[ax].size());
        sine_[ax].resize(cutoff_, G);
        const double norm = std::sqrt(2.0 / L);
        for (int k = 0; k < cutoff_; ++k)
            for (int g = 0; g < G; ++g)
                sine_[ax](k, g) =
                    norm * std::sin((k + 1) * M_PI * nodes_[ax][g] / L);
    }

    eigenvalues_.resize(num_modes_);
    for (int m = 0; m < num_modes_; ++m) {
        auto k = multi_index(m);
        double lam = 0.0;
        for (int ax = 0; ax < N; ++ax) {
            const double w = k[ax] * M_PI / domain_.lengths[ax];
            lam += w * w;
        }
        eigenvalues_[m] = lam;
    }
}

std::vector<int> SpectralBasis::multi_index(int m) const {
    const int N = dim();
    std::vector<int> k(N);
    for (int ax = N - 1; ax >= 0; --ax) {
        k[ax] = m % cutoff_ + 1;
        m /= cutoff_;
    }
    return k;
}

double SpectralBasis::eigenfunction(int m, const Point& x) const {
    auto k = multi_index(m);
    double v = 1.0;
    for (int ax = 0; ax < dim(); ++ax) {
        const double L = domain_.lengths[ax];
        v *= std::sqrt(2.0 / L) * std::sin(k[ax] * M_PI * x[ax] / L);
    }
    return v;
}

long SpectralBasis::total_grid_size() const {
    long g = 1;
    for (int ax = 0; ax < dim(); ++ax) g *= grid_size(ax);
    return g;
}

std::vector<double> SpectralBasis::sample(
    const std::function<double(const Point&)>& f) const {
    const int N = dim();
    std::vector<double> out(total_grid_size());
    if (N == 1) {
        for (int g = 0; g < grid_size(0); ++g) {
            Point p = Point::zero(1);
            p[0] = nodes_[0][g];
            out[g] = f(p);
        }
    } else if (N == 2) {
        const int G1 = grid_size(1);
        for (int g0 = 0; g0 < grid_size(0); ++g0)
            for (int g1 = 0; g1 < G1; ++g1) {
                Point p = Point::zero(2);
                p[0] = nodes_[0][g0];
                p[1] = nodes_[1][g1];
                out[g0 * G1 + g1] = f(p);
            }
    } else {
        throw ConfigError("sample: N=3 not implemented");
    }
    return out;
}

CoeffVector SpectralBasis::to_coeffs(
    const std::vector<double>& grid_function) const {
    if (static_cast<long>(grid_function.size()) != total_grid_size())
        throw ConfigError("to_coeffs: grid size mismatch");
    const int N = dim();
    CoeffVector v;
    if (N == 1) {
        const int G = grid_size(0);
        Eigen::VectorXd wf(G);
        for (int g = 0; g < G; ++g) wf[g] = weights_[0][g] * grid_function[g];
        v.a = sine_[0] * wf;
    } else if (N == 2) {
        const int G0 = grid_size(0), G1 = grid_size(1);
        Eigen::MatrixXd F(G0, G1);
        for (int g0 = 0; g0 < G0; ++g0)
            for (int g1 = 0; g1 < G1; ++g1)
                F(g0, g1) = weights_[0][g0] * weights_[1][g1] *
                            grid_function[g0 * G1 + g1];
        Eigen::MatrixXd A = sine_[0] * F * sine_[1].transpose();  // M x M
        v.a.resize(num_modes_);
        for (int k0 = 0; k0 < cutoff_; ++k0)
            for (int k1 = 0; k1 < cutoff_; ++k1)
                v.a[k0 * cutoff_ + k1] = A(k0, k1);
    } else {
        throw ConfigError("to_coeffs: N=3 transform not implemented");
    }
    return v;
}

std::vector<double> SpectralBasis::from_coeffs(const CoeffVector& v) const {
    if (v.a.size() != num_modes_) throw ConfigError("from_coeffs: size mismatch");
    const int N = dim();
    std::vector<double> out(total_grid_size());
    if (N == 1) {
        Eigen::VectorXd g = sine_[0].transpose() * v.a;
        for (long i = 0; i < g.size(); ++i) out[i] = g[i];
    } else if (N == 2) {
        Eigen::MatrixXd A(cutoff_, cutoff_);
        for (int k0 = 0; k0 < cutoff_; ++k0)
            for (int k1 = 0; k1 < cutoff_; ++k1)
                A(k0, k1) = v.a[k0 * cutoff_ + k1];
        Eigen::MatrixXd F = sine_[0].transpose() * A * sine_[1];
        const int G1 = grid_size(1);
        for (int g0 = 0; g0 < grid_size(0); ++g0)
            for (int g1 = 0; g1 < G1; ++g1) out[g0 * G1 + g1] = F(g0, g1);
    } else {
        throw ConfigError("from_coeffs: N=3 transform not implemented");
    }
    return out;
}

double SpectralBasis::grid_integral(
    const std::vector<double>& grid_function) const {
    if (static_cast<long>(grid_function.size()) != total_grid_size())
        throw ConfigError("grid_integral: grid size mismatch");
    const int N = dim();
    double sum = 0.0;
    if (N == 1) {
        for (int g = 0; g < grid_size(0); ++g)
            sum += weights_[0][g] * grid_function[g];
    } else if (N == 2) {
        const int G1 = grid_size(1);
        for (int g0 = 0; g0 < grid_size(0); ++g0)
            for (int g1 = 0; g1 < G1; ++g1)
                sum += weights_[0][g0] * weights_[1][g1] *
                       grid_function[g0 * G1 + g1];
    } else {
        throw ConfigError("grid_integral: N=3 not implemented");
    }
    return sum;
}

double SpectralBasis::evaluate(const CoeffVector& v, const Point& x) const {
    if (v.a.size() != num_modes_) throw ConfigError("evaluate: size mismatch");
    const int N = dim();
    if (N == 1) {
        const double L = domain_.lengths[0];
        const double norm = std::sqrt(2.0 / L);
        const double theta = M_PI * x[0] / L;
        const double c2 = 2.0 * std::cos(theta);
        double s_prev = 0.0;
        double s_cur = std::sin(theta);
        double acc = 0.0;
        for (int k = 0; k < cutoff_; ++k) {
            acc += v.a[k] * s_cur;
            const double s_next = c2 * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = s_next;
        }
        return norm * acc;
    }
    if (N == 2) {
        const double L0 = domain_.lengths[0], L1 = domain_.lengths[1];
        const double th0 = M_PI * x[0] / L0, th1 = M_PI * x[1] / L1;
        Eigen::VectorXd s0(cutoff_), s1(cutoff_);
        {
            const double c2 = 2.0 * std::cos(th0);
            double sp = 0.0, sc = std::sin(th0);
            for (int k = 0; k < cutoff_; ++k) {
                s0[k] = sc;
                const double sn = c2 * sc - sp;
                sp = sc;
                sc = sn;
            }
        }
        {
            const double c2 = 2.0 * std::cos(th1);
            double sp = 0.0, sc = std::sin(th1);
            for (int k = 0; k < cutoff_; ++k) {
                s1[k] = sc;
                const double sn = c2 * sc - sp;
                sp = sc;
                sc = sn;
            }
        }
        double acc = 0.0;
        for (int k0 = 0; k0 < cutoff_; ++k0) {
            double row = 0.0;
            for (int k1 = 0; k1 < cutoff_; ++k1)
                row += v.a[k0 * cutoff_ + k1] * s1[k1];
            acc += s0[k0] * row;
        }
        return std::sqrt(2.0 / L0) * std::sqrt(2.0 / L1) * acc;
    }
    throw ConfigError("evaluate: N=3 not implemented");
}

CoeffVector SpectralBasis::peaked_to_coeffs_1d(
    const std::function<double(double)>& f, double center, double scale) const {
    if (dim() != 1) throw ConfigError("peaked_to_coeffs_1d: 1-d only");
    const double L = domain_.lengths[0];
    auto edges = num::graded_peak_edges(0.0, L, center, scale);
    const double norm = std::sqrt(2.0 / L);
    CoeffVector v;
    v.a.resize(num_modes_);
    v.a.setZero();
    const auto& rule = num::gauss_rule(16);
    const double hw = L / cutoff_;  // top-mode half-wave
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e], b = edges[e + 1];
        const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / hw)));
        for (int sp = 0; sp < sub; ++sp) {
            const double aa = a + (b - a) * sp / sub;
            const double bb = a + (b - a) * (sp + 1) / sub;
            const double m2 = 0.5 * (aa + bb), h2 = 0.5 * (bb - aa);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double x = m2 + h2 * rule.nodes[q];
                const double wq = h2 * rule.weights[q] * f(x);
                if (wq == 0.0) continue;
                const double theta = M_PI * x / L;
                const double c2 = 2.0 * std::cos(theta);
                double sprev = 0.0, scur = std::sin(theta);
                for (int k = 0; k < cutoff_; ++k) {
                    v.a[k] += wq * scur;
                    const double snext = c2 * scur - sprev;
                    sprev = scur;
                    scur = snext;
                }
            }
        }
    }
    v.a *= norm;
    return v;
}

std::string SpectralBasis::cache_key() const {
    std::ostringstream os;
    os << "N=" << dim() << ";M=" << cutoff_ << ";res=" << res_ << ";L=";
    for (double l : domain_.lengths) os << num::fmt17(l) << ",";
    return os.str();
}

CoeffVector fractional_apply(const SpectralBasis& basis, const CoeffVector& v,
                             double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw ConfigError("fractional_apply: s out of (0,1]");
    CoeffVector out;
    out.a = v.a;
    for (int m = 0; m < basis.num_modes(); ++m)
        out.a[m] *= std::pow(basis.eigenvalue(m), s);
    return out;
}

CoeffVector fractional_solve(const SpectralBasis& basis, const CoeffVector& g,
                             double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw ConfigError("fractional_solve: s out of (0,1]");
    CoeffVector out;
    out.a = g.a;
    for (int m = 0; m < basis.num_modes(); ++m)
        out.a[m] /= std::pow(basis.eigenvalue(m), s);
    return out;
}

double hs_inner(const SpectralBasis& basis, const CoeffVector& u,
                const CoeffVector& v, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw ConfigError("hs_inner: s out of (0,1]");
    if (u.a.size() != v.a.size() || u.a.size() != basis.num_modes())
        throw ConfigError("hs_inner: size mismatch");
    double acc = 0.0;
    for (int m = 0; m < basis.num_modes(); ++m)
        acc += u.a[m] * v.a[m] * std::pow(basis.eigenvalue(m), s);
    return acc;
}

}  // namespace fracbubble
