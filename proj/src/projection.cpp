#include "fracbubble/projection.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace fracbubble {

namespace {

// z-space profiles at unit scale, center 0
struct HatProfiles {
    FracDims dims;
    double w(double z) const {
        return bubble_value(dims, BubbleParams{1.0, Point{0.0}}, Point{z});
    }
    double psi(double z, int j) const {
        auto g = bubble_gradients(dims, BubbleParams{1.0, Point{0.0}}, Point{z});
        return j == 0 ? g.psi0 : g.psi[j - 1];
    }
};

// geometric |z| ladder from the core out to zmax
void push_side_edges(std::vector<double>& edges, double zmax) {
    double r = 0.125;
    edges.push_back(0.0);
    while (r < zmax) {
        edges.push_back(r);
        r *= 4.0;
    }
    edges.push_back(zmax);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

double f0_diff(const FracDims& dims, double big, double small) {
    if (big == 0.0) return f_eps(dims, 0.0, small);
    const double r = small / big;
    if (std::fabs(r) < 0.5) {
        const double mag = std::pow(std::fabs(big), dims.p);
        const double sign = big > 0.0 ? 1.0 : -1.0;
        return sign * mag * std::expm1(dims.p * std::log1p(r));
    }
    return f_eps(dims, 0.0, big + small) - f_eps(dims, 0.0, big);
}

double f0p_diff(const FracDims& dims, double big, double small) {
    if (big == 0.0) return f_eps_prime(dims, 0.0, small);
    const double r = small / big;
    if (std::fabs(r) < 0.5) {
        const double mag = dims.p * std::pow(std::fabs(big), dims.p - 1.0);
        return mag * std::expm1((dims.p - 1.0) * std::log1p(r));
    }
    return f_eps_prime(dims, 0.0, big + small) - f_eps_prime(dims, 0.0, big);
}

// ----------------------------------------------------------------------------
// ProjectedBubble
// ----------------------------------------------------------------------------

ProjectedBubble::ProjectedBubble(const GreenEvaluator& green, double eps,
                                 double lambda, Point sigma, int deriv,
                                 double eta)
    : green_(&green),
      eps_(eps),
      lambda_(lambda),
      eta_(eta),
      sigma_(sigma),
      deriv_(deriv) {
    const FracDims& d = green.dims();
    if (d.N != 1)
        throw ConfigError(
            "projection: quadratures are wired for interval domains");
    if (!(eps_ > 0.0)) throw ConfigError("projection: eps must be positive");
    if (!(lambda_ > 0.0)) throw ConfigError("projection: lambda must be positive");
    if (green.domain().boundary_distance(sigma_) <= eta_)
        throw ConfigError("projection: center too close to the boundary");
    mu_ = std::pow(eps_, d.alpha0) * lambda_;

    const double nu = d.nu();
    if (deriv_ < 0) {
        beta_ = 0.5 * nu;
        gamma_ = 0.5 * (d.N + 2.0 * d.s);
    } else {
        beta_ = 0.5 * (nu + 2.0);
        gamma_ = 0.5 * (d.N + 2.0 * d.s) + 1.0;
    }

    const double L = green.domain().lengths[0];
    const double z_left = sigma_[0] / mu_;
    const double z_right = (L - sigma_[0]) / mu_;
    HatProfiles hat{d};
    auto shat = [&](double z) {
        return deriv_ < 0 ? std::pow(hat.w(z), d.p)
                          : d.p * std::pow(hat.w(z), d.p - 1.0) *
                                hat.psi(z, deriv_);
    };
    const auto& rule = num::gauss_rule(10);
    auto add_panel = [&](std::vector<double>& zn, std::vector<double>& zw,
                         double lo, double hi) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t qq = 0; qq < rule.nodes.size(); ++qq) {
            const double z = mid + half * rule.nodes[qq];
            zn.push_back(z);
            zw.push_back(half * rule.weights[qq] * shat(z));
        }
    };
    for (int side = 0; side < 2; ++side) {
        const double zmax = side == 0 ? z_left : z_right;
        const double sgn = side == 0 ? -1.0 : 1.0;
        std::vector<double> edges;
        push_side_edges(edges, zmax);
        for (std::size_t e = 0; e + 1 < edges.size(); ++e)
            add_panel(z_nodes_, z_weights_,
                      std::min(sgn * edges[e], sgn * edges[e + 1]),
                      std::max(sgn * edges[e], sgn * edges[e + 1]));
    }
    // exterior nodes: |z| beyond the box, geometric until negligible
    auto add_out = [&](double sgn, double zb) {
        double lo = zb;
        for (int p = 0; p < 40; ++p) {
            const double hi = lo * 2.0;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (std::size_t qq = 0; qq < rule.nodes.size(); ++qq) {
                const double z = sgn * (mid + half * rule.nodes[qq]);
                zout_nodes_.push_back(z);
                zout_weights_.push_back(half * rule.weights[qq] * shat(z));
            }
            lo = hi;
            if (lo > zb * 1e8) break;
        }
    };
    add_out(-1.0, z_left);
    add_out(+1.0, z_right);

    const bool odd_source = deriv_ >= 1;
    if (odd_source) {
        // the symmetric core integrates to zero exactly; only the one-sided
        // band between the two boundary distances survives (this keeps the
        // mass free of cancellation noise at extreme concentration)
        const double zmin = std::min(z_left, z_right);
        const double zmax = std::max(z_left, z_right);
        std::vector<double> edges;
        double r = zmin;
        edges.push_back(zmin);
        while (r < zmax) {
            r *= 2.0;
            edges.push_back(std::min(r, zmax));
        }
        double band = 0.0;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e)
            band += num::gl_integrate([&](double z) { return shat(z); },
                                      edges[e], edges[e + 1], 10);
        mass_hat_in_ = (z_right > z_left) ? band : -band;
        mass_hat_out_ = -mass_hat_in_;  // total odd mass vanishes
    } else {
        mass_hat_in_ = 0.0;
        for (double w : z_weights_) mass_hat_in_ += w;
        mass_hat_out_ = 0.0;
        for (double w : zout_weights_) mass_hat_out_ += w;
        // pin the interior bubble mass to the exact tail identity
        // int_R shat = a / c_ns; keeps remainders conditioned at every scale
        if (deriv_ < 0) mass_hat_in_ = d.a_ns / d.c_ns - mass_hat_out_;
    }
}

double ProjectedBubble::profile(const Point& x) const {
    const FracDims& d = green_->dims();
    BubbleParams prm{mu_, sigma_};
    if (deriv_ < 0) return bubble_value(d, prm, x);
    auto g = bubble_gradients(d, prm, x);
    return deriv_ == 0 ? g.psi0 : g.psi[deriv_ - 1];
}

double ProjectedBubble::source(const Point& x) const {
    const FracDims& d = green_->dims();
    BubbleParams prm{mu_, sigma_};
    const double w = bubble_value(d, prm, x);
    if (deriv_ < 0) return std::pow(w, d.p);
    auto g = bubble_gradients(d, prm, x);
    const double psi = deriv_ == 0 ? g.psi0 : g.psi[deriv_ - 1];
    return d.p * std::pow(w, d.p - 1.0) * psi;
}

double ProjectedBubble::profile_hat(double z) const {
    HatProfiles hat{green_->dims()};
    return deriv_ < 0 ? hat.w(z) : hat.psi(z, deriv_);
}

double ProjectedBubble::source_hat(double z) const {
    const FracDims& d = green_->dims();
    HatProfiles hat{d};
    return deriv_ < 0 ? std::pow(hat.w(z), d.p)
                      : d.p * std::pow(hat.w(z), d.p - 1.0) *
                            hat.psi(z, deriv_);
}

double ProjectedBubble::interior_source_mass() const {
    return std::pow(mu_, 1.0 - gamma_) * mass_hat_in_;
}

double ProjectedBubble::exterior_source_mass() const {
    return std::pow(mu_, 1.0 - gamma_) * mass_hat_out_;
}

double ProjectedBubble::diff_integral(const Point& x) const {
    // int [H(x,y) - H(x,sigma)] src(y) dy, Chebyshev-accelerated on a window
    // around the center, direct evaluation outside, Taylor form for tiny
    // offsets (keeps relative precision at extreme concentration)
    const double L = green_->domain().lengths[0];
    const double r_w = 0.8 * std::min({eta_, sigma_[0], L - sigma_[0]});
    auto H_of_y = [&](double y) { return green_->regular_part(x, Point{y}); };
    num::ChebInterp cheb =
        num::ChebInterp::build(H_of_y, sigma_[0] - r_w, sigma_[0] + r_w, 32);
    num::ChebInterp cheb1 = cheb.derivative();
    num::ChebInterp cheb2 = cheb1.derivative();
    const double H0 = cheb.eval(sigma_[0]);
    const double H1 = cheb1.eval(sigma_[0]);
    const double H2 = cheb2.eval(sigma_[0]);
    const double H0_exact = green_->regular_part(x, sigma_);

    double acc = 0.0;
    for (std::size_t q = 0; q < z_nodes_.size(); ++q) {
        const double dy = mu_ * z_nodes_[q];
        const double y = sigma_[0] + dy;
        double hdiff;
        if (std::fabs(dy) < 1e-5 * r_w) {
            hdiff = H1 * dy + 0.5 * H2 * dy * dy;
        } else if (std::fabs(dy) < r_w) {
            hdiff = cheb.eval(y) - H0;
        } else {
            hdiff = green_->regular_part(x, Point{y}) - H0_exact;
        }
        acc += z_weights_[q] * hdiff;
    }
    return std::pow(mu_, 1.0 - gamma_) * acc;
}

double ProjectedBubble::exterior_integral(const Point& x) const {
    const FracDims& d = green_->dims();
    double acc = 0.0;
    for (std::size_t q = 0; q < zout_nodes_.size(); ++q) {
        const double y = sigma_[0] + mu_ * zout_nodes_[q];
        const double dist = std::fabs(x[0] - y);
        acc += zout_weights_[q] * std::pow(dist, -d.nu());
    }
    return std::pow(mu_, 1.0 - gamma_) * d.c_ns * acc;
}

double ProjectedBubble::deficiency(const Point& x) const {
    const double H0 = green_->regular_part(x, sigma_);
    return H0 * interior_source_mass() + diff_integral(x) +
           exterior_integral(x);
}

double ProjectedBubble::frame_scale() const {
    const FracDims& d = green_->dims();
    return std::pow(eps_, beta_ * d.alpha0);
}

double ProjectedBubble::profile_peak(double z) const {
    // w_mu(sigma + mu z) = mu^(-nu/2) what(z); psi analogues carry one more
    // inverse power of mu
    return std::pow(mu_, -beta_) * profile_hat(z);
}

double ProjectedBubble::eps_frame_value(const Point& y_dilated) const {
    const FracDims& d = green_->dims();
    Point x = y_dilated;
    const double shrink = std::pow(eps_, d.alpha0);
    for (int i = 0; i < x.dim; ++i) x[i] = y_dilated[i] * shrink;
    return frame_scale() * value(x);
}

double ProjectedBubble::near_remainder(const Point& x) const {
    if (deriv_ >= 0)
        throw ConfigError("near_remainder: defined for the bubble projection");
    const double H0 = green_->regular_part(x, sigma_);
    return diff_integral(x) + exterior_integral(x) -
           H0 * exterior_source_mass();
}

double ProjectedBubble::far_remainder(const Point& x) const {
    if (deriv_ >= 0)
        throw ConfigError("far_remainder: defined for the bubble projection");
    const FracDims& d = green_->dims();
    const double dist = std::fabs(x[0] - sigma_[0]);
    // w(x) - [total mass] K(x,sigma) via the exact tail identity a = c1 c_ns
    const double mism =
        d.a_ns * std::pow(mu_, 0.5 * d.nu()) * std::pow(dist, -d.nu()) *
        std::expm1(-0.5 * d.nu() * std::log1p(mu_ * mu_ / (dist * dist)));
    return mism - near_remainder(x);
}

double ProjectedBubble::integrate_source_against(
    const std::function<double(double, const Point&)>& g) const {
    double acc = 0.0;
    for (std::size_t q = 0; q < z_nodes_.size(); ++q) {
        const Point x{sigma_[0] + mu_ * z_nodes_[q]};
        acc += z_weights_[q] * g(z_nodes_[q], x);
    }
    return std::pow(mu_, 1.0 - gamma_) * acc;
}

CoeffVector ProjectedBubble::coefficients(const SpectralBasis& basis) const {
    auto src = [&](double y) { return source(Point{y}); };
    CoeffVector c = basis.peaked_to_coeffs_1d(src, sigma_[0], mu_);
    for (int m = 0; m < basis.num_modes(); ++m)
        c.a[m] /= std::pow(basis.eigenvalue(m), green_->dims().s);
    return c;
}

ProjectedBubble project_bubble(const GreenEvaluator& green, double eps,
                               double lambda, const Point& sigma, double eta) {
    return ProjectedBubble(green, eps, lambda, sigma, -1, eta);
}

ProjectedBubble project_psi(const GreenEvaluator& green, double eps,
                            double lambda, const Point& sigma, int j,
                            double eta) {
    if (j < 0 || j > green.dims().N)
        throw ConfigError("project_psi: derivative index out of range");
    return ProjectedBubble(green, eps, lambda, sigma, j, eta);
}

// ----------------------------------------------------------------------------
// BubbleSum
// ----------------------------------------------------------------------------

BubbleSum::BubbleSum(const GreenEvaluator& green, double eps,
                     std::vector<BubbleConfigEntry> entries, double eta)
    : green_(&green), eps_(eps), eta_(eta) {
    if (entries.empty()) throw ConfigError("bubble sum: no entries");
    for (auto& e : entries) {
        if (e.sign != 1 && e.sign != -1)
            throw ConfigError("bubble sum: signs must be +-1");
        if (!(e.lambda > eta && e.lambda < 1.0 / eta))
            throw ConfigError("bubble sum: lambda outside the admissible box");
        bubbles_.push_back(project_bubble(green, eps, e.lambda, e.sigma, eta));
        signs_.push_back(e.sign);
    }
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j)
            if (std::sqrt(dist2(entries[i].sigma, entries[j].sigma)) <= eta)
                throw ConfigError("bubble sum: centers closer than eta");
}

double BubbleSum::value(const Point& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < bubbles_.size(); ++i)
        v += signs_[i] * bubbles_[i].value(x);
    return v;
}

int BubbleSum::nearest_peak(const Point& x) const {
    int best = -1;
    double best_profile = 0.0;
    double rest = 0.0;
    for (std::size_t i = 0; i < bubbles_.size(); ++i) {
        const double p = std::fabs(bubbles_[i].profile(x));
        rest += p;
        if (p > best_profile) {
            best_profile = p;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) return -1;
    const double others = rest - best_profile;
    if (best_profile > 10.0 * (others + 1.0)) return best;
    return -1;
}

void BubbleSum::split(const Point& x, int peak, double& big,
                      double& small) const {
    big = signs_[peak] * bubbles_[peak].profile(x);
    small = -signs_[peak] * bubbles_[peak].deficiency(x);
    for (std::size_t h = 0; h < bubbles_.size(); ++h) {
        if (static_cast<int>(h) == peak) continue;
        small += signs_[h] * bubbles_[h].value(x);
    }
}

std::vector<BubbleSum::SumNode> BubbleSum::quadrature_nodes(
    double refine) const {
    const double L = green_->domain().lengths[0];
    const int gl_pts = static_cast<int>(8 * std::max(1.0, refine));
    const auto& rule = num::gauss_rule(gl_pts);
    std::vector<SumNode> nodes;

    // per-bubble clearance: nearest other center or boundary
    std::vector<double> reach(bubbles_.size());
    for (std::size_t i = 0; i < bubbles_.size(); ++i) {
        const double si = bubbles_[i].sigma()[0];
        double clear = std::min(si, L - si);
        for (std::size_t h = 0; h < bubbles_.size(); ++h)
            if (h != i)
                clear = std::min(
                    clear, std::fabs(si - bubbles_[h].sigma()[0]));
        reach[i] = 0.45 * clear;
    }

    // peak regions in the exact z-frame
    for (std::size_t i = 0; i < bubbles_.size(); ++i) {
        const double mu = bubbles_[i].mu();
        const double Zi = std::min(reach[i] / mu, 1e13);
        std::vector<double> ze{0.0};
        double r = 0.125;
        while (r < Zi) {
            ze.push_back(r);
            r *= 2.0;
        }
        ze.push_back(Zi);
        ze.erase(std::unique(ze.begin(), ze.end()), ze.end());
        const double si = bubbles_[i].sigma()[0];
        for (int side = -1; side <= 1; side += 2) {
            for (std::size_t e = 0; e + 1 < ze.size(); ++e) {
                const double mid = 0.5 * (ze[e] + ze[e + 1]);
                const double half = 0.5 * (ze[e + 1] - ze[e]);
                for (int g = 0; g < gl_pts; ++g) {
                    SumNode n;
                    n.z = side * (mid + half * rule.nodes[g]);
                    n.w = mu * half * rule.weights[g];
                    n.peak = static_cast<int>(i);
                    n.x = Point{si + mu * n.z};
                    nodes.push_back(n);
                }
            }
        }
    }

    // outer region in x, graded away from each peak's z-window
    std::vector<double> edges{0.0, L};
    for (std::size_t i = 0; i < bubbles_.size(); ++i) {
        const double mu = bubbles_[i].mu();
        const double o0 = mu * std::min(reach[i] / mu, 1e13);
        const double si = bubbles_[i].sigma()[0];
        for (double o = o0; o < L; o *= 4.0) {
            if (si - o > 0.0) edges.push_back(si - o);
            if (si + o < L) edges.push_back(si + o);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double mid = 0.5 * (edges[e] + edges[e + 1]);
        // skip panels inside any peak z-window
        bool inside = false;
        for (std::size_t i = 0; i < bubbles_.size(); ++i) {
            const double o0 =
                bubbles_[i].mu() *
                std::min(reach[i] / bubbles_[i].mu(), 1e13);
            if (std::fabs(mid - bubbles_[i].sigma()[0]) < 0.999 * o0)
                inside = true;
        }
        if (inside) continue;
        const double half = 0.5 * (edges[e + 1] - edges[e]);
        for (int g = 0; g < gl_pts; ++g) {
            SumNode n;
            n.x = Point{mid + half * rule.nodes[g]};
            n.w = half * rule.weights[g];
            n.peak = nearest_peak(n.x);
            if (n.peak >= 0)
                n.z = (n.x[0] - bubbles_[n.peak].sigma()[0]) /
                      bubbles_[n.peak].mu();
            nodes.push_back(n);
        }
    }
    return nodes;
}

void BubbleSum::split_node(const SumNode& n, double& big,
                           double& small) const {
    if (n.peak < 0) throw ConfigError("split_node: no dominant bubble");
    big = signs_[n.peak] * bubbles_[n.peak].profile_peak(n.z);
    small = -signs_[n.peak] * bubbles_[n.peak].deficiency(n.x);
    for (std::size_t h = 0; h < bubbles_.size(); ++h) {
        if (static_cast<int>(h) == n.peak) continue;
        small += signs_[h] * bubbles_[h].value(n.x);
    }
}

std::vector<double> BubbleSum::panel_edges(double refine) const {
    const double L = green_->domain().lengths[0];
    std::vector<double> edges{0.0, L};
    for (const auto& b : bubbles_) {
        auto e = num::graded_peak_edges(0.0, L, b.sigma()[0], b.mu());
        edges.insert(edges.end(), e.begin(), e.end());
    }
    if (refine > 1.0) {
        std::sort(edges.begin(), edges.end());
        std::vector<double> extra;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            extra.push_back(0.5 * (edges[i] + edges[i + 1]));
        edges.insert(edges.end(), extra.begin(), extra.end());
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

// ----------------------------------------------------------------------------
// Expansion-rate suites
// ----------------------------------------------------------------------------

namespace {

double lq_norm(const std::function<double(const Point&)>& f,
               const std::vector<double>& edges, double q, int gl_pts) {
    auto integrand = [&](double x) {
        return std::pow(std::fabs(f(Point{x})), q);
    };
    return std::pow(num::panel_integrate(integrand, edges, gl_pts), 1.0 / q);
}

RateCase fit_case(const std::string& tag, const std::vector<double>& eps,
                  const std::vector<double>& lhs, double predicted,
                  const std::string& rule) {
    RateCase c;
    c.tag = tag;
    c.eps = eps;
    c.lhs = lhs;
    c.predicted = predicted;
    c.rule = rule;
    auto fit = num::fit_log_slope(eps, lhs);
    c.slope = fit.slope;
    if (rule == "slope_min") {
        c.pass = c.slope >= predicted + 0.05;
    } else if (rule == "slope_band") {
        c.pass = std::fabs(c.slope - predicted) <= 0.15;
    } else if (rule == "slope_above_band") {
        c.pass = c.slope >= predicted - 0.15;
    } else {
        throw ConfigError("fit_case: unknown rule " + rule);
    }
    return c;
}

}  // namespace

RateReport expansion_report(const GreenEvaluator& green,
                            const std::vector<std::string>& suites,
                            const ExpansionConfig& cfg) {
    if (cfg.eps_ladder.size() < 4)
        throw ConfigError("expansion_report: ladder needs >= 4 values");
    for (std::size_t i = 1; i < cfg.eps_ladder.size(); ++i)
        if (!(cfg.eps_ladder[i] < cfg.eps_ladder[i - 1]))
            throw ConfigError("expansion_report: ladder must decrease");
    const FracDims& d = green.dims();
    const double L = green.domain().lengths[0];
    const Point sig1{cfg.sigma_rel * L};
    const Point sig2{cfg.sigma2_rel * L};
    const double nu = d.nu();
    const int gl_pts = static_cast<int>(8 * std::max(1.0, cfg.quad_refine));

    RateReport rep;
    rep.suite = "expansions";
    auto wants = [&](const std::string& s) {
        return std::find(suites.begin(), suites.end(), s) != suites.end();
    };

    if (wants("A1") || wants("A2")) {
        std::vector<double> lhs1, lhs2;
        for (double eps : cfg.eps_ladder) {
            auto pb = project_bubble(green, eps, cfg.lambda, sig1, cfg.eta);
            const double frame = std::pow(eps, 0.5 * nu * d.alpha0);
            double sup_near = 0.0, sup_far = 0.0;
            for (int g = 0; g <= cfg.sup_grid; ++g) {
                const double x = 0.02 * L + (0.96 * L) * g / cfg.sup_grid;
                sup_near = std::max(sup_near,
                                    std::fabs(pb.near_remainder(Point{x})));
                if (std::fabs(x - sig1[0]) >= cfg.far_window * L)
                    sup_far = std::max(sup_far,
                                       std::fabs(pb.far_remainder(Point{x})));
            }
            for (double z : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0,
                             20.0, -20.0}) {
                const Point x{sig1[0] + pb.mu() * z};
                sup_near =
                    std::max(sup_near, std::fabs(pb.near_remainder(x)));
            }
            lhs1.push_back(frame * sup_near);
            lhs2.push_back(frame * sup_far);
        }
        if (wants("A1"))
            rep.cases.push_back(fit_case("A1", cfg.eps_ladder, lhs1,
                                         nu * d.alpha0, "slope_min"));
        if (wants("A2"))
            rep.cases.push_back(fit_case("A2", cfg.eps_ladder, lhs2,
                                         nu * d.alpha0, "slope_min"));
    }

    if (wants("A4")) {
        for (int j : {1, 0}) {
            std::vector<double> lhs;
            for (double eps : cfg.eps_ladder) {
                auto ps = project_psi(green, eps, cfg.lambda, sig1, j, cfg.eta);
                BubbleSum anchor(green, eps, {{1, cfg.lambda, sig1}}, cfg.eta);
                auto edges = anchor.panel_edges(cfg.quad_refine);
                auto diff = [&](const Point& x) { return ps.deficiency(x); };
                lhs.push_back(std::pow(eps, d.alpha0) *
                              lq_norm(diff, edges, d.p + 1.0, gl_pts));
            }
            const double pred =
                j == 0 ? 0.5 * nu * d.alpha0 : 0.5 * (nu + 2.0) * d.alpha0;
            rep.cases.push_back(fit_case(j == 0 ? "A4_scale" : "A4_translate",
                                         cfg.eps_ladder, lhs, pred,
                                         "slope_band"));
        }
    }

    if (wants("A5") || wants("A6") || wants("A7")) {
        const double q = 2.0 * d.N / (d.N + 2.0 * d.s);
        std::vector<double> lhs5, lhs6a, lhs6b, lhs7, ratio7;
        for (double eps : cfg.eps_ladder) {
            BubbleSum sum(green, eps,
                          {{1, cfg.lambda, sig1}, {-1, cfg.lambda2, sig2}},
                          cfg.eta);
            std::vector<std::unique_ptr<ProjectedBubble>> psis;
            if (wants("A6")) {
                psis.push_back(std::make_unique<ProjectedBubble>(
                    project_psi(green, eps, cfg.lambda, sig1, 1, cfg.eta)));
                psis.push_back(std::make_unique<ProjectedBubble>(
                    project_psi(green, eps, cfg.lambda, sig1, 0, cfg.eta)));
            }
            auto nodes = sum.quadrature_nodes(cfg.quad_refine);
            const double frame_log = 0.5 * nu * d.alpha0 * std::log(eps);

            // one sweep over the dual-frame nodes feeds every requested
            // integrand (the projection quadratures dominate the cost)
            double acc5 = 0.0, acc6a = 0.0, acc6b = 0.0, acc7 = 0.0;
            for (const auto& n : nodes) {
                const Point& x = n.x;
                const double wq = n.w;
                double big = 0.0, small = 0.0, v;
                if (n.peak >= 0) {
                    sum.split_node(n, big, small);
                    v = big + small;
                } else {
                    v = sum.value(x);
                }
                // other-bubble profiles at this node (peak bubble excluded)
                auto other_profile = [&](int h) {
                    return sum.bubble(h).profile(x);
                };
                if (wants("A5")) {
                    double F5;
                    if (n.peak >= 0) {
                        F5 = f0_diff(d, big, small);
                        for (int h = 0; h < sum.count(); ++h) {
                            if (h == n.peak) continue;
                            F5 -= sum.sign(h) * f_eps(d, 0.0, other_profile(h));
                        }
                    } else {
                        F5 = f_eps(d, 0.0, v);
                        for (int h = 0; h < sum.count(); ++h)
                            F5 -= sum.sign(h) * f_eps(d, 0.0, other_profile(h));
                    }
                    acc5 += wq * std::pow(std::fabs(F5), q);
                }
                if (wants("A6")) {
                    // comparison sum without signs: f0' is even, so near a
                    // peak the small difference pairs f0'(Sigma) with
                    // f0'(w_i) regardless of the bubble's sign
                    double core;
                    if (n.peak >= 0) {
                        core = f0p_diff(d, big, small);
                        for (int h = 0; h < sum.count(); ++h) {
                            if (h == n.peak) continue;
                            core -= f_eps_prime(d, 0.0, other_profile(h));
                        }
                    } else {
                        core = f_eps_prime(d, 0.0, v);
                        for (int h = 0; h < sum.count(); ++h)
                            core -= f_eps_prime(d, 0.0, other_profile(h));
                    }
                    for (int jj = 0; jj < 2; ++jj) {
                        double psv;
                        if (n.peak == 0) {
                            psv = psis[jj]->value_peak(n.z, x);
                        } else {
                            psv = psis[jj]->value(x);
                        }
                        const double term =
                            wq * std::pow(std::fabs(core * psv), q);
                        (jj == 0 ? acc6a : acc6b) += term;
                    }
                }
                if (wants("A7") && v != 0.0) {
                    const double f0v = f_eps(d, 0.0, v);
                    // |v_dilated|^-eps - 1, frame factor made explicit
                    const double corr = std::expm1(
                        -eps * (std::log(std::fabs(v)) + frame_log));
                    acc7 += wq * std::pow(std::fabs(f0v * corr), q);
                }
            }
            if (wants("A5")) lhs5.push_back(std::pow(acc5, 1.0 / q));
            if (wants("A6")) {
                lhs6a.push_back(std::pow(eps, d.alpha0) *
                                std::pow(acc6a, 1.0 / q));
                lhs6b.push_back(std::pow(eps, d.alpha0) *
                                std::pow(acc6b, 1.0 / q));
            }
            if (wants("A7")) {
                const double val = std::pow(acc7, 1.0 / q);
                lhs7.push_back(val);
                ratio7.push_back(val / (eps * std::fabs(std::log(eps))));
            }
        }
        if (wants("A5")) {
            const double pred = (d.N > 6.0 * d.s)
                                    ? 0.5 * (d.N + 2.0 * d.s) * d.alpha0
                                    : nu * d.alpha0;
            rep.cases.push_back(
                fit_case("A5", cfg.eps_ladder, lhs5, pred, "slope_band"));
        }
        if (wants("A6")) {
            // Attainable exponent, not the headline one.  The derivative
            // difference against the dominant bubble costs
            //   p <= 2:  (N+2s) alpha0 / 2
            //   p >  2:  alpha0 (1 + 1/q - (nu(p-2)+2)/2)   (mean-value route)
            // and with two bubbles the opposite bubble contributes an
            // uncanceled f0'(w_other) P psi term of order
            //   alpha0 (1 + 1/q + 2s - (nu+2)/2),
            // which is the binding rate in the high-dimension regime.
            const double inv_q = 0.5 * (d.N + 2.0 * d.s) / d.N;
            double core_term;
            if (d.N >= 6.0 * d.s) {
                core_term = 0.5 * (d.N + 2.0 * d.s) * d.alpha0;
            } else {
                core_term = d.alpha0 * (1.0 + inv_q -
                                        0.5 * (nu * (d.p - 2.0) + 2.0));
            }
            const double other_term =
                d.alpha0 * (1.0 + inv_q + 2.0 * d.s - 0.5 * (nu + 2.0));
            const double pred = std::min(core_term, other_term);
            rep.cases.push_back(fit_case("A6_translate", cfg.eps_ladder, lhs6a,
                                         pred, "slope_above_band"));
            rep.cases.push_back(fit_case("A6_scale", cfg.eps_ladder, lhs6b,
                                         pred, "slope_above_band"));
        }
        if (wants("A7")) {
            RateCase c;
            c.tag = "A7";
            c.eps = cfg.eps_ladder;
            c.lhs = lhs7;
            c.predicted = 1.0;
            c.rule = "ratio_bounded";
            c.slope = num::fit_log_slope(cfg.eps_ladder, lhs7).slope;
            c.extra = ratio7;
            const double rmax = *std::max_element(ratio7.begin(), ratio7.end());
            const double rmin = *std::min_element(ratio7.begin(), ratio7.end());
            c.pass = rmin > 0.0 && rmax / rmin <= 3.0;
            rep.cases.push_back(c);
        }
    }

    rep.finalize();
    return rep;
}

}  // namespace fracbubble
