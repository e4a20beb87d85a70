#include "fracbubble/energy.hpp"

#include <cmath>

namespace fracbubble {

void ReducedConfig::validate(const BoxDomain& domain) const {
    if (k < 1) throw ConfigError("config: k < 1");
    if (static_cast<int>(signs.size()) != k ||
        static_cast<int>(lambdas.size()) != k ||
        static_cast<int>(sigmas.size()) != k)
        throw ConfigError("config: k-sized fields inconsistent");
    if (!(eps > 0.0)) throw ConfigError("config: eps must be positive");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("config: eta outside (0,1)");
    for (int i = 0; i < k; ++i) {
        if (signs[i] != 1 && signs[i] != -1)
            throw ConfigError("config: signs must be +-1");
        if (!(lambdas[i] > eta && lambdas[i] < 1.0 / eta))
            throw ConfigError("config: lambda outside (eta, 1/eta)");
        if (!(domain.boundary_distance(sigmas[i]) > eta))
            throw ConfigError("config: center too close to the boundary");
        for (int j = i + 1; j < k; ++j)
            if (!(std::sqrt(dist2(sigmas[i], sigmas[j])) > eta))
                throw ConfigError("config: centers closer than eta");
    }
}

double upsilon_k(const GreenEvaluator& ev, const ReducedConfig& cfg) {
    cfg.validate(ev.domain());
    const FracDims& d = ev.dims();
    const double nu = d.nu();
    double quad = 0.0;
    double logprod = 0.0;
    for (int i = 0; i < cfg.k; ++i) {
        quad += std::pow(cfg.lambdas[i], nu) * ev.robin(cfg.sigmas[i]);
        logprod += std::log(cfg.lambdas[i]);
        for (int h = 0; h < cfg.k; ++h) {
            if (h == i) continue;
            quad -= cfg.signs[i] * cfg.signs[h] *
                    ev.green(cfg.sigmas[i], cfg.sigmas[h]) *
                    std::pow(cfg.lambdas[i] * cfg.lambdas[h], 0.5 * nu);
        }
    }
    return d.c1 * d.c1 * quad - d.c0 * nu / (d.p + 1.0) * logprod;
}

double upsilon_2(const GreenEvaluator& ev, double lam1, double lam2,
                 const Point& s1, const Point& s2) {
    const FracDims& d = ev.dims();
    const double nu = d.nu();
    const double quad = ev.robin(s1) * std::pow(lam1, nu) +
                        ev.robin(s2) * std::pow(lam2, nu) +
                        2.0 * ev.green(s1, s2) * std::pow(lam1 * lam2, 0.5 * nu);
    return d.c1 * d.c1 * quad -
           d.c0 * nu / (d.p + 1.0) * std::log(lam1 * lam2);
}

Eigen::VectorXd grad_upsilon(const GreenEvaluator& ev,
                             const ReducedConfig& cfg) {
    cfg.validate(ev.domain());
    const int N = ev.dims().N;
    const int n = cfg.k * (1 + N);
    Eigen::VectorXd g(n);
    const double h0 = 1e-4 * ev.domain().min_length();
    // layout: lambdas first, then center coordinates bubble-major
    for (int t = 0; t < n; ++t) {
        // scale derivatives need steps relative to the (possibly tiny) scale
        double h = t < cfg.k ? 1e-4 * cfg.lambdas[t] : h0;
        auto shifted = [&](double delta) {
            ReducedConfig c = cfg;
            if (t < cfg.k) {
                c.lambdas[t] += delta;
            } else {
                const int b = (t - cfg.k) / N;
                const int ax = (t - cfg.k) % N;
                c.sigmas[b][ax] += delta;
            }
            return c;
        };
        // shrink the step if it would leave the admissible set
        for (int tries = 0; tries < 8; ++tries) {
            try {
                shifted(h).validate(ev.domain());
                shifted(-h).validate(ev.domain());
                break;
            } catch (const ConfigError&) {
                h *= 0.25;
            }
        }
        g[t] = (upsilon_k(ev, shifted(h)) - upsilon_k(ev, shifted(-h))) /
               (2.0 * h);
    }
    return g;
}

double energy(const SpectralBasis& basis, const FracDims& dims, double eps,
              const CoeffVector& v) {
    if (!(eps >= 0.0)) throw ConfigError("energy: eps must be >= 0");
    const double kin = 0.5 * hs_inner(basis, v, v, dims.s);
    auto grid = basis.from_coeffs(v);
    std::vector<double> F(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        F[i] = f_eps_primitive(dims, eps, grid[i]);
    return kin - basis.grid_integral(F);
}

namespace {

std::vector<BubbleConfigEntry> entries_of(const ReducedConfig& cfg) {
    std::vector<BubbleConfigEntry> es;
    for (int i = 0; i < cfg.k; ++i)
        es.push_back({cfg.signs[i], cfg.lambdas[i], cfg.sigmas[i]});
    return es;
}

// int w_i^p P w_j over the box (frame-neutral in the dilated domain)
double gram_entry(const BubbleSum& sum, int i, int j) {
    const ProjectedBubble& wi = sum.bubble(i);
    const ProjectedBubble& wj = sum.bubble(j);
    if (i == j) {
        return wi.integrate_source_against(
            [&](double z, const Point& x) {
                return wi.profile_peak(z) - wi.deficiency(x);
            });
    }
    return wi.integrate_source_against(
        [&](double, const Point& x) { return wj.value(x); });
}

}  // namespace

InteractionIntegrals interaction_integrals(const GreenEvaluator& ev,
                                           const ReducedConfig& cfg, int i,
                                           int h) {
    cfg.validate(ev.domain());
    if (i < 0 || i >= cfg.k || h < 0 || h >= cfg.k || i == h)
        throw ConfigError("interaction_integrals: bad bubble indices");
    BubbleSum sum(ev, cfg.eps, entries_of(cfg), cfg.eta);
    InteractionIntegrals out;
    out.self_term = gram_entry(sum, i, i);
    // int w_h^p P w_i
    out.cross_term = gram_entry(sum, h, i);
    return out;
}

double ansatz_energy(const GreenEvaluator& ev, const ReducedConfig& cfg) {
    cfg.validate(ev.domain());
    const FracDims& d = ev.dims();
    BubbleSum sum(ev, cfg.eps, entries_of(cfg), cfg.eta);

    double kinetic = 0.0;
    for (int i = 0; i < cfg.k; ++i)
        for (int j = 0; j < cfg.k; ++j)
            kinetic += 0.5 * cfg.signs[i] * cfg.signs[j] * gram_entry(sum, i, j);

    // int |Sigma|^{p+1-eps} with the dilation prefactor eps^{-eps nu alpha0/2}
    const double expo = d.p + 1.0 - cfg.eps;
    double pot = 0.0;
    for (const auto& n : sum.quadrature_nodes()) {
        double v;
        if (n.peak >= 0) {
            double big, small;
            sum.split_node(n, big, small);
            v = big + small;
        } else {
            v = sum.value(n.x);
        }
        if (v != 0.0) pot += n.w * std::pow(std::fabs(v), expo);
    }
    const double prefactor =
        std::exp(-cfg.eps * 0.5 * d.nu() * d.alpha0 * std::log(cfg.eps));
    return kinetic - prefactor * pot / expo;
}

EnergyExpansionResult energy_expansion_report(
    const GreenEvaluator& ev, const ReducedConfig& cfg_template,
    const std::vector<double>& ladder) {
    if (ladder.size() < 4)
        throw ConfigError("energy_expansion_report: ladder needs >= 4 values");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] < ladder[i - 1]))
            throw ConfigError("energy_expansion_report: ladder must decrease");
    const FracDims& d = ev.dims();

    EnergyExpansionResult out;
    out.leading_constant = cfg_template.k * d.s * d.c0 / d.N;

    ReducedConfig cfg = cfg_template;
    cfg.eps = ladder.front();
    const double ups = upsilon_k(ev, cfg);

    std::vector<double> residuals;
    for (double eps : ladder) {
        cfg.eps = eps;
        const double e = ansatz_energy(ev, cfg);
        out.energies.push_back(e);
        const double predicted =
            out.leading_constant -
            eps * cfg.k * d.c0 / ((d.p + 1.0) * (d.p + 1.0)) +
            0.5 * eps * ups + eps * cfg.k / (d.p + 1.0) * d.c_log;
        residuals.push_back(std::max(std::fabs(e - predicted), 1e-18));
    }

    RateCase c;
    c.tag = "energy_expansion";
    c.eps = ladder;
    c.lhs = residuals;
    c.predicted = 1.05;
    c.rule = "slope_min";
    c.slope = num::fit_log_slope(ladder, residuals).slope;
    c.pass = c.slope >= 1.05;
    out.report.suite = "energy";
    out.report.cases.push_back(c);
    out.report.finalize();
    return out;
}

}  // namespace fracbubble
