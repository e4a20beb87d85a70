#ifndef FRACBUBBLE_PROJECTION_HPP
#define FRACBUBBLE_PROJECTION_HPP

#include <memory>
#include <string>
#include <vector>

#include "fracbubble/green.hpp"
#include "fracbubble/report.hpp"

namespace fracbubble {

// One bubble (or bubble derivative) transplanted to the box by the zero-
// boundary fractional solve, realized on the fixed domain.  Writing the
// solve through the Green kernel gives the exact identity
//
//   P f (x) = f(x) - int_Omega H(x,y) src(y) dy - int_ext K(x-y) src(y) dy
//
// where src is the defining right-hand side (w^p for the bubble,
// p w^(p-1) psi^j for the derivatives) and f solves the whole-space
// equation.  Every term is pointwise-evaluable at any concentration scale;
// the concentration-scale prefactors are carried analytically so that the
// small remainders stay well-conditioned on the whole parameter ladder.
class ProjectedBubble {
  public:
    // deriv = -1: the bubble itself; 0: scale derivative; 1..N: translations
    ProjectedBubble(const GreenEvaluator& green, double eps, double lambda,
                    Point sigma, int deriv, double eta);

    double eps() const { return eps_; }
    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    const Point& sigma() const { return sigma_; }
    int deriv() const { return deriv_; }

    // unprojected fixed-frame profile and its defining source
    double profile(const Point& x) const;
    double source(const Point& x) const;

    // scaled z-space profiles (x = sigma + mu z)
    double profile_hat(double z) const;
    double source_hat(double z) const;

    // profile - P(profile); smooth and small away from nothing (no peak)
    double deficiency(const Point& x) const;
    double value(const Point& x) const { return profile(x) - deficiency(x); }

    // dilated-frame view (the exact rescaling identity)
    double frame_scale() const;  // eps^(+beta alpha0 ...) factor
    double eps_frame_value(const Point& y_dilated) const;

    // profile at x = sigma + mu z from the exact z-parametrization (needed
    // when mu z falls below the floating-point spacing of sigma)
    double profile_peak(double z) const;
    // P(profile) at such a point: exact peak profile minus the smooth
    // deficiency at the rounded coordinate
    double value_peak(double z, const Point& x_rounded) const {
        return profile_peak(z) - deficiency(x_rounded);
    }

    // leading-order data
    double interior_source_mass() const;  // int_Omega src
    double exterior_source_mass() const;  // int_{R \ Omega} src

    // expansion remainders (bubble only):
    //  near: P w - w + [total mass] H(x, sigma)
    //  far:  P w - [total mass] G(x, sigma)
    double near_remainder(const Point& x) const;
    double far_remainder(const Point& x) const;

    // truncated-basis coefficient representation of the projection
    CoeffVector coefficients(const SpectralBasis& basis) const;

    // int_Omega src(y) g(z, y) dy with the source quadrature reused;
    // g receives the exact peak coordinate and the rounded point
    double integrate_source_against(
        const std::function<double(double, const Point&)>& g) const;

    const GreenEvaluator& green() const { return *green_; }

  private:
    double diff_integral(const Point& x) const;      // int [H(x,y)-H(x,sig)] src
    double exterior_integral(const Point& x) const;  // int_ext K(x-y) src

    const GreenEvaluator* green_;
    double eps_, lambda_, mu_, eta_;
    Point sigma_;
    int deriv_;
    double gamma_;        // source scale exponent: src(sig+mu z) = mu^-gamma shat(z)
    double beta_;         // profile scale exponent
    double mass_hat_in_;  // int shat over the box z-range
    double mass_hat_out_; // int shat outside
    std::vector<double> z_nodes_;    // quadrature in z, weights folded with shat
    std::vector<double> z_weights_;
    std::vector<double> zout_nodes_;
    std::vector<double> zout_weights_;
};

ProjectedBubble project_bubble(const GreenEvaluator& green, double eps,
                               double lambda, const Point& sigma, double eta);
ProjectedBubble project_psi(const GreenEvaluator& green, double eps,
                            double lambda, const Point& sigma, int j,
                            double eta);

// ----------------------------------------------------------------------------
// Sum ansatz and the expansion-rate suites
// ----------------------------------------------------------------------------

struct BubbleConfigEntry {
    int sign = 1;
    double lambda = 1.0;
    Point sigma;
};

// sum_i a_i P w_i with peak-aware decomposed evaluation
class BubbleSum {
  public:
    BubbleSum(const GreenEvaluator& green, double eps,
              std::vector<BubbleConfigEntry> entries, double eta);

    int count() const { return static_cast<int>(bubbles_.size()); }
    const ProjectedBubble& bubble(int i) const { return bubbles_[i]; }
    int sign(int i) const { return signs_[i]; }
    double eps() const { return eps_; }

    double value(const Point& x) const;
    // dominant bubble at x (largest |profile|), -1 if none dominates
    int nearest_peak(const Point& x) const;
    // value decomposition at x: big = a_i w_i for the dominant bubble,
    // small = everything else (other projections minus own deficiency)
    void split(const Point& x, int peak, double& big, double& small) const;

    // quadrature panels resolving every peak
    std::vector<double> panel_edges(double refine = 1.0) const;

    // dual-frame quadrature node: peak >= 0 marks a node generated in the
    // z-frame of that bubble (x is the rounded coordinate, z exact)
    struct SumNode {
        Point x;
        double w = 0.0;
        int peak = -1;
        double z = 0.0;
    };
    std::vector<SumNode> quadrature_nodes(double refine = 1.0) const;
    // decomposition with the dominant profile taken from the exact z-frame
    void split_node(const SumNode& n, double& big, double& small) const;

  private:
    const GreenEvaluator* green_;
    double eps_, eta_;
    std::vector<ProjectedBubble> bubbles_;
    std::vector<int> signs_;
};

struct ExpansionConfig {
    double lambda = 1.0;
    double lambda2 = 1.3;
    double sigma_rel = 0.4;   // first center, fraction of the box
    double sigma2_rel = 0.72; // second center (interaction suites)
    std::vector<double> eps_ladder = {1e-2, 3.1622776601683794e-3, 1e-3,
                                      3.1622776601683794e-4};
    double eta = 0.1;
    int sup_grid = 48;        // sampling for the sup-norm suites
    double quad_refine = 1.0; // >1: refine all panel quadratures
    double far_window = 0.25; // far-field window half-width exclusion
};

// suites: any of "A1", "A2", "A4", "A5", "A6", "A7"
RateReport expansion_report(const GreenEvaluator& green,
                            const std::vector<std::string>& suites,
                            const ExpansionConfig& cfg);

// stable difference f0(big + small) - f0(big) (expm1-based off the peak)
double f0_diff(const FracDims& dims, double big, double small);
// stable difference f0'(big + small) - f0'(big)
double f0p_diff(const FracDims& dims, double big, double small);

}  // namespace fracbubble

#endif
