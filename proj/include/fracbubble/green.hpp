#ifndef FRACBUBBLE_GREEN_HPP
#define FRACBUBBLE_GREEN_HPP

#include <Eigen/Dense>
#include <vector>

#include "fracbubble/spectral.hpp"

namespace fracbubble {

struct GreenOptions {
    int modes_per_axis = 0;       // 0: pick by dimension (64 in 1d, 32 in 2d)
    double tail_threshold = 38.0; // exponential screening cutoff
    double guard_factor = 0.02;   // boundary guard distance / min side
    double grad_step_factor = 1e-4;
};

// Green's function of the spectral fractional Dirichlet Laplacian on a box,
// its free-space kernel, the regular part H and the Robin function.
//
// The eigen-series sum_k phi_k(x) phi_k(y) / lambda_k^s is split through the
// heat kernel: lambda^-s = (1/Gamma(s)) int_0^inf t^(s-1) e^(-lambda t) dt,
// cut at t = eta.  The long-time part keeps the eigen-series with screened
// weights lambda^-s Q(s, lambda eta) (superexponentially convergent); the
// short-time part becomes reflected free-space Gaussian tails, i.e. a small
// image sum of incomplete-gamma kernels.  Both sides converge to machine
// precision, and the identity image reproduces the free kernel exactly, which
// makes H = free kernel - G smooth through the diagonal.
class GreenEvaluator {
  public:
    GreenEvaluator(const FracDims& dims, BoxDomain domain,
                   GreenOptions opts = {});

    const FracDims& dims() const { return dims_; }
    const BoxDomain& domain() const { return domain_; }
    double guard_distance() const { return guard_; }
    int modes_per_axis() const { return modes_per_axis_; }

    double green(const Point& x, const Point& y) const;
    double free_kernel(const Point& x, const Point& y) const;
    double regular_part(const Point& x, const Point& y) const;
    double robin(const Point& x) const;

    // true if the point is within the boundary guard band where the series
    // accuracy is not certified
    bool guard_warning(const Point& x) const;

    // two-bubble location functional and its finite-difference gradient
    double varphi(const Point& s1, const Point& s2) const;
    Eigen::VectorXd grad_varphi(const Point& s1, const Point& s2) const;

    // screened mode weights (serialized as the kernel-coefficient cache)
    const std::vector<double>& mode_weights() const { return weights_; }
    std::string cache_key() const;

  private:
    double fourier_part(const Point& x, const Point& y) const;
    double image_part(const Point& x, const Point& y,
                      bool skip_principal) const;
    double image_kernel(double d2) const;      // screened free-space tail
    double principal_smooth(double d2) const;  // K - principal image, smooth

    void check_interior(const Point& x, const char* who) const;

    FracDims dims_;
    BoxDomain domain_;
    double eta_;
    double tail_;
    double guard_;
    double grad_step_;
    int modes_per_axis_;
    int n_images_;                 // lattice radius per axis
    std::vector<double> weights_;  // lambda_k^-s Q(s, lambda_k eta), lex order
};

}  // namespace fracbubble

#endif
