#ifndef FRACBUBBLE_SPECTRAL_HPP
#define FRACBUBBLE_SPECTRAL_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "fracbubble/bubble.hpp"

namespace fracbubble {

// Axis-aligned box (0, L_1) x ... x (0, L_N).
struct BoxDomain {
    std::vector<double> lengths;

    int dim() const { return static_cast<int>(lengths.size()); }
    double min_length() const;
    bool contains(const Point& x) const;        // open box
    double boundary_distance(const Point& x) const;
};

// Coefficients of a truncated sine expansion, multi-index k in {1..M}^N in
// lexicographic order (k_1 slowest).
struct CoeffVector {
    Eigen::VectorXd a;
};

// Truncated Dirichlet eigenbasis of the Laplacian on a box, with a composite
// Gauss-Legendre tensor quadrature grid and per-axis sine tables.
class SpectralBasis {
  public:
    // points_per_halfwave: grid nodes per half-wave of the top mode
    // (composite panels, 8-point rule each by default).
    SpectralBasis(BoxDomain domain, int cutoff, int points_per_halfwave = 8);

    const BoxDomain& domain() const { return domain_; }
    int cutoff() const { return cutoff_; }
    int dim() const { return domain_.dim(); }
    int num_modes() const { return num_modes_; }
    int points_per_halfwave() const { return res_; }

    // eigenvalue of the lexicographic mode index m
    double eigenvalue(int m) const { return eigenvalues_[m]; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    // multi-index (1-based per axis) of lexicographic mode m
    std::vector<int> multi_index(int m) const;

    // eigenfunction value at an arbitrary point
    double eigenfunction(int m, const Point& x) const;

    // quadrature grid (tensor product); axis nodes/weights
    const std::vector<double>& axis_nodes(int axis) const {
        return nodes_[axis];
    }
    const std::vector<double>& axis_weights(int axis) const {
        return weights_[axis];
    }
    int grid_size(int axis) const { return static_cast<int>(nodes_[axis].size()); }
    long total_grid_size() const;

    // grid_function holds samples in lexicographic grid order (axis 0 slowest)
    CoeffVector to_coeffs(const std::vector<double>& grid_function) const;
    std::vector<double> from_coeffs(const CoeffVector& v) const;

    // sample a callable on the grid
    std::vector<double> sample(const std::function<double(const Point&)>& f) const;

    // quadrature of a grid function
    double grid_integral(const std::vector<double>& grid_function) const;

    // pointwise evaluation of a coefficient vector
    double evaluate(const CoeffVector& v, const Point& x) const;

    // coefficients of a sharply peaked function by graded panel quadrature
    // around the peak (resolves structure far below the grid scale).
    CoeffVector peaked_to_coeffs_1d(const std::function<double(double)>& f,
                                    double center, double scale) const;

    // metadata string used for disk-cache keys
    std::string cache_key() const;

  private:
    BoxDomain domain_;
    int cutoff_;
    int res_;
    int num_modes_;
    std::vector<double> eigenvalues_;
    std::vector<std::vector<double>> nodes_;    // per axis
    std::vector<std::vector<double>> weights_;  // per axis
    // sine_[axis](k, g) = sqrt(2/L) sin((k+1) pi x_g / L)
    std::vector<Eigen::MatrixXd> sine_;
};

// Coefficient-space fractional operators (diagonal multipliers).
CoeffVector fractional_apply(const SpectralBasis& basis, const CoeffVector& v,
                             double s);
CoeffVector fractional_solve(const SpectralBasis& basis, const CoeffVector& g,
                             double s);
double hs_inner(const SpectralBasis& basis, const CoeffVector& u,
                const CoeffVector& v, double s);

}  // namespace fracbubble

#endif
