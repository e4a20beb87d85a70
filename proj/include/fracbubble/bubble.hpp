#ifndef FRACBUBBLE_BUBBLE_HPP
#define FRACBUBBLE_BUBBLE_HPP

#include <array>
#include <vector>

#include "fracbubble/numerics.hpp"

namespace fracbubble {

inline constexpr int kMaxDim = 3;

// A point in R^N, N <= kMaxDim.  Fixed-capacity to keep hot loops
// allocation-free.
struct Point {
    std::array<double, kMaxDim> x{};
    int dim = 1;

    Point() = default;
    Point(std::initializer_list<double> v) {
        dim = static_cast<int>(v.size());
        int i = 0;
        for (double c : v) x[i++] = c;
    }
    static Point zero(int n) {
        Point p;
        p.dim = n;
        return p;
    }
    double& operator[](int i) { return x[i]; }
    double operator[](int i) const { return x[i]; }
};

double dist2(const Point& a, const Point& b);

// Dimension/order bundle plus every (N, s)-dependent constant used downstream.
struct FracDims {
    int N = 1;
    double s = 0.5;
    double p = 0.0;       // critical exponent (N + 2s)/(N - 2s)
    double alpha0 = 0.0;  // 1/(N - 2s)
    double a_ns = 0.0;    // bubble amplitude
    double c_ns = 0.0;    // free-kernel (Riesz) constant
    double c0 = 0.0;      // integral of w^(p+1) over R^N
    double c1 = 0.0;      // integral of w^p
    double c_log = 0.0;   // integral of w^(p+1) log w
    double sobolev_gamma_formula = 0.0;  // best-constant via gamma functions
    double sobolev_derived = 0.0;        // c0^(-s/N)
    bool sobolev_flagged = false;        // true if the two disagree > 1e-6 rel

    double nu() const { return N - 2.0 * s; }  // decay exponent N - 2s
};

struct BubbleParams {
    double lambda = 1.0;
    Point xi;
};

// Builds all constants from (N, s).  Amplitude from the closed form; c0, c1,
// c_log by adaptive radial quadrature (rel tol 1e-12); Sobolev constant both
// from the gamma-function formula and as c0^(-s/N).
FracDims compute_constants(int N, double s);

// Extremal profile a_Ns (lambda / (lambda^2 + |x - xi|^2))^((N-2s)/2).
double bubble_value(const FracDims& dims, const BubbleParams& params,
                    const Point& x);

// (psi0, psi_1..psi_N): derivatives of the bubble in lambda and in the
// center coordinates.
struct BubbleGradient {
    double psi0 = 0.0;
    std::array<double, kMaxDim> psi{};
};
BubbleGradient bubble_gradients(const FracDims& dims,
                                const BubbleParams& params, const Point& x);

// Slightly subcritical nonlinearity |t|^(p-1-eps) t and its derivative.
double f_eps(const FracDims& dims, double eps, double t);
double f_eps_prime(const FracDims& dims, double eps, double t);

// Antiderivative F_eps(t) = |t|^(p+1-eps)/(p+1-eps).
double f_eps_primitive(const FracDims& dims, double eps, double t);

// Closed-form cross-checks (beta-integral identities); used by tests and the
// constants report.
double c0_closed_form(const FracDims& dims);
double c1_closed_form(const FracDims& dims);

// Unit-amplitude profile helpers (amplitude calibration works on these).
double unit_profile(const FracDims& dims, double r);   // (1/(1+r^2))^((N-2s)/2)
double surface_area(int N);                            // |S^{N-1}|

}  // namespace fracbubble

#endif
