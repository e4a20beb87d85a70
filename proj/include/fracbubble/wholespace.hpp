#ifndef FRACBUBBLE_WHOLESPACE_HPP
#define FRACBUBBLE_WHOLESPACE_HPP

#include <functional>
#include <vector>

#include "fracbubble/bubble.hpp"

namespace fracbubble {

// Whole-space principal-value quadrature.  Independent of the spectral
// machinery on purpose: agreement between this oracle and bubble_core
// constants is a genuine cross-check.
struct PVQuadrature {
    double r_inner = 1e-4;
    double r_outer = 1e4;
    int nodes_per_decade = 2000;

    PVQuadrature refined() const {
        PVQuadrature q = *this;
        q.r_inner *= 0.5;
        q.r_outer *= 2.0;
        q.nodes_per_decade *= 2;
        return q;
    }
};

// Symbol-matching normalization 4^s Gamma(N/2+s) / (pi^(N/2) |Gamma(-s)|).
double pv_normalization(const FracDims& dims);

// (-Lap)^s u at x for u on the line (N = 1).  Near field handled by a
// Taylor-corrected symmetric rule, far field by an analytic power-law tail.
double frac_lap_pv(const PVQuadrature& q,
                   const std::function<double(double)>& u, double x,
                   const FracDims& dims);

// Radial profiles in N >= 2, reduced to 1d Hankel integrals (Fourier side).
double frac_lap_radial(const std::function<double(double)>& profile,
                       double rho, const FracDims& dims);

struct ResidualSample {
    double x = 0.0;
    double lhs = 0.0;       // operator value
    double rhs = 0.0;       // expected right-hand side
    double rel_residual = 0.0;
};

struct ResidualReport {
    std::vector<ResidualSample> samples;
    double max_rel = 0.0;
    double threshold = 1e-3;
    bool pass = false;
};

// Residual of the whole-space bubble equation at the given points.
// amplitude_scale != 1 deliberately breaks the balance (negative control).
ResidualReport verify_bubble(const PVQuadrature& q, const FracDims& dims,
                             const std::vector<double>& points,
                             double amplitude_scale = 1.0);

// Amplitude making the equation balance at the origin, from the unit profile:
// a^(p-1) = (-Lap)^s profile (0) / profile(0)^p.  Lambda-independent.
double calibrate_amplitude(const PVQuadrature& q, const FracDims& dims,
                           double lambda = 1.0);

// Residual of the linearized equation for the kernel elements psi^j
// (j = 0 is the scale derivative, j >= 1 a translation).  With
// use_bubble_instead = true the bubble itself is substituted (negative
// control; it solves the nonlinear equation, not the linearized one).
ResidualReport verify_kernel(const PVQuadrature& q, const FracDims& dims,
                             const std::vector<double>& points, int j,
                             bool use_bubble_instead = false);

struct SobolevReport {
    double s_derived = 0.0;        // c0^(-s/N)
    double s_gamma_formula = 0.0;  // paper-style gamma expression
    double rel_gap = 0.0;
    bool flagged = false;          // gap > 1e-6 relative
    double bubble_quotient = 0.0;      // equals s_derived by construction
    double bubble_quotient_lam2 = 0.0; // scale invariance witness
    double gaussian_quotient = 0.0;    // strictly smaller (sharpness witness)
};

SobolevReport verify_sobolev(const FracDims& dims);

}  // namespace fracbubble

#endif
