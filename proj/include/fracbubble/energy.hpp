#ifndef FRACBUBBLE_ENERGY_HPP
#define FRACBUBBLE_ENERGY_HPP

#include "fracbubble/projection.hpp"

namespace fracbubble {

// Admissible multi-bubble configuration.
struct ReducedConfig {
    int k = 2;
    std::vector<int> signs = {1, -1};
    double eps = 1e-2;
    double eta = 0.1;
    std::vector<double> lambdas = {1.0, 1.0};
    std::vector<Point> sigmas;

    void validate(const BoxDomain& domain) const;
};

// Reduced functional over scales and centers:
//   c1^2 (sum lambda_i^nu H(s_i,s_i) - sum_{i!=h} a_i a_h G(s_i,s_h)
//         (lambda_i lambda_h)^{nu/2}) - c0 nu/(p+1) log(lambda_1...lambda_k)
double upsilon_k(const GreenEvaluator& ev, const ReducedConfig& cfg);

// two-bubble specialization with opposite signs (interaction flips to +2G)
double upsilon_2(const GreenEvaluator& ev, double lam1, double lam2,
                 const Point& s1, const Point& s2);

// central finite differences in (lambda, sigma); steps shrink automatically
// at the admissibility boundary
Eigen::VectorXd grad_upsilon(const GreenEvaluator& ev, const ReducedConfig& cfg);

// Energy of a coefficient vector: 1/2 <v,v>_{H^s} - int F_eps(v) on the grid.
double energy(const SpectralBasis& basis, const FracDims& dims, double eps,
              const CoeffVector& v);

// Interaction integrals of the projected ansatz on the dilated domain
// (computed on the fixed box, exact frame factors):
//   self:  int w_i^p P w_i   ->  c0 - eps c1^2 lambda_i^nu H + o(eps)
//   cross: int w_h^p P w_i   ->  eps c1^2 (l_i l_h)^{nu/2} G + o(eps)
struct InteractionIntegrals {
    double self_term = 0.0;
    double cross_term = 0.0;
};
InteractionIntegrals interaction_integrals(const GreenEvaluator& ev,
                                           const ReducedConfig& cfg, int i,
                                           int h);

// Energy of the projected multi-bubble ansatz in the dilated frame,
// evaluated from the kernel representation (valid at any concentration).
double ansatz_energy(const GreenEvaluator& ev, const ReducedConfig& cfg);

// Expansion verification: residual of
//   E = k s c0 / N - eps k c0/(p+1)^2 + eps/2 Upsilon_k + eps k/(p+1) c_log
// fitted on a ladder; passes when the residual slope is >= 1.05.
struct EnergyExpansionResult {
    RateReport report;
    std::vector<double> energies;
    double leading_constant = 0.0;  // k s c0 / N
};
EnergyExpansionResult energy_expansion_report(
    const GreenEvaluator& ev, const ReducedConfig& cfg_template,
    const std::vector<double>& eps_ladder);

}  // namespace fracbubble

#endif
