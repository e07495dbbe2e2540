#ifndef CELLNET_OPTIMIZER_HPP
#define CELLNET_OPTIMIZER_HPP

#include <vector>

#include "cellnet/analytic.hpp"

// Numerical minimization of the network cost C(lambda_b) and comparison
// against the closed-form optimum.

namespace cellnet {

struct OptimizeSpec {
    double search_low = 1e-3;
    double search_high = 10.0;
    double rel_tol = 1e-8;
    int max_iters = 400;

    void validate() const;
};

struct MinimizeResult {
    double argmin = 0.0;
    bool at_boundary = false;  // cost monotone increasing: pinned to search_low
};

// Golden-section minimizer of cost(lambda_b) over the bracket, expanding the
// upper edge up to 4 doublings when the cost is still decreasing there.
MinimizeResult minimize_cost(const ModelParams& model, const CostParams& costs,
                             CostMode mode, const OptimizeSpec& spec,
                             double beta);

struct GapReport {
    double K = 0.0;
    double closed_form = 0.0;
    double numeric_exact = 0.0;
    double numeric_asymptotic = 0.0;
    double abs_gap = 0.0;
    double rel_error = 0.0;
};

// Sweeps the outage-penalty-to-BS-cost ratio K with the cost denominator
// normalized to 1 (phi = K), comparing the closed-form density against the
// numerically minimized exact and asymptotic costs.
std::vector<GapReport> gap_study(const std::vector<double>& k_grid,
                                 const ModelParams& model, double beta,
                                 const OptimizeSpec& spec);

}  // namespace cellnet

#endif  // CELLNET_OPTIMIZER_HPP
