#include "cellnet/optimizer.hpp"

#include <cmath>

namespace cellnet {

void OptimizeSpec::validate() const {
    if (!(search_low > 0.0) || !(search_high > search_low))
        throw InvalidParameter("optimize: need 0 < search_low < search_high");
    if (!(rel_tol > 0.0)) throw InvalidParameter("optimize: rel_tol must be > 0");
    if (max_iters < 1) throw InvalidParameter("optimize: max_iters must be >= 1");
}

MinimizeResult minimize_cost(const ModelParams& model, const CostParams& costs,
                             CostMode mode, const OptimizeSpec& spec,
                             double beta) {
    spec.validate();
    auto f = [&](double lb) { return cost(lb, model, costs, mode, beta); };

    double lo = spec.search_low;
    double hi = spec.search_high;

    // Expand upward while the cost is still decreasing at the upper edge.
    int expansions = 0;
    while (f(hi) < f(0.99 * hi)) {
        if (++expansions > 4)
            throw NumericalFailure(
                "minimize_cost: bracket failure, cost still decreasing after "
                "4 doublings of search_high");
        hi *= 2.0;
    }

    // Monotone increasing over the whole bracket: the infimum sits at the
    // lower edge (e.g. phi = 0 with positive linear terms).
    {
        const double fl = f(lo);
        const double fm = f(std::sqrt(lo * hi));
        const double fh = f(hi);
        if (fl <= fm && fm <= fh && fl <= fh) return {lo, true};
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;  // 1/golden ratio
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < spec.max_iters; ++it) {
        if (b - a <= spec.rel_tol * std::max(std::fabs(a), std::fabs(b))) break;
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return {0.5 * (a + b), false};
}

std::vector<GapReport> gap_study(const std::vector<double>& k_grid,
                                 const ModelParams& model, double beta,
                                 const OptimizeSpec& spec) {
    if (k_grid.empty()) throw InvalidParameter("gap_study: empty K grid");
    for (double k : k_grid)
        if (!(k > 0.0)) throw InvalidParameter("gap_study: K must be > 0");

    const double k_max = k_grid.back();
    OptimizeSpec row_spec = spec;
    row_spec.search_low = std::max(spec.search_low, model.lambda_u / 10.0);
    row_spec.search_high =
        std::max(row_spec.search_low * 2.0,
                 10.0 * std::sqrt(k_max * beta * model.lambda_u));

    std::vector<GapReport> reports;
    reports.reserve(k_grid.size());
    for (double k : k_grid) {
        // Denominator normalized to 1: unit hardware cost, phi = K.
        CostParams costs;
        costs.c1 = 0.0;
        costs.c2 = 1.0;
        costs.c3 = 0.0;
        costs.phi = k;

        GapReport rep;
        rep.K = k;
        rep.closed_form = optimal_density_closed_form(model, costs, beta);
        rep.numeric_exact =
            minimize_cost(model, costs, CostMode::Exact, row_spec, beta).argmin;
        rep.numeric_asymptotic =
            minimize_cost(model, costs, CostMode::Asymptotic, row_spec, beta)
                .argmin;
        rep.abs_gap = std::fabs(rep.closed_form - rep.numeric_exact);
        rep.rel_error = rep.abs_gap / rep.numeric_exact;
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace cellnet
