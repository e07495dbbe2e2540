#ifndef CELLNET_MONTECARLO_HPP
#define CELLNET_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "cellnet/analytic.hpp"
#include "cellnet/pointprocess.hpp"

// Statistical estimators over many sampled realizations. Trials are
// independent, derive their RNG streams from (seed, trial index) and are
// reduced in index order, so estimates are bit-reproducible regardless of
// how trials are scheduled across threads.

namespace cellnet {

enum class OutageMode { SilentEmptyCells, AllTransmit };
enum class EstimatorKind { OneTypical, AllServed };

struct SimConfig {
    Window window;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    double ci_level = 0.95;
    OutageMode mode = OutageMode::SilentEmptyCells;
    EstimatorKind estimator = EstimatorKind::OneTypical;
    // Add the mean far-field interference missing beyond the torus
    // min-image horizon, removing the finite-window truncation bias.
    bool tail_correction = true;

    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials_used = 0;
    std::uint64_t discards = 0;
};

// Standard-normal quantile (Acklam's rational approximation).
double normal_quantile(double p);

// J(window, alpha) = integral of |u|^{-alpha} over the plane outside the
// centered window rectangle. A point process of density lambda beyond the
// min-image horizon contributes mean interference lambda * J, the far-field
// mass a torus simulation cannot see. Requires alpha > 2.
double farfield_tail_integral(const Window& window, double alpha);

// Sample mean / CI from per-trial values. Binary proportions fall back to a
// Wilson interval when mean * n < 10.
Estimate make_estimate(const std::vector<double>& values, double ci_level,
                       bool binary, std::uint64_t discards);

// Per-trial outage indicators (or per-realization served-mobile averages)
// for both interference modes on matched geometry and fading. Powers the
// paired silent-vs-all-transmit dominance check.
struct OutageTrials {
    std::vector<double> silent;
    std::vector<double> all_transmit;
    std::uint64_t discards = 0;
};

OutageTrials run_outage_trials(const ModelParams& model, const SimConfig& sim,
                               std::uint64_t stream_offset = 0);

// Outage probability of the typical active mobile; mode picked by sim.mode.
Estimate estimate_outage(const ModelParams& model, const SimConfig& sim);

// Fraction of BSs with no associated mobile.
Estimate estimate_empty_cell_prob(double lambda_b, double lambda_u,
                                  const SimConfig& sim);

// Mean serving-link distance of the typical mobile; expected 1/(2 sqrt(lambda_b)).
Estimate estimate_link_distance(double lambda_b, const SimConfig& sim);

// Total nearest-switching-center cable length, reported both per unit area
// and per SC cell (the two readings of the cable-length formula).
struct CableEstimate {
    Estimate per_unit_area;
    Estimate per_sc_cell;
};

CableEstimate estimate_cable_length(double lambda_b, double lambda_s,
                                    const SimConfig& sim);

struct OutageSweepRow {
    double lambda_b = 0.0;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double analytic_exact = 0.0;
    double analytic_asymptotic = 0.0;
    double alltransmit_mc = 0.0;
    double alltransmit_stderr = 0.0;
    std::uint64_t discards = 0;
};

// One row per BS density: MC outage in both modes next to the analytic
// exact and asymptotic curves.
std::vector<OutageSweepRow> sweep_outage(const ModelParams& model_template,
                                         const std::vector<double>& lambda_b_grid,
                                         const SimConfig& sim,
                                         const QuadratureSpec& quad = {});

}  // namespace cellnet

#endif  // CELLNET_MONTECARLO_HPP
