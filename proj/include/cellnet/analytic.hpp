#ifndef CELLNET_ANALYTIC_HPP
#define CELLNET_ANALYTIC_HPP

#include <stdexcept>
#include <string>

// Closed-form coverage and cost quantities for a downlink cellular network
// with Poisson-distributed base stations and silent empty cells. All
// functions are pure and thread-safe.

namespace cellnet {

struct ModelParams {
    double lambda_b = 0.2;   // BS density (points per unit area)
    double lambda_u = 0.02;  // mobile density
    double lambda_s = 0.01;  // switching-center density
    double theta = 1.9952623149688795;  // SIR threshold, linear (3 dB)
    double alpha = 3.0;      // path-loss exponent
    double mu = 1.0;         // BS transmit power
    double pa_A = 1.0;       // power-model slope
    double pa_B = 0.0;       // power-model offset

    void validate() const;
};

struct CostParams {
    double c1 = 0.0;   // cost per unit cable length
    double c2 = 1.0;   // hardware cost per BS
    double c3 = 0.0;   // price per unit power
    double phi = 1.0;  // penalty per outage event

    void validate() const;
};

struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_subdivisions = 50;
    double tail_error_bound = 1e-12;

    void validate() const;
};

class InvalidParameter : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Value paired with an advisory flag; asymptotic formulas flag inputs
// outside their stated regime, the clamped variant flags truncation.
struct FlaggedValue {
    double value = 0.0;
    bool flagged = false;
};

// 3.5-power approximation of the typical Voronoi cell-area density,
// f_S(x) = (3.5^3.5 / Gamma(3.5)) lambda_b^3.5 x^2.5 exp(-3.5 lambda_b x).
double voronoi_area_pdf(double x, double lambda_b);

// Probability that a typical BS cell holds no mobile:
// (1 + lambda_u / (3.5 lambda_b))^{-3.5}.
double empty_cell_probability(double lambda_b, double lambda_u);

// First-order expansion 1 - lambda_u/lambda_b, clamped at 0 (flag set when
// the clamp fires).
FlaggedValue empty_cell_probability_asymptotic(double lambda_b, double lambda_u);

// beta = theta^{2/alpha} * integral_{theta^{-2/alpha}}^inf dx / (1 + x^{alpha/2}),
// evaluated by adaptive quadrature on a finite interval plus an analytic
// tail correction. Certified absolute error <= abs_tol + tail_error_bound.
double beta_integral(double theta, double alpha,
                     const QuadratureSpec& quad = QuadratureSpec{});

// P_out = 1 - 1/(1 + (1-p) beta).
double outage_exact(double p, double beta);

// P_out ~= beta lambda_u / lambda_b; flag set when lambda_b/lambda_u < 5
// (outside the asymptotic regime). Not clamped.
FlaggedValue outage_asymptotic(double lambda_b, double lambda_u, double beta);

// Serving-link distance density f_{D*}(r) = 2 pi lambda_b r exp(-pi lambda_b r^2).
double nearest_distance_pdf(double r, double lambda_b);

// L = lambda_b / (2 lambda_s^{3/2}), verbatim.
double cable_length_density(double lambda_b, double lambda_s);

// Exact: (A mu + B)(1-p) lambda_b + B p lambda_b; asymptotic: A mu lambda_u + B lambda_b.
double network_power(const ModelParams& params, double p, bool asymptotic);

enum class CostMode { Exact, Asymptotic };

// C(lambda_b) = c1 L + c2 lambda_b + c3 P_Sigma + phi P_out. Exact mode uses
// the closed-form p and outage; asymptotic mode substitutes the large-
// lambda_b approximations of both.
double cost(double lambda_b, const ModelParams& model, const CostParams& costs,
            CostMode mode, double beta);

// lambda_b* = sqrt( phi beta lambda_u / (c1/(2 lambda_s^{3/2}) + c2 + c3 B) ).
double optimal_density_closed_form(const ModelParams& model,
                                   const CostParams& costs, double beta);

// K = phi / (c1/(2 lambda_s^{3/2}) + c2 + c3 B).
double k_ratio(const CostParams& costs, double lambda_s, double pa_B);

// dB <-> linear SIR threshold.
double theta_from_db(double db);
double theta_to_db(double theta_linear);

}  // namespace cellnet

#endif  // CELLNET_ANALYTIC_HPP
