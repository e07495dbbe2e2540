#include "cellnet/analytic.hpp"

#include <cmath>
#include <limits>

namespace cellnet {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw InvalidParameter(msg);
}

// Recursive adaptive Simpson with error estimate from Richardson halving.
struct AdaptiveSimpson {
    double (*f)(double, double);
    double param;
    int max_depth;

    double simpson(double a, double b, double fa, double fm, double fb) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double refine(double a, double b, double fa, double fm, double fb,
                  double whole, double tol, int depth) const {
        if (depth > max_depth)
            throw NumericalFailure("beta_integral: max_subdivisions exhausted");
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm, param);
        const double frm = f(rm, param);
        const double left = simpson(a, m, fa, flm, fm);
        const double right = simpson(m, b, fm, frm, fb);
        const double delta = left + right - whole;
        if (std::fabs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    double integrate(double a, double b, double tol) const {
        const double fa = f(a, param);
        const double fb = f(b, param);
        const double fm = f(0.5 * (a + b), param);
        return refine(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 0);
    }
};

double shot_noise_kernel(double x, double half_alpha) {
    return 1.0 / (1.0 + std::pow(x, half_alpha));
}

}  // namespace

void ModelParams::validate() const {
    require(lambda_b > 0.0, "lambda_b must be > 0");
    require(lambda_u >= 0.0, "lambda_u must be >= 0");
    require(lambda_s > 0.0, "lambda_s must be > 0");
    require(theta > 0.0, "theta must be > 0");
    require(alpha > 2.0, "alpha must be > 2 (interference diverges otherwise)");
    require(mu > 0.0, "mu must be > 0");
    require(pa_A >= 0.0, "pa_A must be >= 0");
    require(pa_B >= 0.0, "pa_B must be >= 0");
}

void CostParams::validate() const {
    require(c1 >= 0.0 && c2 >= 0.0 && c3 >= 0.0 && phi >= 0.0,
            "cost coefficients must be >= 0");
}

void QuadratureSpec::validate() const {
    require(abs_tol > 0.0, "abs_tol must be > 0");
    require(max_subdivisions >= 1, "max_subdivisions must be >= 1");
    require(tail_error_bound > 0.0, "tail_error_bound must be > 0");
}

double voronoi_area_pdf(double x, double lambda_b) {
    require(x >= 0.0, "voronoi_area_pdf: x must be >= 0");
    require(lambda_b > 0.0, "voronoi_area_pdf: lambda_b must be > 0");
    if (x == 0.0) return 0.0;
    constexpr double k = 3.5;
    const double norm = std::pow(k, k) / std::tgamma(k);
    return norm * std::pow(lambda_b, k) * std::pow(x, 2.5) *
           std::exp(-k * lambda_b * x);
}

double empty_cell_probability(double lambda_b, double lambda_u) {
    require(lambda_b > 0.0, "empty_cell_probability: lambda_b must be > 0");
    require(lambda_u >= 0.0, "empty_cell_probability: lambda_u must be >= 0");
    return std::pow(1.0 + lambda_u / (3.5 * lambda_b), -3.5);
}

FlaggedValue empty_cell_probability_asymptotic(double lambda_b, double lambda_u) {
    require(lambda_b > 0.0,
            "empty_cell_probability_asymptotic: lambda_b must be > 0");
    require(lambda_u >= 0.0,
            "empty_cell_probability_asymptotic: lambda_u must be >= 0");
    const double raw = 1.0 - lambda_u / lambda_b;
    if (raw < 0.0) return {0.0, true};
    return {raw, false};
}

double beta_integral(double theta, double alpha, const QuadratureSpec& quad) {
    require(theta > 0.0, "beta_integral: theta must be > 0");
    if (alpha <= 2.0)
        throw NumericalFailure("beta_integral: divergent for alpha <= 2");
    quad.validate();

    const double a = 0.5 * alpha;  // kernel exponent, > 1
    const double lower = std::pow(theta, -2.0 / alpha);

    // Truncate where the third tail term bounds the remainder of the
    // alternating expansion 1/(1+x^a) = x^-a - x^-2a + x^-3a - ...
    double cut = std::pow((3.0 * a - 1.0) * quad.tail_error_bound,
                          1.0 / (1.0 - 3.0 * a));
    if (cut < 2.0 * lower) cut = 2.0 * lower;
    if (cut < 10.0) cut = 10.0;

    AdaptiveSimpson integrator{&shot_noise_kernel, a, quad.max_subdivisions};
    const double body = integrator.integrate(lower, cut, quad.abs_tol);
    const double tail = std::pow(cut, 1.0 - a) / (a - 1.0) -
                        std::pow(cut, 1.0 - 2.0 * a) / (2.0 * a - 1.0);
    return std::pow(theta, 2.0 / alpha) * (body + tail);
}

double outage_exact(double p, double beta) {
    require(p >= 0.0 && p <= 1.0, "outage_exact: p must be in [0, 1]");
    require(beta >= 0.0, "outage_exact: beta must be >= 0");
    return 1.0 - 1.0 / (1.0 + (1.0 - p) * beta);
}

FlaggedValue outage_asymptotic(double lambda_b, double lambda_u, double beta) {
    require(lambda_b > 0.0, "outage_asymptotic: lambda_b must be > 0");
    require(lambda_u >= 0.0, "outage_asymptotic: lambda_u must be >= 0");
    require(beta >= 0.0, "outage_asymptotic: beta must be >= 0");
    const bool outside_regime = lambda_u > 0.0 && lambda_b / lambda_u < 5.0;
    return {beta * lambda_u / lambda_b, outside_regime};
}

double nearest_distance_pdf(double r, double lambda_b) {
    require(r >= 0.0, "nearest_distance_pdf: r must be >= 0");
    require(lambda_b > 0.0, "nearest_distance_pdf: lambda_b must be > 0");
    const double pi = 3.14159265358979323846;
    return 2.0 * pi * lambda_b * r * std::exp(-pi * lambda_b * r * r);
}

double cable_length_density(double lambda_b, double lambda_s) {
    require(lambda_b > 0.0, "cable_length_density: lambda_b must be > 0");
    require(lambda_s > 0.0, "cable_length_density: lambda_s must be > 0");
    return lambda_b / (2.0 * std::pow(lambda_s, 1.5));
}

double network_power(const ModelParams& params, double p, bool asymptotic) {
    params.validate();
    require(p >= 0.0 && p <= 1.0, "network_power: p must be in [0, 1]");
    if (asymptotic)
        return params.pa_A * params.mu * params.lambda_u +
               params.pa_B * params.lambda_b;
    return (params.pa_A * params.mu + params.pa_B) * (1.0 - p) * params.lambda_b +
           params.pa_B * p * params.lambda_b;
}

double cost(double lambda_b, const ModelParams& model, const CostParams& costs,
            CostMode mode, double beta) {
    require(lambda_b > 0.0, "cost: lambda_b must be > 0");
    costs.validate();
    ModelParams m = model;
    m.lambda_b = lambda_b;
    m.validate();

    const double cable = cable_length_density(lambda_b, m.lambda_s);
    double power;
    double p_out;
    if (mode == CostMode::Exact) {
        const double p = empty_cell_probability(lambda_b, m.lambda_u);
        power = network_power(m, p, /*asymptotic=*/false);
        p_out = outage_exact(p, beta);
    } else {
        power = network_power(m, 0.0, /*asymptotic=*/true);
        p_out = outage_asymptotic(lambda_b, m.lambda_u, beta).value;
    }
    return costs.c1 * cable + costs.c2 * lambda_b + costs.c3 * power +
           costs.phi * p_out;
}

double k_ratio(const CostParams& costs, double lambda_s, double pa_B) {
    costs.validate();
    require(lambda_s > 0.0, "k_ratio: lambda_s must be > 0");
    require(pa_B >= 0.0, "k_ratio: pa_B must be >= 0");
    const double denom =
        costs.c1 / (2.0 * std::pow(lambda_s, 1.5)) + costs.c2 + costs.c3 * pa_B;
    if (denom <= 0.0)
        throw InvalidParameter("k_ratio: cable, hardware and offset-power cost "
                               "terms are all zero");
    return costs.phi / denom;
}

double optimal_density_closed_form(const ModelParams& model,
                                   const CostParams& costs, double beta) {
    require(beta >= 0.0, "optimal_density_closed_form: beta must be >= 0");
    const double k = k_ratio(costs, model.lambda_s, model.pa_B);
    return std::sqrt(k * beta * model.lambda_u);
}

double theta_from_db(double db) { return std::pow(10.0, db / 10.0); }

double theta_to_db(double theta_linear) {
    require(theta_linear > 0.0, "theta must be > 0");
    return 10.0 * std::log10(theta_linear);
}

}  // namespace cellnet
