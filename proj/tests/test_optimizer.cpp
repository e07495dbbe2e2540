#include "doctest.h"

#include <cmath>

#include "cellnet/optimizer.hpp"
#include "cellnet/pointprocess.hpp"
#include "oracles.hpp"

using namespace cellnet;

namespace {

OptimizeSpec default_spec() {
    OptimizeSpec spec;
    spec.search_low = 1e-3;
    spec.search_high = 2.0;
    spec.rel_tol = 1e-10;
    return spec;
}

}  // namespace

TEST_CASE("asymptotic minimizer equals closed form on the toy problem") {
    ModelParams m;
    m.lambda_u = 0.04;
    m.lambda_s = 1.0;
    m.pa_B = 0.0;
    CostParams c;
    c.c1 = 0.0;
    c.c2 = 1.0;
    c.c3 = 0.0;
    c.phi = 1.0;
    const auto res = minimize_cost(m, c, CostMode::Asymptotic, default_spec(), 1.0);
    CHECK_FALSE(res.at_boundary);
    CHECK(res.argmin == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("exact minimizer beats the closed form under the exact objective") {
    ModelParams m;
    m.lambda_u = 0.04;
    m.lambda_s = 1.0;
    m.pa_B = 0.0;
    CostParams c;
    c.c2 = 1.0;
    c.phi = 1.0;
    const double beta = 1.0;
    const auto res = minimize_cost(m, c, CostMode::Exact, default_spec(), beta);

    // Dense grid scan oracle
    double grid_best = 0.0, grid_val = 1e300;
    for (int i = 1; i <= 10000; ++i) {
        const double lb = 2.0 * i / 10000.0;
        const double v = cost(lb, m, c, CostMode::Exact, beta);
        if (v < grid_val) {
            grid_val = v;
            grid_best = lb;
        }
    }
    CHECK(std::fabs(res.argmin - grid_best) < 1e-3);
    CHECK(cost(res.argmin, m, c, CostMode::Exact, beta) <=
          cost(0.2, m, c, CostMode::Exact, beta));
    CHECK(std::fabs(res.argmin - 0.2) < 0.2);  // finite gap to the closed form
}

TEST_CASE("zero outage penalty pins the minimizer to the lower edge") {
    ModelParams m;
    m.lambda_u = 0.04;
    m.lambda_s = 1.0;
    CostParams c;
    c.c2 = 1.0;
    c.phi = 0.0;
    const auto res = minimize_cost(m, c, CostMode::Asymptotic, default_spec(), 1.0);
    CHECK(res.at_boundary);
    CHECK(res.argmin == default_spec().search_low);
}

TEST_CASE("bracket expansion reaches far minimizers, then fails loudly") {
    ModelParams m;
    m.lambda_u = 0.02;
    m.lambda_s = 1.0;
    m.pa_B = 0.0;
    CostParams c;
    c.c2 = 1.0;
    c.phi = 4000.0;  // minimizer ~ sqrt(4000*1*0.02) ~ 8.9, beyond search_high 2
    const auto res = minimize_cost(m, c, CostMode::Asymptotic, default_spec(), 1.0);
    CHECK(res.argmin ==
          doctest::Approx(std::sqrt(4000.0 * 0.02)).epsilon(1e-6));

    c.phi = 4e9;  // beyond 4 doublings
    CHECK_THROWS_AS(
        minimize_cost(m, c, CostMode::Asymptotic, default_spec(), 1.0),
        NumericalFailure);
}

TEST_CASE("closed-form consistency over random parameter draws") {
    RngStream rng(2718, 0);
    int checked = 0;
    while (checked < 100) {
        ModelParams m;
        m.lambda_u = 0.005 + rng.uniform() * 0.1;
        m.lambda_s = 0.05 + rng.uniform();
        m.pa_A = rng.uniform();
        m.mu = 0.5 + rng.uniform();
        m.pa_B = rng.uniform();
        CostParams c;
        c.c1 = rng.uniform();
        c.c2 = 0.05 + rng.uniform();
        c.c3 = rng.uniform();
        c.phi = 0.5 + rng.uniform() * 20.0;
        const double beta = 0.2 + rng.uniform() * 2.5;

        const double closed = optimal_density_closed_form(m, c, beta);
        OptimizeSpec spec;
        spec.search_low = closed / 100.0;
        spec.search_high = closed * 10.0;
        spec.rel_tol = 1e-10;
        const auto res = minimize_cost(m, c, CostMode::Asymptotic, spec, beta);
        CHECK(std::fabs(res.argmin - closed) / closed < 1e-6);
        ++checked;
    }
}

TEST_CASE("scale identity: quadrupling K doubles the asymptotic minimizer") {
    ModelParams m;
    m.lambda_u = 0.02;
    m.lambda_s = 1.0;
    m.pa_B = 0.0;
    const double beta = oracle::beta_alpha3(std::pow(10.0, 0.3));
    OptimizeSpec spec = default_spec();
    spec.search_high = 5.0;
    auto k_min = [&](double k) {
        CostParams c;
        c.c2 = 1.0;
        c.phi = k;
        return minimize_cost(m, c, CostMode::Asymptotic, spec, beta).argmin;
    };
    for (double k : {1.0, 3.0, 10.0})
        CHECK(k_min(4.0 * k) / k_min(k) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("gap study reproduces the constant-gap regime") {
    ModelParams m;
    m.lambda_u = 0.02;
    m.lambda_s = 1.0;
    m.theta = std::pow(10.0, 0.3);
    m.alpha = 3.0;
    const double beta = beta_integral(m.theta, m.alpha);
    OptimizeSpec spec;
    spec.rel_tol = 1e-10;

    const std::vector<double> ks{1, 2, 5, 10, 20, 50, 100};
    const auto reports = gap_study(ks, m, beta, spec);
    REQUIRE(reports.size() == ks.size());
    double prev_exact = 0.0, prev_closed = 0.0;
    for (const auto& r : reports) {
        CHECK(r.abs_gap ==
              doctest::Approx(std::fabs(r.closed_form - r.numeric_exact)));
        CHECK(r.rel_error == doctest::Approx(r.abs_gap / r.numeric_exact));
        // Numeric optimum is at least as good under the exact objective
        CostParams c;
        c.c2 = 1.0;
        c.phi = r.K;
        CHECK(cost(r.numeric_exact, m, c, CostMode::Exact, beta) <=
              cost(r.closed_form, m, c, CostMode::Exact, beta) + 1e-12);
        CHECK(r.numeric_exact >= prev_exact);
        CHECK(r.closed_form >= prev_closed);
        prev_exact = r.numeric_exact;
        prev_closed = r.closed_form;
        if (r.K > 10.0) CHECK(r.rel_error < 0.10);
    }
    // The gap stays nearly constant across the sweep
    for (const auto& r : reports) {
        CHECK(r.abs_gap > 0.06);
        CHECK(r.abs_gap < 0.08);
    }

    // Very large K: relative error collapses
    const auto far = gap_study({1e6}, m, beta, spec);
    CHECK(far[0].rel_error < 0.01);

    CHECK_THROWS_AS(gap_study({}, m, beta, spec), InvalidParameter);
    CHECK_THROWS_AS(gap_study({-1.0}, m, beta, spec), InvalidParameter);
}

TEST_CASE("monotonicity of optima in lambda_u and theta") {
    ModelParams m;
    m.lambda_s = 1.0;
    m.alpha = 3.0;
    OptimizeSpec spec;
    spec.rel_tol = 1e-10;
    double prev = 0.0;
    for (double lu : {0.01, 0.02, 0.05}) {
        m.lambda_u = lu;
        m.theta = std::pow(10.0, 0.3);
        const auto r = gap_study({10.0}, m, beta_integral(m.theta, 3.0), spec);
        CHECK(r[0].numeric_exact > prev);
        prev = r[0].numeric_exact;
    }
    prev = 0.0;
    m.lambda_u = 0.02;
    for (double db : {0.0, 3.0, 6.0}) {
        m.theta = theta_from_db(db);
        const auto r = gap_study({10.0}, m, beta_integral(m.theta, 3.0), spec);
        CHECK(r[0].numeric_exact > prev);
        prev = r[0].numeric_exact;
    }
}
