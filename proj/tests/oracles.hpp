#ifndef CELLNET_TESTS_ORACLES_HPP
#define CELLNET_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>

// Test-only reference computations, kept independent of the library's own
// evaluation paths.

namespace oracle {

// Fixed-grid composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int panels) {
    const double h = (b - a) / (2 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Closed form for beta at alpha = 4:
// sqrt(theta) * (pi/2 - arctan(theta^{-1/2})).
inline double beta_alpha4(double theta) {
    return std::sqrt(theta) * (M_PI / 2.0 - std::atan(1.0 / std::sqrt(theta)));
}

// Closed form for beta at alpha = 3 via the elementary antiderivative of
// 1/(1 + x^{3/2}) after the substitution t = sqrt(x):
// F(t) = -(2/3)ln(1+t) + (1/3)ln(t^2-t+1) + (2/sqrt 3) atan((2t-1)/sqrt 3),
// with F(inf) = pi/sqrt(3).
inline double beta_alpha3(double theta) {
    auto F = [](double t) {
        return -2.0 / 3.0 * std::log(1.0 + t) +
               1.0 / 3.0 * std::log(t * t - t + 1.0) +
               2.0 / std::sqrt(3.0) * std::atan((2.0 * t - 1.0) / std::sqrt(3.0));
    };
    const double t0 = std::pow(theta, -1.0 / 3.0);
    return std::pow(theta, 2.0 / 3.0) * (M_PI / std::sqrt(3.0) - F(t0));
}

}  // namespace oracle

#endif
