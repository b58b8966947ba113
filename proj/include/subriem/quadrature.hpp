#pragma once

#include <functional>

namespace subriem {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // accumulated Gauss/Kronrod discrepancy
    int evaluations = 0;
    int segments = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a,b]. Splits the segment with the
/// largest error estimate until the total satisfies
///   err <= max(abs_tol, rel_tol * |value|).
/// Throws std::runtime_error on non-finite integrand values or if the budget
/// of subdivisions is exhausted before reaching the tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-9, double abs_tol = 0.0);

/// Substitution order k = ceil(2 / (1 + sigma)) for an integrand behaving like
/// (x - endpoint)^sigma, sigma > -1, so that after x = endpoint +/- h tau^k the
/// integrand gains the factor tau^(k(1+sigma)-1) with exponent >= 1.
/// Returns 1 (no substitution) when sigma >= 1.
int power_substitution_order(double sigma);

/// Adaptive integration with power-type behaviour (x-a)^sigma_left near a
/// and/or (b-x)^sigma_right near b. Pass sigma >= 1 for a smooth endpoint.
QuadratureResult integrate_singular(const std::function<double(double)>& f, double a, double b,
                                    double sigma_left, double sigma_right, double rel_tol = 1e-9);

}  // namespace subriem
