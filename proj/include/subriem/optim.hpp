#pragma once

#include <functional>
#include <span>
#include <vector>

namespace subriem {

/// Golden-section search for a minimum of a unimodal function on [a,b].
/// Returns the midpoint of the final bracket.
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double x_tol = 1e-10, int max_iter = 200);

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Nelder-Mead with standard reflection/expansion/contraction/shrink moves.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x0, std::span<const double> step,
                          double f_tol = 1e-12, int max_iter = 2000);

struct GradientResult {
    std::vector<double> x;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Limited-memory BFGS with Armijo backtracking. The objective fills grad
/// (same length as x) and returns the value.
GradientResult lbfgs_minimize(
    const std::function<double(std::span<const double>, std::span<double>)>& fg,
    std::span<const double> x0, double g_tol = 1e-8, int max_iter = 500, int history = 8);

}  // namespace subriem
