#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "subriem/liyau.hpp"

namespace subriem {

/// Admissible profile V on [0,1]: V >= 0, V(x) ~ v1 x^p near 0 with
/// p in (2,3) so the constraint integral int_0^1 x^2/V dx converges, and
/// p > 5/2 whenever the beta functional is needed.
class VProfile {
  public:
    enum class Kind { Parametric, Callable, Grid };

    /// V = lambda x^3 on [eps,1], lambda eps^{3-gamma} x^gamma on [0,eps],
    /// lambda = -ln(eps) + 1/(3-gamma); normalized by construction.
    static VProfile parametric(double eps, double gamma);

    /// Analytic evaluators with known vanishing order p near 0. split points
    /// are interior abscissae where smoothness breaks (quadrature splits there).
    static VProfile callable(std::function<double(double)> v, std::function<double(double)> dv,
                             double p, std::vector<double> splits = {});

    /// Piecewise-linear values on nodes 0 < x_1 < ... < x_n = 1 with
    /// V(x) = values[0] * (x/x_1)^p on the first cell.
    static VProfile grid(std::vector<double> nodes, std::vector<double> values, double p);

    Kind kind() const { return kind_; }
    double operator()(double x) const;
    double derivative(double x) const;
    double near_zero_power() const { return p_; }
    const std::vector<double>& split_points() const { return splits_; }

    double family_eps() const;
    double family_gamma() const;
    double family_lambda() const;
    const std::vector<double>& grid_nodes() const { return nodes_; }
    const std::vector<double>& grid_values() const { return values_; }

    /// int_0^1 x^2 / V dx by piecewise singular-aware quadrature.
    double constraint_integral(double rel_tol = 1e-10) const;

    /// Multiplied by a constant so that the constraint integral is 1.
    /// Throws when the integral diverges (p >= 3 or p <= 2).
    VProfile normalized(double rel_tol = 1e-10) const;

    VProfile scaled(double c) const;

  private:
    VProfile() = default;
    Kind kind_ = Kind::Callable;
    double p_ = 3.0;
    double eps_ = 0.0, gamma_ = 0.0, lambda_ = 0.0;      // parametric
    std::function<double(double)> v_, dv_;               // callable
    std::vector<double> nodes_, values_;                 // grid
    std::vector<double> splits_;
    double scale_ = 1.0;
};

struct VFunctionals {
    double alpha = 0.0;           // int V'/x^2, direct route
    double alpha_by_parts = 0.0;  // V(1) + 2 int V/x^3
    double beta = 0.0;            // int (V'/x^2)^2
    double v_at_1 = 0.0;
    double constraint = 0.0;      // int x^2/V (should be 1 on normalized input)
};

/// Requires p > 5/2 (beta diverges otherwise) and a normalized profile.
VFunctionals functionals(const VProfile& v, double rel_tol = 1e-9);

/// V(1) Gamma(u) + t (Zu)^2 <= (alpha - 2 rho t) du/dt
///                            + (beta - alpha^2 + (alpha - 2 rho t)^2) / (4t).
LiYauForm liyau_from_V(const VProfile& v, double rho, double t, double rel_tol = 1e-9);

/// Closed forms for the two-piece family.
struct FamilyForms {
    double lambda = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double beta_minus_alpha2 = 0.0;
    double v_at_1 = 0.0;
    double c_ratio = 0.0;  // beta / (4 alpha)
};
FamilyForms family_closed_forms(double eps, double gamma);

/// Change of variables V(b) = -b^2 b' for a profile with b(t) = b'(t) = 0,
/// mapped to [0,1] and normalized. The result is a Callable profile with
/// p = 3 - 1/endpoint_order.
VProfile v_from_b(const BProfile& bp);

/// Native-scale data for a profile V on [0, b0] (no normalization):
/// t = int_0^{b0} x^2/V, a0 = V(b0)/b0^2, A = int (V'/x^2 - 2 rho t),
/// B = (1/4) int (V'/x^2 - 2 rho t)^2, and the Harnack ratio C = t B / A.
/// Invariant under the domain stretch V -> V(lambda .)/lambda^3 with
/// b0 -> b0/lambda at fixed rho, and under V -> c V jointly with
/// rho -> c^2 rho (the weight scale compresses the total time by c, so the
/// curvature must co-transform; at rho = 0 the scale invariance is
/// unconditional).
struct UnnormalizedConstants {
    double t = 0.0, a0 = 0.0, A = 0.0, B = 0.0, C = 0.0;
};
UnnormalizedConstants unnormalized_constants(const std::function<double(double)>& v,
                                             const std::function<double(double)>& dv, double b0,
                                             double p, double rho,
                                             std::span<const double> splits = {},
                                             double rel_tol = 1e-10);

struct BestCResult {
    double family_c = 0.0;  // best beta/(4 alpha) over the scanned family
    double family_eps = 0.0, family_gamma = 0.0;
    double refined_c = 0.0;  // after simplex refinement in (eps, gamma)
    double refined_eps = 0.0, refined_gamma = 0.0;
    double grid_c = 0.0;  // after coordinate search over grid profiles
    std::vector<double> grid_nodes, grid_values;
    double grid_p = 0.0;
    int evaluated = 0;
    double min_c_seen = 0.0;  // over every admissible profile evaluated
    bool all_above_2 = true;
    std::vector<std::array<double, 3>> family_trace;  // eps, gamma, C rows
};

/// Minimize C(V) = beta/(4 alpha) at rho = 0: dense family scan (at least
/// family_points profiles), simplex refinement, then a renormalizing
/// coordinate search over piecewise-linear profiles warm-started at the best
/// family member. Records whether any admissible profile ever reached C <= 2.
BestCResult best_C_rho0(int family_points = 1200, int grid_node_count = 24, uint64_t seed = 1);

struct DecayResult {
    std::vector<double> t;
    std::vector<double> width;       // upper - lower bound on du/dt
    std::vector<double> upper, lower;
    std::vector<double> order_ratio;  // (alpha - 2 rho t)^2 / (beta - alpha^2)
    double slope = 0.0;
    double slope_se = 0.0;
    int skipped = 0;  // grid points where eps >= 1 or the sign pattern failed
};

/// For each t choose eps = exp(-2 rho t/3 + 1/(3-gamma) +/- c t e^{-rho t/3});
/// the two signs give one upper and one lower bound on du/dt through
/// liyau_from_V. Fits ln(width) against t; the slope should sit near -rho/3.
DecayResult long_time_decay(double rho, std::span<const double> t_grid, double gamma, double c);

}  // namespace subriem
