#pragma once

#include <functional>

namespace subriem {

/// Weight profile b on [0, t]: non-negative, decreasing, with b(t) = b'(t) = 0
/// when used for the integrated inequality. endpoint_order is the power alpha
/// in b ~ const (t-s)^alpha near s = t, which drives the quadrature
/// substitution at that endpoint.
struct BProfile {
    std::function<double(double)> b;
    std::function<double(double)> db;
    std::function<double(double)> d2b;
    double t = 1.0;
    double endpoint_order = 3.0;
    bool vanishes_at_t = true;
};

/// b(s) = (t-s)^alpha, alpha > 2.
BProfile power_profile(double alpha, double t);

/// b(s) = (exp(-2 rho s / (3 alpha)) - exp(-2 rho t / (3 alpha)))^alpha,
/// alpha > 2, rho > 0.
BProfile exp_profile(double alpha, double rho, double t);

/// E(s) = b''/b' + 2 b'/b + 2 rho.
double integrand_E(const BProfile& bp, double rho, double s);

/// Samples b and b' on a fine grid and throws if b < 0 or b' > 0 anywhere.
void validate_profile(const BProfile& bp, int samples = 1000);

/// Coefficients of the pointwise inequality
///   c_gamma * Gamma(ln P_t f) + c_z * (Z ln P_t f)^2
///     <= c_rate * (L P_t f / P_t f) + c_const.
struct LiYauForm {
    double c_gamma = 1.0;
    double c_z = 0.0;
    double c_rate = 0.0;
    double c_const = 0.0;
    double rho = 0.0;
    double t = 0.0;
    LiYauForm normalized() const;  // divide through by c_gamma
};

/// Integrate the differential inequality over [0, t] with the given profile:
///   c_z     = b(0) / (-b'(0)),
///   c_rate  = (1 / -b'(0)) * int_0^t b' E ds,
///   c_const = (1 / -b'(0)) * (1/4) * int_0^t (-b') E^2 ds,
/// all with c_gamma = 1. Endpoint behaviour of the integrands is
/// (t-s)^(alpha-2) and (t-s)^(alpha-3) respectively.
LiYauForm coefficients_from_b(const BProfile& bp, double rho, double rel_tol = 1e-9);

/// Closed form for the power profile:
///   c_z = t/alpha,
///   c_rate = (3a-1)/(a-1) - 2 rho t / alpha,
///   c_const = rho^2 t / alpha - rho (3a-1)/(a-1) + (3a-1)^2 / (4 (a-2) t).
/// The quarter on the last term is forced by the square completion in the
/// differential inequality (the gamma = E/2 choice); it also matches the
/// rho -> 0 limit of the exponential-profile form and the V-route constant
/// beta/(4 alpha).
LiYauForm corollary22_form(double alpha, double rho, double t);

/// Closed form for the exponential profile (rho > 0):
///   c_z = (3/2)(1 - e^{-2 rho t/(3a)}) / rho,
///   c_rate = ((3a-1)/(a-1)) e^{-2 rho t/(3a)},
///   c_const = (3/2) rho ((1 - 1/(3a))^2 / (1 - 2/a))
///             e^{-4 rho t/(3a)} / (1 - e^{-2 rho t/(3a)}).
LiYauForm corollary24_form(double alpha, double rho, double t);

/// Constants of the rate bound d/dt ln P_t f >= A Gamma(u) + B t (Zu)^2 - C/t
/// at rho = 0, instantiated from the power-profile form:
///   A = 1/c_rate, B = c_z / (t c_rate), C = c_const * t / c_rate.
struct HarnackConstants {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};
HarnackConstants corollary23_constants(double alpha);

/// Measured derivative data of u = ln P_t f at one point.
struct LogHeatDerivatives {
    double gamma_u = 0.0;
    double zu_sq = 0.0;
    double du_dt = 0.0;
    double gamma_u_se = 0.0;
    double zu_sq_se = 0.0;
    double du_dt_se = 0.0;
};

struct MarginReport {
    double margin = 0.0;
    double sigma = 0.0;      // propagated standard error of the margin
    double threshold = 0.0;  // pass iff margin >= -threshold
    bool pass = false;
};

/// margin = c_rate du/dt + c_const - c_gamma Gamma(u) - c_z (Zu)^2.
/// threshold = k_sigma * sigma + extra_budget.
MarginReport verify_liyau(const LiYauForm& form, const LogHeatDerivatives& d,
                          double k_sigma = 3.0, double extra_budget = 0.0);

}  // namespace subriem
