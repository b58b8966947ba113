#include "subriem/liyau.hpp"

#include <cmath>
#include <stdexcept>

#include "subriem/quadrature.hpp"

namespace subriem {

BProfile power_profile(double alpha, double t) {
    if (alpha <= 2.0) throw std::invalid_argument("power profile needs alpha > 2");
    if (t <= 0.0) throw std::invalid_argument("power profile needs t > 0");
    BProfile p;
    p.t = t;
    p.endpoint_order = alpha;
    p.vanishes_at_t = true;
    p.b = [alpha, t](double s) { return std::pow(t - s, alpha); };
    p.db = [alpha, t](double s) { return -alpha * std::pow(t - s, alpha - 1.0); };
    p.d2b = [alpha, t](double s) { return alpha * (alpha - 1.0) * std::pow(t - s, alpha - 2.0); };
    return p;
}

BProfile exp_profile(double alpha, double rho, double t) {
    if (alpha <= 2.0) throw std::invalid_argument("exponential profile needs alpha > 2");
    if (rho <= 0.0) throw std::invalid_argument("exponential profile needs rho > 0");
    if (t <= 0.0) throw std::invalid_argument("exponential profile needs t > 0");
    BProfile p;
    p.t = t;
    p.endpoint_order = alpha;
    p.vanishes_at_t = true;
    double k = 2.0 * rho / (3.0 * alpha);
    double qt = std::exp(-k * t);
    // b = Q^alpha with Q(s) = e^{-ks} - e^{-kt}; q = e^{-ks}, q' = -k q.
    p.b = [alpha, k, qt](double s) { return std::pow(std::exp(-k * s) - qt, alpha); };
    p.db = [alpha, k, qt](double s) {
        double q = std::exp(-k * s);
        return -alpha * k * q * std::pow(q - qt, alpha - 1.0);
    };
    p.d2b = [alpha, k, qt](double s) {
        double q = std::exp(-k * s);
        double Q = q - qt;
        // d/ds(-alpha k q Q^{a-1}) = alpha k^2 q Q^{a-1} + alpha (a-1) k^2 q^2 Q^{a-2}
        return alpha * k * k * q * (std::pow(Q, alpha - 1.0) + (alpha - 1.0) * q * std::pow(Q, alpha - 2.0));
    };
    return p;
}

double integrand_E(const BProfile& bp, double rho, double s) {
    double b1 = bp.db(s);
    double b0 = bp.b(s);
    if (b1 == 0.0 || b0 == 0.0)
        throw std::domain_error("profile ratio undefined where b or b' vanishes");
    return bp.d2b(s) / b1 + 2.0 * b1 / b0 + 2.0 * rho;
}

void validate_profile(const BProfile& bp, int samples) {
    for (int i = 0; i < samples; ++i) {
        double s = bp.t * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
        double v = bp.b(s);
        double d = bp.db(s);
        if (!(v >= 0.0)) throw std::runtime_error("profile is negative inside [0,t]");
        if (!(d <= 0.0)) throw std::runtime_error("profile is increasing inside [0,t]");
    }
}

LiYauForm LiYauForm::normalized() const {
    if (c_gamma == 0.0) throw std::domain_error("cannot normalize a form with zero gradient coefficient");
    LiYauForm out = *this;
    out.c_gamma = 1.0;
    out.c_z = c_z / c_gamma;
    out.c_rate = c_rate / c_gamma;
    out.c_const = c_const / c_gamma;
    return out;
}

LiYauForm coefficients_from_b(const BProfile& bp, double rho, double rel_tol) {
    validate_profile(bp);
    if (!bp.vanishes_at_t)
        throw std::invalid_argument("integrated route requires b(t) = b'(t) = 0");
    double bp0 = bp.db(0.0);
    if (!(bp0 < 0.0)) throw std::invalid_argument("profile must have b'(0) < 0");
    double norm = -bp0;

    auto rate_integrand = [&bp, rho](double s) { return bp.db(s) * integrand_E(bp, rho, s); };
    auto const_integrand = [&bp, rho](double s) {
        double e = integrand_E(bp, rho, s);
        return -bp.db(s) * e * e;
    };
    double a = bp.endpoint_order;
    QuadratureResult rate_q = integrate_singular(rate_integrand, 0.0, bp.t, 1.0, a - 2.0, rel_tol);
    QuadratureResult const_q = integrate_singular(const_integrand, 0.0, bp.t, 1.0, a - 3.0, rel_tol);

    LiYauForm f;
    f.rho = rho;
    f.t = bp.t;
    f.c_gamma = 1.0;
    f.c_z = bp.b(0.0) / norm;
    f.c_rate = rate_q.value / norm;
    f.c_const = 0.25 * const_q.value / norm;
    return f;
}

LiYauForm corollary22_form(double alpha, double rho, double t) {
    if (alpha <= 2.0) throw std::invalid_argument("closed form needs alpha > 2");
    if (t <= 0.0) throw std::invalid_argument("closed form needs t > 0");
    LiYauForm f;
    f.rho = rho;
    f.t = t;
    f.c_gamma = 1.0;
    f.c_z = t / alpha;
    double r = (3.0 * alpha - 1.0) / (alpha - 1.0);
    f.c_rate = r - 2.0 * rho * t / alpha;
    f.c_const = rho * rho * t / alpha - rho * r +
                (3.0 * alpha - 1.0) * (3.0 * alpha - 1.0) / (4.0 * (alpha - 2.0) * t);
    return f;
}

LiYauForm corollary24_form(double alpha, double rho, double t) {
    if (alpha <= 2.0) throw std::invalid_argument("closed form needs alpha > 2");
    if (rho <= 0.0) throw std::invalid_argument("exponential form needs rho > 0");
    if (t <= 0.0) throw std::invalid_argument("closed form needs t > 0");
    LiYauForm f;
    f.rho = rho;
    f.t = t;
    f.c_gamma = 1.0;
    double e2 = std::exp(-2.0 * rho * t / (3.0 * alpha));
    f.c_z = 1.5 * (1.0 - e2) / rho;
    f.c_rate = (3.0 * alpha - 1.0) / (alpha - 1.0) * e2;
    double top = 1.0 - 1.0 / (3.0 * alpha);
    f.c_const = 1.5 * rho * (top * top / (1.0 - 2.0 / alpha)) * e2 * e2 / (1.0 - e2);
    return f;
}

HarnackConstants corollary23_constants(double alpha) {
    LiYauForm f = corollary22_form(alpha, 0.0, 1.0);
    HarnackConstants h;
    h.A = 1.0 / f.c_rate;
    h.B = f.c_z / (f.t * f.c_rate);
    h.C = f.c_const * f.t / f.c_rate;
    return h;
}

MarginReport verify_liyau(const LiYauForm& form, const LogHeatDerivatives& d, double k_sigma,
                          double extra_budget) {
    MarginReport r;
    r.margin = form.c_rate * d.du_dt + form.c_const - form.c_gamma * d.gamma_u - form.c_z * d.zu_sq;
    double v = form.c_rate * d.du_dt_se;
    double s2 = v * v;
    v = form.c_gamma * d.gamma_u_se;
    s2 += v * v;
    v = form.c_z * d.zu_sq_se;
    s2 += v * v;
    r.sigma = std::sqrt(s2);
    r.threshold = k_sigma * r.sigma + extra_budget;
    r.pass = r.margin >= -r.threshold;
    return r;
}

}  // namespace subriem
