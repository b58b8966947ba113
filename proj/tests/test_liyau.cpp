#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subriem/liyau.hpp"
#include "subriem/optim.hpp"

using namespace subriem;

TEST_CASE("power profile basics and the E integrand") {
    BProfile bp = power_profile(3.0, 1.0);
    CHECK(bp.t == 1.0);
    CHECK(bp.endpoint_order == doctest::Approx(3.0));
    CHECK(bp.b(0.0) == doctest::Approx(1.0));
    CHECK(bp.db(0.0) == doctest::Approx(-3.0));
    CHECK(bp.b(1.0) == doctest::Approx(0.0));
    validate_profile(bp);

    // E = b''/b' + 2 b'/b + 2 rho = -(3a-1)/(t-s) + 2 rho for the power profile
    CHECK(integrand_E(bp, 1.0, 0.5) == doctest::Approx(-14.0).epsilon(1e-10));
    CHECK(integrand_E(bp, 0.0, 0.75) == doctest::Approx(-32.0).epsilon(1e-10));

    // alpha = 1/3 makes E constant equal to 2 rho (the borderline exponent);
    // built by hand because the integrated form needs alpha > 2
    BProfile third;
    third.t = 1.0;
    third.endpoint_order = 1.0 / 3.0;
    third.b = [](double s) { return std::pow(1.0 - s, 1.0 / 3.0); };
    third.db = [](double s) { return -(1.0 / 3.0) * std::pow(1.0 - s, -2.0 / 3.0); };
    third.d2b = [](double s) { return -(2.0 / 9.0) * std::pow(1.0 - s, -5.0 / 3.0); };
    for (double s : {0.0, 0.3, 0.9}) {
        CHECK(integrand_E(third, 1.0, s) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(integrand_E(third, -1.0, s) == doctest::Approx(-2.0).epsilon(1e-9));
    }
}

TEST_CASE("profile constructors reject out-of-range parameters") {
    CHECK_THROWS(power_profile(2.0, 1.0));
    CHECK_THROWS(power_profile(3.0, 0.0));
    CHECK_THROWS(exp_profile(3.0, 0.0, 1.0));
    CHECK_THROWS(exp_profile(1.5, 1.0, 1.0));

    BProfile rising;
    rising.t = 1.0;
    rising.b = [](double s) { return 1.0 + s; };
    rising.db = [](double) { return 1.0; };
    rising.d2b = [](double) { return 0.0; };
    CHECK_THROWS(validate_profile(rising));
}

TEST_CASE("closed power-profile coefficients at pinned parameter points") {
    LiYauForm f = corollary22_form(3.0, 0.0, 1.0);
    CHECK(f.c_gamma == 1.0);
    CHECK(f.c_z == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(f.c_rate == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(f.c_const == doctest::Approx(16.0).epsilon(1e-14));

    LiYauForm g = corollary22_form(3.0, 1.0, 1.0);
    CHECK(g.c_rate == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(g.c_const == doctest::Approx(1.0 / 3.0 - 4.0 + 16.0).epsilon(1e-14));

    LiYauForm h = corollary22_form(5.0, -1.0, 2.0);
    CHECK(h.c_z == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(h.c_rate == doctest::Approx(14.0 / 4.0 + 4.0 / 5.0).epsilon(1e-14));
    // rho^2 t / a - rho (3a-1)/(a-1) + (3a-1)^2 / (4 (a-2) t)
    CHECK(h.c_const == doctest::Approx(2.0 / 5.0 + 14.0 / 4.0 + 196.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("quadrature route reproduces the closed forms") {
    for (double alpha : {2.5, 3.0, 5.0}) {
        for (double rho : {-1.0, 0.0, 1.0}) {
            for (double t : {0.5, 1.0}) {
                LiYauForm closed = corollary22_form(alpha, rho, t);
                LiYauForm quad = coefficients_from_b(power_profile(alpha, t), rho);
                CHECK(std::abs(quad.c_z - closed.c_z) < 1e-6 * (1.0 + std::abs(closed.c_z)));
                CHECK(std::abs(quad.c_rate - closed.c_rate) <
                      1e-6 * (1.0 + std::abs(closed.c_rate)));
                CHECK(std::abs(quad.c_const - closed.c_const) <
                      1e-6 * (1.0 + std::abs(closed.c_const)));
            }
        }
    }
    // exponential profile against its closed form
    LiYauForm closed = corollary24_form(3.0, 1.0, 1.0);
    LiYauForm quad = coefficients_from_b(exp_profile(3.0, 1.0, 1.0), 1.0);
    CHECK(std::abs(quad.c_z - closed.c_z) < 1e-6 * (1.0 + std::abs(closed.c_z)));
    CHECK(std::abs(quad.c_rate - closed.c_rate) < 1e-6 * (1.0 + std::abs(closed.c_rate)));
    CHECK(std::abs(quad.c_const - closed.c_const) < 1e-6 * (1.0 + std::abs(closed.c_const)));
}

TEST_CASE("exponential-profile form flows into the power form as rho vanishes") {
    LiYauForm lim = corollary22_form(3.0, 0.0, 1.0);
    LiYauForm near = corollary24_form(3.0, 1e-5, 1.0);
    CHECK(near.c_z == doctest::Approx(lim.c_z).epsilon(2e-4));
    CHECK(near.c_rate == doctest::Approx(lim.c_rate).epsilon(2e-4));
    CHECK(near.c_const == doctest::Approx(lim.c_const).epsilon(2e-4));
}

TEST_CASE("exponential-profile coefficients at a pinned point") {
    const double a = 3.0, rho = 1.0, t = 1.0;
    const double e2 = std::exp(-2.0 * rho * t / (3.0 * a));
    LiYauForm f = corollary24_form(a, rho, t);
    CHECK(f.c_z == doctest::Approx(1.5 * (1.0 - e2) / rho).epsilon(1e-13));
    CHECK(f.c_rate == doctest::Approx(4.0 * e2).epsilon(1e-13));
    const double want = 1.5 * rho * ((1.0 - 1.0 / 9.0) * (1.0 - 1.0 / 9.0) / (1.0 - 2.0 / 3.0)) *
                        e2 * e2 / (1.0 - e2);
    CHECK(f.c_const == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("rate-bound constants and their minimum over the exponent") {
    HarnackConstants hc = corollary23_constants(3.0);
    CHECK(hc.A == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(hc.B == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(hc.C == doctest::Approx(4.0).epsilon(1e-14));

    double amin = golden_section_min(
        [](double a) { return corollary23_constants(a).C; }, 2.2, 8.0);
    CHECK(amin == doctest::Approx(2.0 + std::sqrt(5.0 / 3.0)).epsilon(1e-5));
    CHECK(corollary23_constants(amin).C == doctest::Approx(3.9364916731).epsilon(1e-8));
    // the constant stays above 2 on a dense exponent grid
    for (double a = 2.05; a < 12.0; a += 0.05) CHECK(corollary23_constants(a).C > 2.0);
}

TEST_CASE("normalization divides through by the gradient coefficient") {
    LiYauForm f;
    f.c_gamma = 2.0;
    f.c_z = 1.0;
    f.c_rate = 6.0;
    f.c_const = 8.0;
    LiYauForm n = f.normalized();
    CHECK(n.c_gamma == doctest::Approx(1.0));
    CHECK(n.c_z == doctest::Approx(0.5));
    CHECK(n.c_rate == doctest::Approx(3.0));
    CHECK(n.c_const == doctest::Approx(4.0));
}

TEST_CASE("margin evaluation with error propagation") {
    LiYauForm form;
    form.c_gamma = 1.0;
    form.c_z = 2.0;
    form.c_rate = 3.0;
    form.c_const = 4.0;
    LogHeatDerivatives d;
    d.gamma_u = 1.0;
    d.zu_sq = 0.5;
    d.du_dt = -1.0;
    d.gamma_u_se = 0.1;
    d.zu_sq_se = 0.2;
    d.du_dt_se = 0.3;
    MarginReport r = verify_liyau(form, d);
    CHECK(r.margin == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.sigma == doctest::Approx(std::sqrt(0.81 + 0.01 + 0.16)).epsilon(1e-12));
    CHECK(r.threshold == doctest::Approx(3.0 * r.sigma).epsilon(1e-12));
    CHECK(r.pass);

    MarginReport tight = verify_liyau(form, d, 0.0, 0.5);
    CHECK(tight.threshold == doctest::Approx(0.5));
    CHECK(!tight.pass);
}
