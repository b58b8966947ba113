#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "subriem/field.hpp"
#include "subriem/gamma.hpp"
#include "subriem/spectral.hpp"

using namespace subriem;

TEST_CASE("invariant-measure samples live on the group and have the right moments") {
    const int n = 4096;
    auto pts = haar_samples_su2(21, n);
    REQUIRE(pts.size() == n);
    double mean_re = 0.0, mean_abs2 = 0.0, mean_q0_4 = 0.0;
    for (const auto& g : pts) {
        CHECK(membership_residual(g) < 1e-12);
        mean_re += g.c[0];
        mean_abs2 += g.c[0] * g.c[0] + g.c[1] * g.c[1];
        mean_q0_4 += g.c[0] * g.c[0] * g.c[0] * g.c[0];
    }
    mean_re /= n;
    mean_abs2 /= n;
    mean_q0_4 /= n;
    // E[re] = 0, E[|entry|^2] = 1/2, E[q0^4] = 1/8 on the unit three-sphere
    CHECK(std::abs(mean_re) < 3.0 * std::sqrt(0.25 / n));
    CHECK(std::abs(mean_abs2 - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(mean_q0_4 - 0.125) < 4.0 * std::sqrt(0.1 / n));

    auto again = haar_samples_su2(21, n);
    CHECK(coord_distance(pts[17], again[17]) == 0.0);
    auto other = haar_samples_su2(22, n);
    CHECK(coord_distance(pts[17], other[17]) > 0.0);
}

TEST_CASE("squared-norm decay of a pure matrix entry has unit rate") {
    // f = Re m00 spans the spin one-half level: P_t f = exp(-t/2) f, so the
    // squared norm decays like exp(-t)
    ScalarField f = coordinate(Model::SU2, 0);
    std::vector<double> ts = {0.5, 1.0, 1.5};
    SpectralConfig cfg;
    cfg.haar_samples = 48;
    cfg.inner_paths = 48;
    cfg.step = 2e-2;
    cfg.center_samples = 2048;
    cfg.seed = 5;
    SpectralEstimate est = variance_decay(f, ts, cfg);
    REQUIRE(est.kept.size() == 3);
    CHECK(est.decay_rate > 0.4);
    CHECK(est.decay_rate < 1.6);
    CHECK(est.ci_lo <= est.decay_rate);
    CHECK(est.ci_hi >= est.decay_rate);
    CHECK(est.f_variance == doctest::Approx(0.25).epsilon(0.15));
    CHECK(std::abs(est.f_mean) < 0.05);
    for (double v : est.variance) CHECK(v > 0.0);
    CHECK(est.residual_rms <= 0.75);

    SpectralEstimate rerun = variance_decay(f, ts, cfg);
    CHECK(rerun.decay_rate == est.decay_rate);
}

TEST_CASE("a constant function is rejected with a clear diagnostic") {
    ScalarField c = constant(Model::SU2, 2.0);
    std::vector<double> ts = {0.5, 1.0};
    SpectralConfig cfg;
    cfg.haar_samples = 16;
    cfg.inner_paths = 8;
    cfg.center_samples = 64;
    bool threw = false;
    try {
        variance_decay(c, ts, cfg);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("constant") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("spectral-gap inequality holds with a computable margin") {
    ScalarField f = coordinate(Model::SU2, 0);
    PoincareReport r = poincare_check(f, 4096, 3);
    CHECK(r.samples == 4096);
    CHECK(r.pass);
    // eigenfunction saturates a third of the bound: margin = 3 E Gamma - Var
    // = 3 * (1/2)(1/4) - 1/4 = 1/8
    CHECK(std::abs(r.margin - 0.125) < 6.0 * r.sigma);
    CHECK(r.var_f == doctest::Approx(0.25).epsilon(0.1));
    CHECK(r.sigma > 0.0);
}

TEST_CASE("margin scales quadratically and vanishes for constants") {
    ScalarField f = coordinate(Model::SU2, 2);
    PoincareReport one = poincare_check(f, 2048, 9);
    PoincareReport ten = poincare_check(10.0 * f, 2048, 9);
    CHECK(ten.margin == doctest::Approx(100.0 * one.margin).epsilon(1e-10));
    CHECK(ten.sigma == doctest::Approx(100.0 * one.sigma).epsilon(1e-10));

    PoincareReport flat = poincare_check(constant(Model::SU2, 3.0), 512, 4);
    CHECK(std::abs(flat.margin) < 1e-25);
    CHECK(flat.sigma == 0.0);
    CHECK(flat.pass);
}

TEST_CASE("inequality margin stays nonnegative across the function suite") {
    auto fields = test_function_suite(Model::SU2, 61, 25);
    for (const auto& f : fields) {
        PoincareReport r = poincare_check(f, 2048, 7);
        CHECK(r.margin >= -3.0 * r.sigma);
    }
}

TEST_CASE("small-time density fit exposes the volume-growth order") {
    ShortTimeConfig lo;
    lo.paths = 3000;
    lo.t_points = 5;
    lo.seed = 31;
    UltracontractivityFit a = ultracontractivity_probe(lo);
    ShortTimeConfig hi = lo;
    hi.paths = 48000;
    UltracontractivityFit b = ultracontractivity_probe(hi);
    CHECK(b.decay_order == doctest::Approx(2.0).epsilon(0.25));
    CHECK(std::isfinite(a.amplitude_log));
    // the fit tightens as the sample grows
    CHECK(b.residual_rms < a.residual_rms);
    CHECK(b.detail.t.size() == 5);
}
