#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "subriem/liyau.hpp"
#include "subriem/vprofile.hpp"

using namespace subriem;

TEST_CASE("two-piece family closed forms at a pinned point") {
    const double eps = 0.1, gamma = 2.75;
    FamilyForms ff = family_closed_forms(eps, gamma);
    const double lambda = -std::log(eps) + 1.0 / (3.0 - gamma);
    CHECK(ff.lambda == doctest::Approx(lambda).epsilon(1e-12));
    // alpha = lambda (3 + 2 eps (3-gamma)/(gamma-2))
    const double alpha = lambda * (3.0 + 2.0 * eps * (3.0 - gamma) / (gamma - 2.0));
    CHECK(ff.alpha == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(ff.alpha == doctest::Approx(19.32793).epsilon(1e-5));
    // beta - alpha^2 = lambda^2 eps (3-g)^2/(g-2) [ (g+10)/(2g-5) - 4 eps/(g-2) ]
    const double gap = lambda * lambda * eps * (3.0 - gamma) * (3.0 - gamma) / (gamma - 2.0) *
                       ((gamma + 10.0) / (2.0 * gamma - 5.0) - 4.0 * eps / (gamma - 2.0));
    CHECK(ff.beta_minus_alpha2 == doctest::Approx(gap).epsilon(1e-12));
    CHECK(ff.beta_minus_alpha2 == doctest::Approx(8.2645).epsilon(1e-4));
    CHECK(ff.beta == doctest::Approx(alpha * alpha + gap).epsilon(1e-12));
    CHECK(ff.v_at_1 == doctest::Approx(lambda).epsilon(1e-12));
    CHECK(ff.c_ratio == doctest::Approx(ff.beta / (4.0 * ff.alpha)).epsilon(1e-12));
}

TEST_CASE("quadrature functionals agree with the family closed forms") {
    for (double eps : {0.01, 0.1, 0.3}) {
        for (double gamma : {2.6, 2.75, 2.9}) {
            VProfile v = VProfile::parametric(eps, gamma);
            CHECK(v.constraint_integral() == doctest::Approx(1.0).epsilon(1e-8));
            VFunctionals fn = functionals(v);
            FamilyForms ff = family_closed_forms(eps, gamma);
            CHECK(fn.alpha == doctest::Approx(ff.alpha).epsilon(1e-7));
            CHECK(fn.alpha_by_parts == doctest::Approx(ff.alpha).epsilon(1e-7));
            CHECK(fn.beta == doctest::Approx(ff.beta).epsilon(1e-7));
            CHECK(fn.v_at_1 == doctest::Approx(ff.v_at_1).epsilon(1e-9));
            CHECK(fn.constraint == doctest::Approx(1.0).epsilon(1e-8));
            // strict structural inequalities of admissible profiles
            CHECK(ff.alpha > ff.v_at_1 + 8.0);
            CHECK(ff.beta > ff.alpha * ff.alpha);
            CHECK(ff.c_ratio > 2.0);
        }
    }
}

TEST_CASE("grid profiles reproduce parametric functionals") {
    VProfile para = VProfile::parametric(0.2, 2.8);
    auto sampled = [&para](int n) {
        std::vector<double> nodes, values;
        for (int i = 1; i <= n; ++i) {
            double x = static_cast<double>(i) / n;
            nodes.push_back(x);
            values.push_back(para(x));
        }
        return VProfile::grid(nodes, values, 2.8).normalized();
    };
    // The chord interpolant is biased where the constraint integral puts its
    // x^(2-p) weight, and normalization spreads that bias into alpha and beta
    // at a slow n^(p-3) rate, so only coarse windows and a gentle refinement
    // trend are honest claims for sampled profiles.
    VFunctionals coarse = functionals(sampled(100));
    VFunctionals a = functionals(sampled(400));
    VFunctionals b = functionals(para);
    CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(2e-2));
    CHECK(a.beta == doctest::Approx(b.beta).epsilon(4e-2));
    CHECK(a.constraint == doctest::Approx(1.0).epsilon(1e-8));
    VFunctionals fine = functionals(sampled(1600));
    CHECK(std::abs(fine.alpha - b.alpha) < 0.9 * std::abs(coarse.alpha - b.alpha));

    // On the *same* interpolant the cell-by-cell closed forms and the generic
    // quadrature agree to quadrature accuracy; that equivalence is exact and
    // independent of how well the mesh resolves the parametric shape.
    VProfile g400 = sampled(400);
    std::vector<double> splits(g400.grid_nodes().begin(), g400.grid_nodes().end() - 1);
    VProfile wrapped400 = VProfile::callable([g400](double x) { return g400(x); },
                                             [g400](double x) { return g400.derivative(x); }, 2.8,
                                             splits)
                              .normalized();
    VFunctionals q = functionals(wrapped400);
    CHECK(a.alpha == doctest::Approx(q.alpha).epsilon(1e-8));
    CHECK(a.beta == doctest::Approx(q.beta).epsilon(1e-8));
}

TEST_CASE("grid closed-form functionals match the generic quadrature route") {
    std::vector<double> nodes = {0.15, 0.4, 0.7, 1.0};
    std::vector<double> values = {0.05, 0.9, 3.1, 7.0};
    VProfile g = VProfile::grid(nodes, values, 2.7).normalized();
    VFunctionals fast = functionals(g);
    // same shape evaluated through the generic callable machinery
    VProfile wrapped =
        VProfile::callable([g](double x) { return g(x); }, [g](double x) { return g.derivative(x); },
                           2.7, {0.15, 0.4, 0.7})
            .normalized();
    VFunctionals slow = functionals(wrapped);
    CHECK(fast.alpha == doctest::Approx(slow.alpha).epsilon(1e-8));
    CHECK(fast.beta == doctest::Approx(slow.beta).epsilon(1e-8));
    CHECK(fast.v_at_1 == doctest::Approx(slow.v_at_1).epsilon(1e-10));
}

TEST_CASE("normalization and scaling behave like the defining integrals") {
    VProfile raw = VProfile::parametric(0.1, 2.75).scaled(3.7);
    CHECK(raw.constraint_integral() == doctest::Approx(1.0 / 3.7).epsilon(1e-9));
    VProfile n = raw.normalized();
    CHECK(n.constraint_integral() == doctest::Approx(1.0).epsilon(1e-9));
    // normalizing an already-normalized profile is the identity
    VProfile nn = n.normalized();
    for (double x : {0.05, 0.3, 0.8, 1.0}) CHECK(nn(x) == doctest::Approx(n(x)).epsilon(1e-12));
}

TEST_CASE("inadmissible vanishing orders are rejected") {
    // p = 3 makes the constraint integral diverge at 0
    VProfile cubic = VProfile::callable([](double x) { return x * x * x; },
                                        [](double x) { return 3.0 * x * x; }, 3.0);
    CHECK_THROWS(cubic.normalized());
    // p = 2.2 keeps the constraint finite but beta diverges
    VProfile slow = VProfile::callable([](double x) { return std::pow(x, 2.2); },
                                       [](double x) { return 2.2 * std::pow(x, 1.2); }, 2.2);
    VProfile sn = slow.normalized();
    CHECK_THROWS(functionals(sn));
}

TEST_CASE("inequality coefficients derived from a profile") {
    VProfile v = VProfile::parametric(0.1, 2.75);
    VFunctionals fn = functionals(v);
    for (double rho : {-1.0, 0.0, 1.0}) {
        const double t = 0.7;
        LiYauForm f = liyau_from_V(v, rho, t);
        CHECK(f.c_gamma == doctest::Approx(fn.v_at_1).epsilon(1e-8));
        CHECK(f.c_z == doctest::Approx(t).epsilon(1e-12));
        CHECK(f.c_rate == doctest::Approx(fn.alpha - 2.0 * rho * t).epsilon(1e-7));
        const double ar = fn.alpha - 2.0 * rho * t;
        CHECK(f.c_const ==
              doctest::Approx((fn.beta - fn.alpha * fn.alpha + ar * ar) / (4.0 * t)).epsilon(1e-6));
    }
}

TEST_CASE("profile transplanted from a power weight matches the closed form") {
    for (double alpha : {2.6, 3.0, 5.0}) {
        for (double rho : {-1.0, 0.0, 1.0}) {
            for (double t : {0.5, 1.0}) {
                VProfile v = v_from_b(power_profile(alpha, t));
                CHECK(v.near_zero_power() == doctest::Approx(3.0 - 1.0 / alpha).epsilon(1e-12));
                LiYauForm via_v = liyau_from_V(v, rho, t).normalized();
                LiYauForm closed = corollary22_form(alpha, rho, t).normalized();
                CHECK(std::abs(via_v.c_z - closed.c_z) < 1e-6 * (1.0 + std::abs(closed.c_z)));
                CHECK(std::abs(via_v.c_rate - closed.c_rate) <
                      1e-6 * (1.0 + std::abs(closed.c_rate)));
                CHECK(std::abs(via_v.c_const - closed.c_const) <
                      1e-6 * (1.0 + std::abs(closed.c_const)));
            }
        }
    }
}

TEST_CASE("native-scale constants are invariant under stretching and scaling") {
    auto v = [](double x) { return std::pow(x, 2.7); };
    auto dv = [](double x) { return 2.7 * std::pow(x, 1.7); };
    UnnormalizedConstants base = unnormalized_constants(v, dv, 2.0, 2.7, 0.3);

    const double lam = 1.9;
    auto vs = [lam](double x) { return std::pow(lam * x, 2.7) / (lam * lam * lam); };
    auto dvs = [lam](double x) { return 2.7 * std::pow(lam * x, 1.7) / (lam * lam); };
    UnnormalizedConstants stretched = unnormalized_constants(vs, dvs, 2.0 / lam, 2.7, 0.3);
    CHECK(stretched.C == doctest::Approx(base.C).epsilon(1e-8));
    CHECK(stretched.t == doctest::Approx(base.t).epsilon(1e-8));

    // scaling the weight compresses the total time by c, so the curvature must
    // co-transform as rho -> c^2 rho to describe the same inequality
    auto vc = [v](double x) { return 5.0 * v(x); };
    auto dvc = [dv](double x) { return 5.0 * dv(x); };
    UnnormalizedConstants scaled = unnormalized_constants(vc, dvc, 2.0, 2.7, 25.0 * 0.3);
    CHECK(scaled.C == doctest::Approx(base.C).epsilon(1e-8));
    CHECK(scaled.t == doctest::Approx(base.t / 5.0).epsilon(1e-8));

    // at zero curvature the scale invariance is unconditional
    UnnormalizedConstants flat = unnormalized_constants(v, dv, 2.0, 2.7, 0.0);
    UnnormalizedConstants flat5 = unnormalized_constants(vc, dvc, 2.0, 2.7, 0.0);
    CHECK(flat5.C == doctest::Approx(flat.C).epsilon(1e-8));
}

TEST_CASE("small search run keeps the Harnack ratio above two") {
    BestCResult r = best_C_rho0(64, 8, 1);
    CHECK(r.evaluated >= 64);
    CHECK(r.all_above_2);
    CHECK(r.min_c_seen > 2.0);
    CHECK(r.family_c > 2.0);
    CHECK(r.refined_c <= r.family_c + 1e-9);
    // the family optimum sits near the pure-cubic corner, value just under 3.94
    CHECK(r.refined_c > 3.8);
    CHECK(r.refined_c < 4.1);
    // 8 nodes is too coarse to reproduce the continuum optimum (the chord
    // bias near zero inflates the functionals), so only the ratio's floor and
    // a sane magnitude are claimed here; the default node count gets closer.
    CHECK(r.grid_c > 2.0);
    CHECK(r.grid_c < 8.0);
    CHECK(!r.family_trace.empty());
    CHECK(r.grid_nodes.size() == 8);
    for (double gv : r.grid_values) CHECK(gv > 0.0);
}

TEST_CASE("family-only search skips the grid stage") {
    BestCResult r = best_C_rho0(48, 0, 1);
    CHECK(r.family_c > 2.0);
    CHECK(r.grid_nodes.empty());
    CHECK(r.grid_c == 0.0);
}

TEST_CASE("long-time bracketing of the logarithmic rate") {
    std::vector<double> ts = {10.0, 15.0, 20.0, 25.0};
    DecayResult d = long_time_decay(1.0, ts, 2.75, 1.0);
    CHECK(d.skipped == 0);
    REQUIRE(d.width.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(d.upper[i] > d.lower[i]);
        CHECK(d.width[i] == doctest::Approx(d.upper[i] - d.lower[i]).epsilon(1e-12));
        if (i > 0) CHECK(d.width[i] < d.width[i - 1]);
        CHECK(std::isfinite(d.order_ratio[i]));
        CHECK(d.order_ratio[i] > 0.0);
    }
    // ln(width) shrinks at a rate comparable to rho/3
    CHECK(d.slope > -0.6);
    CHECK(d.slope < -0.1);
}
