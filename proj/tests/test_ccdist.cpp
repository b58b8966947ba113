#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subriem/ccdist.hpp"
#include "subriem/field.hpp"

using namespace subriem;

namespace {

PathConfig quick_cfg() {
    PathConfig cfg;
    cfg.intervals = 16;
    cfg.starts = 3;
    cfg.max_iter = 200;
    return cfg;
}

}  // namespace

TEST_CASE("coincident endpoints cost nothing") {
    for (Model m : {Model::Heisenberg, Model::SU2, Model::SL2}) {
        GroupElement e = identity(m);
        CcResult r = cc_distance(m, e, e, quick_cfg());
        CHECK(r.path.converged);
        CHECK(r.distance < 1e-6);
    }
}

TEST_CASE("horizontal segments are recovered at their exact length") {
    for (Model m : {Model::Heisenberg, Model::SU2, Model::SL2}) {
        for (double s : {0.5, 1.0, 2.0}) {
            GroupElement e = identity(m);
            GroupElement g = group_exp(m, {s, 0.0, 0.0});
            CcResult r = cc_distance(m, e, g, quick_cfg());
            CHECK(r.path.converged);
            CHECK(r.path.endpoint_gap <= quick_cfg().endpoint_tol);
            CHECK(r.distance <= s * 1.01);
            CHECK(r.distance >= s * 0.8);  // cannot beat the geodesic by much
        }
    }
}

TEST_CASE("mixed horizontal directions on the flat model") {
    GroupElement e = identity(Model::Heisenberg);
    // exp(aX + bY) with no vertical part: straight segment of length |(a,b)|
    GroupElement g = group_exp(Model::Heisenberg, {0.6, -0.8, 0.0});
    CcResult r = cc_distance(Model::Heisenberg, e, g, quick_cfg());
    CHECK(r.path.converged);
    CHECK(r.distance <= 1.0 * 1.01);
}

TEST_CASE("purely vertical displacements cost the square-root scale") {
    // d(e, exp(cZ)) = sqrt(4 pi c) on the flat model < 2 sqrt(c) pi-ish; we
    // only check the coarse window since the solver gives an upper bound
    GroupElement e = identity(Model::Heisenberg);
    GroupElement g = group_exp(Model::Heisenberg, {0.0, 0.0, 0.25});
    PathConfig cfg = quick_cfg();
    cfg.starts = 5;
    CcResult r = cc_distance(Model::Heisenberg, e, g, cfg);
    CHECK(r.path.converged);
    const double exact = std::sqrt(4.0 * 3.14159265358979 * 0.25);
    CHECK(r.distance >= 0.9 * exact);
    CHECK(r.distance <= 1.25 * exact);
}

TEST_CASE("distance bound depends only on the relative displacement") {
    PathConfig cfg = quick_cfg();
    GroupElement e = identity(Model::SU2);
    GroupElement h = group_exp(Model::SU2, {0.4, 0.25, 0.1});
    GroupElement k = group_exp(Model::SU2, {-0.3, 0.8, 0.45});
    CcResult base = cc_distance(Model::SU2, e, h, cfg);
    CcResult moved = cc_distance(Model::SU2, k, multiply(k, h), cfg);
    CHECK(base.path.converged);
    CHECK(moved.path.converged);
    CHECK(moved.distance == doctest::Approx(base.distance).epsilon(1e-2));
}

TEST_CASE("triangle inequality and symmetry within solver slack") {
    PathConfig cfg = quick_cfg();
    const Model m = Model::SL2;
    GroupElement e = identity(m);
    GroupElement a = group_exp(m, {0.5, 0.2, 0.0});
    GroupElement b = group_exp(m, {-0.1, 0.6, 0.1});
    double d_ab = cc_distance(m, a, b, cfg).distance;
    double d_ba = cc_distance(m, b, a, cfg).distance;
    CHECK(d_ab == doctest::Approx(d_ba).epsilon(0.05));
    double d_ea = cc_distance(m, e, a, cfg).distance;
    double d_eb = cc_distance(m, e, b, cfg).distance;
    CHECK(d_eb <= d_ea + d_ab + 0.05 * (1.0 + d_eb));
}

TEST_CASE("path states integrate the reported controls") {
    GroupElement e = identity(Model::SU2);
    GroupElement g = group_exp(Model::SU2, {0.7, 0.4, 0.0});
    CcResult r = cc_distance(Model::SU2, e, g, quick_cfg());
    auto states = path_states(e, r.path);
    REQUIRE(states.size() == r.path.u1.size() + 1);
    CHECK(coord_distance(states.front(), e) < 1e-12);
    CHECK(coord_distance(states.back(), r.path.endpoint) < 1e-9);
    CHECK(coord_distance(states.back(), g) < 10.0 * quick_cfg().endpoint_tol);
    for (const auto& s : states) CHECK(membership_residual(s) < 1e-9);
}

TEST_CASE("gradient bound certifies the distance estimate") {
    // |f(y) - f(x)| <= d(x,y) for f with Gamma(f) <= 1; f = x-coordinate
    ScalarField fx = coordinate(Model::Heisenberg, 1);
    GroupElement e = identity(Model::Heisenberg);
    GroupElement g = group_exp(Model::Heisenberg, {0.8, 0.3, 0.2});
    CcResult r = cc_distance(Model::Heisenberg, e, g, quick_cfg());
    CHECK(r.path.converged);
    CHECK(std::abs(fx(g) - fx(e)) <= r.distance + 1e-3);
}

TEST_CASE("diameter probe on the compact model") {
    PathConfig cfg = quick_cfg();
    cfg.intervals = 12;
    cfg.starts = 2;
    cfg.stages = 4;  // final penalty weight 1e5 resolves endpoint gaps ~1e-5
    cfg.endpoint_tol = 1e-4;
    cfg.max_iter = 120;
    DiameterReport rep = diameter_probe(4, cfg, 2);
    CHECK(rep.pairs == 4);
    REQUIRE(rep.distances.size() == 4);
    CHECK(rep.converged == 4);
    CHECK(rep.max_distance > 0.5);
    CHECK(rep.max_distance < 10.0);
    for (double d : rep.distances) CHECK(d >= 0.0);
}
