// Acceptance gate: every release-blocking numerical claim of the library, one
// test case per criterion. Each case prints exactly one line
//   criterion-NN: PASS|FAIL (details)
// and the ctest registration keys on that line, so an empty or misfiltered run
// cannot pass vacuously.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "subriem/ccdist.hpp"
#include "subriem/field.hpp"
#include "subriem/gamma.hpp"
#include "subriem/group.hpp"
#include "subriem/heat_grid.hpp"
#include "subriem/heat_mc.hpp"
#include "subriem/liyau.hpp"
#include "subriem/spectral.hpp"
#include "subriem/vprofile.hpp"

using namespace subriem;

namespace {

// ---- pinned tolerances and budgets ----------------------------------------
constexpr double kGamma2RelTol = 1e-8;        // criterion 1
constexpr double kCommutatorTol = 1e-9;       // criterion 2
constexpr double kBoundMarginTol = -1e-9;     // criterion 3
constexpr double kCoeffRelTol = 1e-6;         // criteria 4 and 5
constexpr double kSpotTol = 1e-12;            // closed-form spot values
constexpr double kConstraintTol = 1e-8;       // criterion 5
constexpr double kHarnackFloor = 2.0;         // criterion 6
constexpr double kMomentSigmas = 3.0;         // criterion 7
constexpr double kSlopeLo = -2.3;             // criterion 9
constexpr double kSlopeHi = -1.7;
constexpr double kRateHardBound = 2.0 / 3.0 - 0.1;  // criterion 10
constexpr double kRateSoftTol = 0.3;
constexpr double kSegmentSlack = 1.01;        // criterion 11
constexpr double kDiameterDrift = 0.10;
constexpr double kBudget1Seconds = 120.0;     // stated runtime budgets
constexpr double kBudget7Seconds = 60.0;
constexpr double kBudget9Seconds = 600.0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

double form_gap(const LiYauForm& a, const LiYauForm& b) {
    return std::max({rel_gap(a.c_gamma, b.c_gamma), rel_gap(a.c_z, b.c_z),
                     rel_gap(a.c_rate, b.c_rate), rel_gap(a.c_const, b.c_const)});
}

const std::vector<Model> kModels = {Model::Heisenberg, Model::SU2, Model::SL2};

}  // namespace

TEST_CASE("criterion-01") {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int samples = 0;
    for (Model m : kModels) {
        auto fields = test_function_suite(m, 1001, 100);
        auto points = test_point_suite(m, 2001, 20);
        GammaReport rep = check_gamma2_identity(m, fields, points);
        worst = std::max(worst, rep.max_rel_gap);
        samples += static_cast<int>(rep.samples.size());
    }
    const double secs = seconds_since(t0);
    const bool ok = worst <= kGamma2RelTol && samples == 3 * 100 * 20 && secs <= kBudget1Seconds;
    std::printf("criterion-01: %s (max rel gap %.3e <= %.0e over %d samples, %.1fs <= %.0fs)\n",
                ok ? "PASS" : "FAIL", worst, kGamma2RelTol, samples, secs, kBudget1Seconds);
    CHECK(ok);
}

TEST_CASE("criterion-02") {
    double worst = 0.0;
    int checked = 0;
    for (Model m : kModels) {
        auto fields = test_function_suite(m, 1001, 100);
        auto points = test_point_suite(m, 2001, 20);
        CommutatorReport r = check_commutators(m, fields, points);
        worst = std::max({worst, r.xy_minus_z, r.xz_plus_rho_y, r.yz_minus_rho_x, r.lz_commutator,
                          r.mixed_cancellation, r.gamma_routes, r.z_routes});
        checked += r.checked;
    }
    const bool ok = worst <= kCommutatorTol && checked == 3 * 100 * 20;
    std::printf("criterion-02: %s (worst operator-identity error %.3e <= %.0e, %d samples)\n",
                ok ? "PASS" : "FAIL", worst, kCommutatorTol, checked);
    CHECK(ok);
}

TEST_CASE("criterion-03") {
    double worst = 0.0;
    for (Model m : kModels) {
        auto fields = test_function_suite(m, 1001, 100);
        auto points = test_point_suite(m, 2001, 20);
        for (double lambda : {0.1, 1.0, 10.0}) {
            BoundReport r = gamma2_lower_bound_check(m, fields, points, lambda);
            worst = std::min(worst, r.min_margin);
        }
    }
    const bool ok = worst >= kBoundMarginTol;
    std::printf("criterion-03: %s (worst lower-bound margin %.3e >= %.0e)\n", ok ? "PASS" : "FAIL",
                worst, kBoundMarginTol);
    CHECK(ok);
}

TEST_CASE("criterion-04") {
    double worst = 0.0;
    for (double alpha : {2.5, 3.0, 5.0, 10.0}) {
        for (double t : {0.1, 1.0, 10.0}) {
            for (double rho : {-1.0, 0.0, 1.0}) {
                worst = std::max(worst, form_gap(coefficients_from_b(power_profile(alpha, t), rho),
                                                 corollary22_form(alpha, rho, t)));
            }
            worst = std::max(worst, form_gap(coefficients_from_b(exp_profile(alpha, 1.0, t), 1.0),
                                             corollary24_form(alpha, 1.0, t)));
        }
    }
    LiYauForm spot = corollary22_form(3.0, 0.0, 1.0);
    const bool spot_ok = std::abs(spot.c_z - 1.0 / 3.0) <= kSpotTol &&
                         std::abs(spot.c_rate - 4.0) <= kSpotTol &&
                         std::abs(spot.c_const - 16.0) <= kSpotTol;
    const bool ok = worst <= kCoeffRelTol && spot_ok;
    std::printf(
        "criterion-04: %s (quadrature vs closed rel gap %.3e <= %.0e; spot (1/3, 4, 16) %s)\n",
        ok ? "PASS" : "FAIL", worst, kCoeffRelTol, spot_ok ? "exact" : "WRONG");
    CHECK(ok);
}

TEST_CASE("criterion-04-literal-spot") {
    // A quoted reference value for this spot is c_const = 64 at alpha=3,
    // rho=0, t=1. That value is inconsistent with the b-profile integration,
    // the exponential profile's rho -> 0 limit, and the V-route constant
    // beta/(4 alpha), all of which give 16 (= 64/4, a dropped quarter
    // factor). The implementation keeps the internally consistent value, so
    // this literal assertion fails by design and stays red.
    LiYauForm spot = corollary22_form(3.0, 0.0, 1.0);
    const bool ok = std::abs(spot.c_const - 64.0) <= 1e-9;
    std::printf("criterion-04-literal-spot: %s (stated c_const 64 vs computed %.12g)\n",
                ok ? "PASS" : "FAIL", spot.c_const);
    CHECK(ok);
}

TEST_CASE("criterion-05") {
    double worst_closed = 0.0, worst_constraint = 0.0, worst_pipeline = 0.0;
    bool strict_ok = true;
    for (double eps : {0.01, 0.05, 0.1, 0.3}) {
        for (double gamma : {2.6, 2.75, 2.9}) {
            VProfile v = VProfile::parametric(eps, gamma);
            VFunctionals fn = functionals(v);
            FamilyForms ff = family_closed_forms(eps, gamma);
            worst_constraint = std::max(worst_constraint, std::abs(fn.constraint - 1.0));
            worst_closed = std::max({worst_closed, rel_gap(fn.alpha, ff.alpha),
                                     rel_gap(fn.alpha_by_parts, ff.alpha),
                                     rel_gap(fn.beta, ff.beta), rel_gap(fn.v_at_1, ff.v_at_1)});
            strict_ok = strict_ok && ff.alpha > ff.v_at_1 + 8.0 && ff.beta > ff.alpha * ff.alpha;
        }
    }
    for (double alpha : {2.5, 3.0, 5.0, 10.0}) {
        for (double rho : {-1.0, 0.0, 1.0}) {
            for (double t : {0.5, 1.0}) {
                LiYauForm via_v = liyau_from_V(v_from_b(power_profile(alpha, t)), rho, t).normalized();
                LiYauForm closed = corollary22_form(alpha, rho, t).normalized();
                worst_pipeline = std::max(worst_pipeline, form_gap(via_v, closed));
            }
        }
    }
    const bool ok = worst_constraint <= kConstraintTol && worst_closed <= kCoeffRelTol &&
                    worst_pipeline <= kCoeffRelTol && strict_ok;
    std::printf(
        "criterion-05: %s (constraint gap %.3e <= %.0e, closed-form gap %.3e and transplant gap "
        "%.3e <= %.0e, strict inequalities %s)\n",
        ok ? "PASS" : "FAIL", worst_constraint, kConstraintTol, worst_closed, worst_pipeline,
        kCoeffRelTol, strict_ok ? "hold" : "VIOLATED");
    CHECK(ok);
}

TEST_CASE("criterion-06") {
    BestCResult r = best_C_rho0(1200, 24, 1);
    const bool ok = r.all_above_2 && r.min_c_seen > kHarnackFloor && r.evaluated >= 1200 &&
                    r.grid_c > kHarnackFloor;
    std::printf(
        "criterion-06: %s (min C %.6f > %.0f over %d profiles; family %.6f, refined %.6f, grid "
        "%.6f)\n",
        ok ? "PASS" : "FAIL", r.min_c_seen, kHarnackFloor, r.evaluated, r.family_c, r.refined_c,
        r.grid_c);
    CHECK(ok);
}

TEST_CASE("criterion-07") {
    const auto t0 = std::chrono::steady_clock::now();
    GroupModel gm = make_model(Model::Heisenberg);
    GroupElement e = identity(Model::Heisenberg);
    DiffusionConfig cfg;
    cfg.paths = 100000;
    cfg.step = 1e-2;
    cfg.seed = 41;
    bool moments_ok = true;
    double worst_pull = 0.0;
    for (double t : {0.25, 0.5, 1.0}) {
        HeatEstimate r = estimate_Ptf(
            gm, e,
            [](const GroupElement& g) { return g.c[1] * g.c[1] + g.c[5] * g.c[5]; }, t, cfg);
        const double pull = std::abs(r.value - 4.0 * t) / r.std_error;
        worst_pull = std::max(worst_pull, pull);
        moments_ok = moments_ok && pull <= kMomentSigmas;
    }
    HeatEstimate unit = estimate_Ptf(gm, e, [](const GroupElement&) { return 1.0; }, 0.5, cfg);
    const bool unit_ok = unit.value == 1.0 && unit.std_error == 0.0;
    const double secs = seconds_since(t0);
    const bool ok = moments_ok && unit_ok && secs <= kBudget7Seconds;
    std::printf(
        "criterion-07: %s (worst |E[x^2+y^2] - 4t| pull %.2f sigma <= %.0f, constant exact %s, "
        "%.1fs <= %.0fs)\n",
        ok ? "PASS" : "FAIL", worst_pull, kMomentSigmas, unit_ok ? "yes" : "NO", secs,
        kBudget7Seconds);
    CHECK(ok);
}

TEST_CASE("criterion-08") {
    // solved-grid route on the nilpotent model
    std::vector<double> times = {0.25, 0.5, 1.0};
    GridConfig cfg;  // defaults: 64 cells, [-4,4]^2 x [-2,2]
    auto reports = grid_liyau_margins(
        [](double x, double y, double z) { return std::exp(-(x * x + y * y + 4.0 * z * z)); },
        times, 3.0, cfg, 50);
    bool grid_ok = reports.size() == times.size();
    double grid_min_margin = 0.0;
    for (const auto& r : reports) {
        grid_ok = grid_ok && r.all_pass && r.points.size() == 50;
        grid_min_margin = std::min(grid_min_margin, r.min_margin);
    }
    // simulated route on the compact model with the exponential-profile form
    DiffusionConfig mc;
    mc.paths = 100000;
    mc.step = 1e-2;
    mc.seed = 43;
    GroupModel su2 = make_model(Model::SU2);
    ScalarField f = exp(0.4 * coordinate(Model::SU2, 0));
    bool mc_ok = true;
    double worst_margin = 1e300;
    for (double t : times) {
        LiYauForm form = corollary24_form(3.0, su2.rho, t);
        LogHeatDerivatives d = estimate_log_derivatives(
            su2, identity(Model::SU2), [&f](const GroupElement& g) { return f(g); }, t, mc, 1e-2);
        MarginReport r = verify_liyau(form, d, 3.0, 0.02);
        mc_ok = mc_ok && r.pass;
        worst_margin = std::min(worst_margin, r.margin);
    }
    const bool ok = grid_ok && mc_ok;
    std::printf(
        "criterion-08: %s (grid margins pass at 50 points x %zu horizons, min %.3e within budget; "
        "simulated route min margin %.3f >= -3 sigma - 0.02)\n",
        ok ? "PASS" : "FAIL", times.size(), grid_min_margin, worst_margin);
    CHECK(ok);
}

TEST_CASE("criterion-09") {
    const auto t0 = std::chrono::steady_clock::now();
    ShortTimeConfig cfg;
    cfg.paths = 1000000;
    cfg.seed = 47;
    ShortTimeResult r = short_time_exponent(cfg);
    const double secs = seconds_since(t0);
    const bool ok = r.slope >= kSlopeLo && r.slope <= kSlopeHi && secs <= kBudget9Seconds;
    std::printf(
        "criterion-09: %s (density exponent %.4f +- %.4f in [%.1f, %.1f], %.0fs <= %.0fs)\n",
        ok ? "PASS" : "FAIL", r.slope, r.slope_se, kSlopeLo, kSlopeHi, secs, kBudget9Seconds);
    CHECK(ok);
}

TEST_CASE("criterion-10") {
    ScalarField f = coordinate(Model::SU2, 0);
    std::vector<double> ts = {0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6};
    SpectralConfig cfg;  // defaults: 192 measure points, 192 paths each
    cfg.seed = 53;
    SpectralEstimate est = variance_decay(f, ts, cfg);
    const bool hard = est.decay_rate >= kRateHardBound;
    const bool soft = std::abs(est.decay_rate - 1.0) <= kRateSoftTol;
    PoincareReport poin = poincare_check(f, 4096, 53);
    const bool ok = hard && poin.pass;
    std::printf(
        "criterion-10: %s (decay rate %.4f +- %.4f >= %.4f hard; soft window 1 +- %.1f %s; "
        "Poincare margin %.4f >= -3 sigma)\n",
        ok ? "PASS" : "FAIL", est.decay_rate, est.rate_se, kRateHardBound, kRateSoftTol,
        soft ? "met" : "MISSED", poin.margin);
    CHECK(ok);
}

TEST_CASE("criterion-11") {
    PathConfig seg_cfg;
    seg_cfg.intervals = 20;
    seg_cfg.starts = 4;
    seg_cfg.max_iter = 200;
    bool segments_ok = true;
    double worst_ratio = 0.0;
    for (Model m : kModels) {
        for (double s : {0.5, 1.0, 2.0}) {
            CcResult r = cc_distance(m, identity(m), group_exp(m, {s, 0.0, 0.0}), seg_cfg);
            const double ratio = r.distance / s;
            worst_ratio = std::max(worst_ratio, ratio);
            segments_ok = segments_ok && r.path.converged && r.distance <= s * kSegmentSlack;
        }
    }
    PathConfig dia_cfg;
    dia_cfg.intervals = 16;
    dia_cfg.starts = 3;
    dia_cfg.max_iter = 150;
    dia_cfg.endpoint_tol = 3e-5;
    DiameterReport a = diameter_probe(100, dia_cfg, 61);
    PathConfig dia2 = dia_cfg;
    dia2.intervals = 32;
    DiameterReport b = diameter_probe(100, dia2, 61);
    const bool dia_ok = a.converged == 100 && b.converged == 100 &&
                        std::abs(b.max_distance - a.max_distance) <=
                            kDiameterDrift * std::max(a.max_distance, 1e-12);
    const bool ok = segments_ok && dia_ok;
    std::printf(
        "criterion-11: %s (segment length ratio <= %.4f vs %.2f; %d+%d/200 pairs converged, "
        "max distance %.4f vs %.4f at doubled resolution)\n",
        ok ? "PASS" : "FAIL", worst_ratio, kSegmentSlack, a.converged, b.converged, a.max_distance,
        b.max_distance);
    CHECK(ok);
}

TEST_CASE("criterion-12") {
    namespace fs = std::filesystem;
    const std::string cli = SUBRIEM_CLI_PATH;
    // Statistical verdict commands may exit 1; determinism is judged purely on
    // the bytes they write, so only require a normal exit.
    auto run = [&cli](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return status != -1 && WIFEXITED(status) && WEXITSTATUS(status) <= 1;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"verify-identities --model heisenberg --count 10 --points 5", "verify-identities"},
        {"liyau-coeffs --profile power --alpha 3 --rho 1 --t 2", "liyau-coeffs"},
        {"optimize-v --mode family-scan --family-points 64", "optimize-v"},
        {"short-time --paths 8000 --points 4", "short-time"},
    };
    bool ok = true;
    std::string detail = "all byte-identical";
    for (std::size_t i = 0; i < cases.size() && ok; ++i) {
        fs::path da = fs::path("accept_out") / ("a" + std::to_string(i));
        fs::path db = fs::path("accept_out") / ("b" + std::to_string(i));
        fs::remove_all(da);
        fs::remove_all(db);
        fs::create_directories(da);
        fs::create_directories(db);
        const std::string tail = " --format csv " + cases[i].first;
        if (!run("--out " + da.string() + tail) || !run("--out " + db.string() + tail)) {
            ok = false;
            detail = "abnormal exit for '" + cases[i].first + "'";
            break;
        }
        for (const char* ext : {".json", ".csv"}) {
            const fs::path fa = da / (cases[i].second + ext);
            const fs::path fb = db / (cases[i].second + ext);
            if (!fs::exists(fa) || !fs::exists(fb)) {
                ok = false;
                detail = "missing output for '" + cases[i].first + "'";
                break;
            }
            if (slurp(fa) != slurp(fb)) {
                ok = false;
                detail = "re-run of '" + cases[i].first + "' differs in " + fa.filename().string();
                break;
            }
        }
    }
    std::printf("criterion-12: %s (%s)\n", ok ? "PASS" : "FAIL", detail.c_str());
    CHECK(ok);
}
