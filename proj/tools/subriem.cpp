// Command-line front end: every verification and computation in the library
// exposed as a reproducible job with JSON (and optionally CSV/SVG) output.
// Exit codes: 0 = ran and passed, 1 = ran and the check failed, 2 = usage or
// parameter validation, 3 = numeric/runtime failure (diagnostic JSON emitted).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subriem/ccdist.hpp"
#include "subriem/exprparse.hpp"
#include "subriem/gamma.hpp"
#include "subriem/group.hpp"
#include "subriem/heat_grid.hpp"
#include "subriem/heat_mc.hpp"
#include "subriem/jsonio.hpp"
#include "subriem/liyau.hpp"
#include "subriem/spectral.hpp"
#include "subriem/stats.hpp"
#include "subriem/vprofile.hpp"

namespace {

using namespace subriem;

struct GlobalOpts {
    std::string out_dir = ".";
    std::string format = "json";
    bool plot = false;
    std::uint64_t seed = 1;
    int threads = 0;
};

std::string out_path(const GlobalOpts& g, const std::string& name) {
    std::error_code ec;  // best effort; the subsequent open reports real failures
    std::filesystem::create_directories(g.out_dir, ec);
    return g.out_dir + "/" + name;
}

bool want_csv(const GlobalOpts& g) { return g.format == "csv" || g.plot; }

void emit(const GlobalOpts& g, const std::string& stem, const OrderedJson& doc, const Csv& table,
          const std::vector<PlotSeries>& series, const std::string& title,
          const std::string& x_label, const std::string& y_label) {
    const std::string jpath = out_path(g, stem + ".json");
    write_json_file(jpath, doc);
    std::cout << "wrote " << jpath << "\n";
    if (want_csv(g) && !table.header.empty()) {
        const std::string cpath = out_path(g, stem + ".csv");
        write_csv_file(cpath, table);
        std::cout << "wrote " << cpath << "\n";
    }
    if (g.plot && !series.empty()) {
        const std::string spath = out_path(g, stem + ".svg");
        write_svg_plot(spath, title, x_label, y_label, series);
        std::cout << "wrote " << spath << "\n";
    }
}

Model parse_model(const std::string& name) { return model_from_name(name); }

std::vector<std::string> coord_labels(Model m) {
    switch (m) {
        case Model::Heisenberg:
            return {"m00", "m01", "m02", "m10", "m11", "m12", "m20", "m21", "m22"};
        case Model::SU2:
            return {"m00re", "m00im", "m01re", "m01im", "m10re", "m10im", "m11re", "m11im"};
        case Model::SL2:
            return {"m00", "m01", "m10", "m11"};
    }
    throw std::logic_error("unreachable model");
}

GroupElement parse_element(Model m, const std::string& spec) {
    if (spec == "id") return identity(m);
    if (spec.rfind("exp:", 0) == 0) {
        double a = 0, b = 0, c = 0;
        if (std::sscanf(spec.c_str() + 4, "%lf,%lf,%lf", &a, &b, &c) != 3)
            throw std::invalid_argument("element spec '" + spec + "' is not exp:a,b,c");
        return group_exp(m, {a, b, c});
    }
    if (spec.rfind("rand:", 0) == 0) {
        char* end = nullptr;
        const unsigned long long s = std::strtoull(spec.c_str() + 5, &end, 10);
        if (end == spec.c_str() + 5)
            throw std::invalid_argument("element spec '" + spec + "' is not rand:seed");
        Rng rng(static_cast<std::uint64_t>(s));
        return random_element(m, rng, 1.0);
    }
    throw std::invalid_argument("element spec '" + spec + "' (want id | exp:a,b,c | rand:seed)");
}

OrderedJson form_json(const LiYauForm& f) {
    return OrderedJson{{"c_gamma", f.c_gamma}, {"c_z", f.c_z}, {"c_rate", f.c_rate},
                       {"c_const", f.c_const}, {"rho", f.rho},  {"t", f.t}};
}

// ---------------------------------------------------------------------------

int cmd_verify_identities(const GlobalOpts& g, const std::string& model_name, int count,
                          int points) {
    const Model m = parse_model(model_name);
    const auto fields = test_function_suite(m, g.seed, count);
    const auto pts = test_point_suite(m, g.seed + 1, points);

    constexpr double kGamma2Tol = 1e-8;
    constexpr double kCommTol = 1e-9;
    constexpr double kMarginTol = -1e-9;

    const GammaReport gr = check_gamma2_identity(m, fields, pts);
    const CommutatorReport cr = check_commutators(m, fields, pts);
    const std::vector<double> lambdas = {0.1, 1.0, 10.0};
    std::vector<double> margins;
    for (double lam : lambdas)
        margins.push_back(gamma2_lower_bound_check(m, fields, pts, lam).min_margin);

    const bool g2_pass = gr.max_rel_gap <= kGamma2Tol;
    const double comm_worst =
        std::max({cr.xy_minus_z, cr.xz_plus_rho_y, cr.yz_minus_rho_x, cr.lz_commutator,
                  cr.mixed_cancellation, cr.gamma_routes, cr.z_routes});
    const bool comm_pass = comm_worst <= kCommTol;
    const bool bound_pass = *std::min_element(margins.begin(), margins.end()) >= kMarginTol;
    const bool pass = g2_pass && comm_pass && bound_pass;

    OrderedJson doc{
        {"command", "verify-identities"},
        {"model", model_name},
        {"seed", g.seed},
        {"count", count},
        {"points", points},
        {"gamma2",
         {{"max_abs_gap", gr.max_abs_gap}, {"max_rel_gap", gr.max_rel_gap},
          {"tolerance", kGamma2Tol}, {"pass", g2_pass}}},
        {"commutators",
         {{"xy_minus_z", cr.xy_minus_z}, {"xz_plus_rho_y", cr.xz_plus_rho_y},
          {"yz_minus_rho_x", cr.yz_minus_rho_x}, {"lz_commutator", cr.lz_commutator},
          {"mixed_cancellation", cr.mixed_cancellation}, {"gamma_routes", cr.gamma_routes},
          {"z_routes", cr.z_routes}, {"checked", cr.checked}, {"tolerance", kCommTol},
          {"pass", comm_pass}}},
        {"lower_bound",
         {{"lambdas", lambdas}, {"min_margins", margins}, {"tolerance", kMarginTol},
          {"pass", bound_pass}}},
        {"pass", pass}};

    Csv table{{"lambda", "min_margin"}, {}};
    for (std::size_t i = 0; i < lambdas.size(); ++i) table.rows.push_back({lambdas[i], margins[i]});
    PlotSeries series{"min margin", lambdas, margins};
    emit(g, "verify-identities", doc, table, {series}, "quadratic lower-bound margin vs lambda",
         "lambda", "min margin");
    std::cout << (pass ? "PASS" : "FAIL") << " identity suite on " << model_name << "\n";
    return pass ? 0 : 1;
}

int cmd_liyau_coeffs(const GlobalOpts& g, const std::string& profile, double alpha, double rho,
                     double t) {
    if (!(alpha > 2.0)) throw std::invalid_argument("alpha must exceed 2");
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    if (profile == "exp" && !(rho > 0.0))
        throw std::invalid_argument("the exponential profile needs rho > 0");

    const LiYauForm closed =
        profile == "power" ? corollary22_form(alpha, rho, t) : corollary24_form(alpha, rho, t);
    const BProfile bp = profile == "power" ? power_profile(alpha, t) : exp_profile(alpha, rho, t);
    const LiYauForm quad = coefficients_from_b(bp, rho);

    auto rel = [](double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); };
    const double agreement = std::max({rel(quad.c_z, closed.c_z), rel(quad.c_rate, closed.c_rate),
                                       rel(quad.c_const, closed.c_const)});
    constexpr double kTol = 1e-6;
    const bool pass = agreement <= kTol;

    OrderedJson doc{{"command", "liyau-coeffs"}, {"profile", profile}, {"alpha", alpha},
                    {"rho", rho},                {"t", t},             {"closed_form", form_json(closed)},
                    {"quadrature", form_json(quad)},                  {"agreement", agreement},
                    {"tolerance", kTol},         {"pass", pass}};

    Csv table{{"c_z_closed", "c_z_quadrature", "c_rate_closed", "c_rate_quadrature",
               "c_const_closed", "c_const_quadrature"},
              {{closed.c_z, quad.c_z, closed.c_rate, quad.c_rate, closed.c_const, quad.c_const}}};
    emit(g, "liyau-coeffs", doc, table, {}, "", "", "");
    std::cout << (pass ? "PASS" : "FAIL") << " coefficient agreement " << agreement << " (tol "
              << kTol << ")\n";
    return pass ? 0 : 1;
}

int cmd_check_liyau(const GlobalOpts& g, const std::string& model_name, const std::string& route,
                    std::string expr, std::vector<double> times, double alpha, int nx,
                    double half_width, double half_height, int probe_points, long long paths,
                    double step, double fd_eps, double extra_budget) {
    if (!(alpha > 2.0)) throw std::invalid_argument("alpha must exceed 2");
    if (times.empty()) times = {0.25, 0.5, 1.0};
    for (double t : times)
        if (!(t > 0.0)) throw std::invalid_argument("horizons must be positive");
    const Model m = parse_model(model_name);

    OrderedJson doc{{"command", "check-liyau"}, {"model", model_name}, {"route", route},
                    {"alpha", alpha},           {"times", times}};
    Csv table;
    bool pass = true;

    if (route == "grid") {
        if (m != Model::Heisenberg)
            throw std::invalid_argument("the grid route solves on the nilpotent model only");
        if (expr.empty()) expr = "exp(-(x^2+y^2+z^2))";
        const ScalarField f = parse_field(m, expr);
        auto f0 = [&f](double x, double y, double z) {
            GroupElement e = identity(Model::Heisenberg);
            e.c = {1.0, x, z, 0.0, 1.0, y, 0.0, 0.0, 1.0};
            return f(e);
        };
        GridConfig cfg;
        cfg.nx = nx;
        cfg.ny = nx;
        cfg.lx = half_width;
        cfg.ly = half_width;
        cfg.lz = half_height;
        const auto reports = grid_liyau_margins(f0, times, alpha, cfg, probe_points);
        doc["f"] = expr;
        auto arr = OrderedJson::array();
        table.header = {"t", "x", "y", "z", "margin", "budget"};
        for (const auto& r : reports) {
            pass = pass && r.all_pass;
            arr.push_back(OrderedJson{{"t", r.t},
                                      {"form", form_json(r.form)},
                                      {"points", static_cast<int>(r.points.size())},
                                      {"min_margin", r.min_margin},
                                      {"max_budget", r.max_budget},
                                      {"all_pass", r.all_pass}});
            for (const auto& p : r.points)
                table.rows.push_back({r.t, p.x, p.y, p.z, p.margin, p.budget});
        }
        doc["reports"] = arr;
    } else if (route == "mc") {
        if (expr.empty()) expr = m == Model::SU2 ? "exp(m00re)" : "exp(-(x^2+y^2+z^2)*0.2)";
        const ScalarField f = parse_field(m, expr);
        const GroupModel gm = make_model(m);
        DiffusionConfig cfg;
        cfg.step = step;
        cfg.paths = paths;
        cfg.seed = g.seed;
        cfg.threads = g.threads;
        doc["f"] = expr;
        auto arr = OrderedJson::array();
        table.header = {"t", "margin", "sigma", "threshold"};
        for (double t : times) {
            const LiYauForm form = m == Model::SU2 ? corollary24_form(alpha, gm.rho, t)
                                                   : corollary22_form(alpha, gm.rho, t);
            const LogHeatDerivatives d = estimate_log_derivatives(
                gm, identity(m), [&f](const GroupElement& e) { return f(e); }, t, cfg, fd_eps);
            const MarginReport r = verify_liyau(form, d, 3.0, extra_budget);
            pass = pass && r.pass;
            arr.push_back(OrderedJson{{"t", t},
                                      {"form", form_json(form)},
                                      {"margin", r.margin},
                                      {"sigma", r.sigma},
                                      {"threshold", r.threshold},
                                      {"gamma_u", d.gamma_u},
                                      {"zu_sq", d.zu_sq},
                                      {"du_dt", d.du_dt},
                                      {"pass", r.pass}});
            table.rows.push_back({t, r.margin, r.sigma, r.threshold});
        }
        doc["reports"] = arr;
    } else {
        throw std::invalid_argument("route must be grid or mc");
    }
    doc["pass"] = pass;

    std::vector<PlotSeries> series;
    if (!table.rows.empty()) {
        PlotSeries s{"margin", {}, {}};
        for (const auto& row : table.rows) {
            s.x.push_back(row[0]);
            s.y.push_back(row[route == "grid" ? 4 : 1]);
        }
        series.push_back(std::move(s));
    }
    emit(g, "check-liyau", doc, table, series, "pointwise inequality margin", "t", "margin");
    std::cout << (pass ? "PASS" : "FAIL") << " inequality margins (" << route << " route)\n";
    return pass ? 0 : 1;
}

int cmd_optimize_v(const GlobalOpts& g, const std::string& mode, double rho, int family_points,
                   int grid_nodes, double eps, double gamma, double decay_gamma, double decay_c,
                   std::vector<double> decay_t) {
    const bool grid_mode = mode == "grid-search";
    if (!grid_mode && mode != "family-scan")
        throw std::invalid_argument("mode must be family-scan or grid-search");
    if (eps != 0.0 && !(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("eps must lie in (0,1)");
    if (gamma != 0.0 && !(gamma > 2.5 && gamma < 3.0))
        throw std::invalid_argument("gamma must lie in (5/2,3)");

    const BestCResult r = best_C_rho0(family_points, grid_mode ? grid_nodes : 0, g.seed);

    const double fe = eps != 0.0 ? eps : r.refined_eps;
    const double fg = gamma != 0.0 ? gamma : r.refined_gamma;
    const FamilyForms ff = family_closed_forms(fe, fg);
    const VFunctionals vf = functionals(VProfile::parametric(fe, fg), 1e-9);
    auto rel = [](double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); };
    const double agreement = std::max({rel(vf.alpha, ff.alpha), rel(vf.beta, ff.beta),
                                       rel(vf.v_at_1, ff.v_at_1),
                                       rel(vf.beta - vf.alpha * vf.alpha, ff.beta_minus_alpha2)});

    OrderedJson doc{{"command", "optimize-v"},
                    {"mode", mode},
                    {"rho", rho},
                    {"scan",
                     {{"family_points", family_points},
                      {"evaluated", r.evaluated},
                      {"min_c_seen", r.min_c_seen},
                      {"all_above_2", r.all_above_2},
                      {"best", {{"eps", r.family_eps}, {"gamma", r.family_gamma}, {"c", r.family_c}}},
                      {"refined",
                       {{"eps", r.refined_eps}, {"gamma", r.refined_gamma}, {"c", r.refined_c}}}}},
                    {"functionals",
                     {{"eps", fe},
                      {"gamma", fg},
                      {"lambda", ff.lambda},
                      {"alpha", ff.alpha},
                      {"beta", ff.beta},
                      {"beta_minus_alpha2", ff.beta_minus_alpha2},
                      {"v_at_1", ff.v_at_1},
                      {"c", ff.c_ratio},
                      {"quadrature",
                       {{"alpha", vf.alpha}, {"alpha_by_parts", vf.alpha_by_parts},
                        {"beta", vf.beta}, {"v_at_1", vf.v_at_1}, {"constraint", vf.constraint}}},
                      {"agreement", agreement}}}};
    if (grid_mode)
        doc["grid"] = OrderedJson{{"c", r.grid_c}, {"p", r.grid_p}, {"nodes", r.grid_nodes},
                                  {"values", r.grid_values}};
    else
        doc["grid"] = nullptr;

    if (rho > 0.0) {
        if (decay_t.empty()) decay_t = {10, 15, 20, 25, 30, 35, 40};
        const DecayResult d = long_time_decay(rho, decay_t, decay_gamma, decay_c);
        doc["decay"] = OrderedJson{{"t", d.t},        {"width", d.width},
                                   {"upper", d.upper}, {"lower", d.lower},
                                   {"slope", d.slope}, {"slope_se", d.slope_se},
                                   {"skipped", d.skipped}};
    } else {
        doc["decay"] = nullptr;
    }
    doc["pass"] = r.all_above_2;

    Csv table{{"eps", "gamma", "c"}, {}};
    for (const auto& row : r.family_trace) table.rows.push_back({row[0], row[1], row[2]});

    // One plotted series per sampled gamma value (capped to keep the legend sane).
    std::vector<PlotSeries> series;
    std::map<double, PlotSeries> by_gamma;
    for (const auto& row : r.family_trace) {
        auto& s = by_gamma[row[1]];
        s.x.push_back(std::log10(row[0]));
        s.y.push_back(row[2]);
    }
    int taken = 0;
    const int stride = std::max<int>(1, static_cast<int>(by_gamma.size()) / 5);
    int idx = 0;
    for (auto& [gv, s] : by_gamma) {
        if (idx++ % stride == 0 && taken < 6) {
            char name[32];
            std::snprintf(name, sizeof(name), "gamma=%.3f", gv);
            s.name = name;
            series.push_back(std::move(s));
            ++taken;
        }
    }

    emit(g, "optimize-v", doc, table, series, "profile constant over the family", "log10 eps",
         "C");
    std::cout << (r.all_above_2 ? "PASS" : "FAIL") << " min C over " << r.evaluated
              << " profiles = " << r.min_c_seen << "\n";
    return r.all_above_2 ? 0 : 1;
}

int cmd_spectral_gap(const GlobalOpts& g, std::vector<double> t_grid, int haar, long long inner,
                     double step, int center, const std::string& expr, long long poincare_n) {
    if (t_grid.empty()) t_grid = {0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6};
    const ScalarField f = parse_field(Model::SU2, expr);

    SpectralConfig cfg;
    cfg.haar_samples = haar;
    cfg.inner_paths = inner;
    cfg.step = step;
    cfg.center_samples = center;
    cfg.seed = g.seed;
    cfg.threads = g.threads;

    const SpectralEstimate est = variance_decay(f, t_grid, cfg);
    const PoincareReport poin = poincare_check(f, poincare_n, g.seed);

    constexpr double kHardBound = 2.0 / 3.0 - 0.1;
    constexpr double kSoftCenter = 1.0;
    constexpr double kSoftTol = 0.3;
    const bool hard_pass = est.decay_rate >= kHardBound;
    const bool soft_pass = std::abs(est.decay_rate - kSoftCenter) <= kSoftTol;
    const bool pass = hard_pass && poin.pass;

    OrderedJson doc{{"command", "spectral-gap"},
                    {"f", expr},
                    {"t_grid", est.t_grid},
                    {"variance", est.variance},
                    {"variance_se", est.variance_se},
                    {"kept", est.kept},
                    {"decay_rate", est.decay_rate},
                    {"rate_se", est.rate_se},
                    {"ci_lo", est.ci_lo},
                    {"ci_hi", est.ci_hi},
                    {"residual_rms", est.residual_rms},
                    {"f_mean", est.f_mean},
                    {"f_variance", est.f_variance},
                    {"hard_bound", kHardBound},
                    {"hard_pass", hard_pass},
                    {"soft_center", kSoftCenter},
                    {"soft_tolerance", kSoftTol},
                    {"soft_pass", soft_pass},
                    {"poincare",
                     {{"margin", poin.margin}, {"sigma", poin.sigma}, {"var_f", poin.var_f},
                      {"mean_gamma", poin.mean_gamma}, {"samples", poin.samples},
                      {"pass", poin.pass}}},
                    {"pass", pass}};

    Csv table{{"t", "variance", "variance_se"}, {}};
    PlotSeries s{"ln variance", {}, {}};
    for (std::size_t i = 0; i < est.t_grid.size(); ++i) {
        table.rows.push_back({est.t_grid[i], est.variance[i], est.variance_se[i]});
        if (est.variance[i] > 0.0) {
            s.x.push_back(est.t_grid[i]);
            s.y.push_back(std::log(est.variance[i]));
        }
    }
    emit(g, "spectral-gap", doc, table, {s}, "squared-norm decay under the semigroup", "t",
         "ln variance");
    std::cout << (pass ? "PASS" : "FAIL") << " decay rate " << est.decay_rate << " +- "
              << est.rate_se << " (hard bound " << kHardBound << ", soft 1 +- " << kSoftTol
              << (soft_pass ? " ok" : " MISSED") << "), Poincare margin " << poin.margin << "\n";
    return pass ? 0 : 1;
}

int cmd_cc_distance(const GlobalOpts& g, const std::string& model_name, const std::string& x_spec,
                    const std::string& y_spec, int intervals, int starts, int stages,
                    double penalty0, double growth, double tol, int max_iter) {
    const Model m = parse_model(model_name);
    const GroupElement x = parse_element(m, x_spec);
    const GroupElement y = parse_element(m, y_spec);
    PathConfig cfg;
    cfg.intervals = intervals;
    cfg.starts = starts;
    cfg.stages = stages;
    cfg.penalty0 = penalty0;
    cfg.penalty_growth = growth;
    cfg.endpoint_tol = tol;
    cfg.max_iter = max_iter;
    cfg.seed = g.seed;

    const CcResult r = cc_distance(m, x, y, cfg);

    OrderedJson doc{{"command", "cc-distance"},
                    {"model", model_name},
                    {"x", x_spec},
                    {"y", y_spec},
                    {"intervals", intervals},
                    {"starts", starts},
                    {"distance", r.distance},
                    {"length", r.path.length},
                    {"energy", r.path.energy},
                    {"endpoint_gap", r.path.endpoint_gap},
                    {"converged", r.path.converged},
                    {"pass", r.path.converged}};

    const auto labels = coord_labels(m);
    Csv table;
    table.header = {"time", "u1", "u2"};
    for (const auto& l : labels) table.header.push_back(l);
    const auto states = path_states(x, r.path);
    const double dt = 1.0 / static_cast<double>(std::max<std::size_t>(1, r.path.u1.size()));
    for (std::size_t k = 0; k < states.size(); ++k) {
        const std::size_t seg = k < r.path.u1.size() ? k : r.path.u1.size() - 1;
        std::vector<double> row = {static_cast<double>(k) * dt, r.path.u1[seg], r.path.u2[seg]};
        for (double c : states[k].coords()) row.push_back(c);
        table.rows.push_back(std::move(row));
    }
    PlotSeries s1{"u1", {}, {}}, s2{"u2", {}, {}};
    for (std::size_t k = 0; k < r.path.u1.size(); ++k) {
        s1.x.push_back(static_cast<double>(k) * dt);
        s1.y.push_back(r.path.u1[k]);
        s2.x.push_back(static_cast<double>(k) * dt);
        s2.y.push_back(r.path.u2[k]);
    }
    emit(g, "cc-distance", doc, table, {s1, s2}, "optimized horizontal controls", "time",
         "control");
    std::cout << (r.path.converged ? "PASS" : "FAIL") << " distance bound " << r.distance
              << " (endpoint gap " << r.path.endpoint_gap << ")\n";
    return r.path.converged ? 0 : 1;
}

int cmd_diameter(const GlobalOpts& g, int pairs, int intervals, int starts, int stages,
                 double tol, int max_iter) {
    PathConfig cfg;
    cfg.intervals = intervals;
    cfg.starts = starts;
    cfg.stages = stages;
    cfg.endpoint_tol = tol;
    cfg.max_iter = max_iter;
    cfg.seed = g.seed;
    const DiameterReport r = diameter_probe(pairs, cfg, g.seed);
    const bool pass = r.converged == r.pairs;

    OrderedJson doc{{"command", "diameter"},       {"pairs", r.pairs},
                    {"converged", r.converged},    {"max_distance", r.max_distance},
                    {"distances", r.distances},    {"pass", pass}};
    Csv table{{"pair", "distance"}, {}};
    PlotSeries s{"distance", {}, {}};
    for (std::size_t i = 0; i < r.distances.size(); ++i) {
        table.rows.push_back({static_cast<double>(i), r.distances[i]});
        s.x.push_back(static_cast<double>(i));
        s.y.push_back(r.distances[i]);
    }
    emit(g, "diameter", doc, table, {s}, "pairwise distance bounds", "pair", "distance");
    std::cout << (pass ? "PASS" : "FAIL") << " " << r.converged << "/" << r.pairs
              << " pairs converged, max distance " << r.max_distance << "\n";
    return pass ? 0 : 1;
}

int cmd_short_time(const GlobalOpts& g, long long paths, int t_points, double t_lo, double t_hi,
                   int steps, int dump_paths) {
    ShortTimeConfig cfg;
    cfg.paths = paths;
    cfg.t_points = t_points;
    cfg.t_lo = t_lo;
    cfg.t_hi = t_hi;
    cfg.steps_per_horizon = steps;
    cfg.seed = g.seed;
    cfg.threads = g.threads;

    const UltracontractivityFit fit = ultracontractivity_probe(cfg);
    const ShortTimeResult& r = fit.detail;
    constexpr double kBandLo = -2.3, kBandHi = -1.7;
    const bool pass = r.slope >= kBandLo && r.slope <= kBandHi;

    OrderedJson doc{{"command", "short-time"},
                    {"paths", paths},
                    {"t_points", t_points},
                    {"t_lo", t_lo},
                    {"t_hi", t_hi},
                    {"steps_per_horizon", steps},
                    {"slope", r.slope},
                    {"slope_se", r.slope_se},
                    {"intercept", r.intercept},
                    {"decay_order", fit.decay_order},
                    {"amplitude_log", fit.amplitude_log},
                    {"residual_rms", fit.residual_rms},
                    {"band_lo", kBandLo},
                    {"band_hi", kBandHi},
                    {"t", r.t},
                    {"log_density", r.log_density},
                    {"scaled_xy2", r.scaled_xy2},
                    {"scaled_z2", r.scaled_z2},
                    {"pass", pass}};

    Csv table{{"t", "log_density", "scaled_xy2", "scaled_z2"}, {}};
    PlotSeries s{"ln density", {}, {}};
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        table.rows.push_back({r.t[i], r.log_density[i], r.scaled_xy2[i], r.scaled_z2[i]});
        s.x.push_back(std::log(r.t[i]));
        s.y.push_back(r.log_density[i]);
    }
    emit(g, "short-time", doc, table, {s}, "on-diagonal density blow-up", "ln t", "ln density");

    if (dump_paths > 0) {
        DiffusionConfig dc;
        dc.step = t_hi / steps;
        dc.seed = g.seed;
        dc.threads = 1;
        const auto trajs = dump_trajectories(make_model(Model::Heisenberg),
                                             identity(Model::Heisenberg), t_hi, dc, dump_paths);
        Csv paths_csv;
        paths_csv.header = {"path", "step", "time"};
        for (const auto& l : coord_labels(Model::Heisenberg)) paths_csv.header.push_back(l);
        for (std::size_t p = 0; p < trajs.size(); ++p)
            for (std::size_t k = 0; k < trajs[p].size(); ++k) {
                std::vector<double> row = {static_cast<double>(p), static_cast<double>(k),
                                           static_cast<double>(k) * dc.step};
                row.insert(row.end(), trajs[p][k].begin(), trajs[p][k].end());
                paths_csv.rows.push_back(std::move(row));
            }
        const std::string ppath = out_path(g, "short-time-paths.csv");
        write_csv_file(ppath, paths_csv);
        std::cout << "wrote " << ppath << "\n";
    }
    std::cout << (pass ? "PASS" : "FAIL") << " small-time exponent " << r.slope << " +- "
              << r.slope_se << " (band [" << kBandLo << ", " << kBandHi << "])\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gamma-calculus on model subelliptic groups: identity checks, "
                 "inequality verification, profile optimization, and geometry probes"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory")->envname("SUBRIEM_OUT_DIR");
    app.add_option("--format", g.format, "primary tabular format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--plot", g.plot, "emit SVG plots derived from the CSV tables");
    app.add_option("--seed", g.seed, "base random seed");
    app.add_option("--threads", g.threads, "worker cap (0 = hardware)");

    const auto model_check = CLI::IsMember({"heisenberg", "su2", "sl2"});

    // verify-identities
    auto* vi = app.add_subcommand("verify-identities", "run the bilinear-form identity suite");
    std::string vi_model = "heisenberg";
    int vi_count = 100, vi_points = 20;
    vi->add_option("--model", vi_model)->check(model_check);
    vi->add_option("--count", vi_count, "random test functions")->check(CLI::PositiveNumber);
    vi->add_option("--points", vi_points, "sample points")->check(CLI::PositiveNumber);

    // liyau-coeffs
    auto* lc = app.add_subcommand("liyau-coeffs", "inequality coefficients, both routes");
    std::string lc_profile = "power";
    double lc_alpha = 3.0, lc_rho = 0.0, lc_t = 1.0;
    lc->add_option("--profile", lc_profile)->check(CLI::IsMember({"power", "exp"}));
    lc->add_option("--alpha", lc_alpha);
    lc->add_option("--rho", lc_rho);
    lc->add_option("--t", lc_t);

    // check-liyau
    auto* cl = app.add_subcommand("check-liyau", "margin of the pointwise inequality");
    std::string cl_model = "heisenberg", cl_route = "grid", cl_f;
    std::vector<double> cl_t;
    double cl_alpha = 3.0, cl_hw = 4.0, cl_hh = 2.0, cl_step = 1e-2, cl_fd = 1e-2, cl_budget = 0.01;
    int cl_nx = 64, cl_probe = 50;
    long long cl_paths = 200000;
    cl->add_option("--model", cl_model)->check(model_check);
    cl->add_option("--route", cl_route)->check(CLI::IsMember({"grid", "mc"}));
    cl->add_option("--f", cl_f, "field expression (default depends on the route)");
    cl->add_option("--t", cl_t, "horizons");
    cl->add_option("--alpha", cl_alpha);
    cl->add_option("--nx", cl_nx, "lattice resolution (grid route)");
    cl->add_option("--half-width", cl_hw);
    cl->add_option("--half-height", cl_hh);
    cl->add_option("--probe-points", cl_probe);
    cl->add_option("--paths", cl_paths, "paths (mc route)");
    cl->add_option("--step", cl_step);
    cl->add_option("--fd-eps", cl_fd);
    cl->add_option("--extra-budget", cl_budget);

    // optimize-v
    auto* ov = app.add_subcommand("optimize-v", "profile functionals and best-constant search");
    std::string ov_mode = "family-scan";
    double ov_rho = 0.0, ov_eps = 0.0, ov_gamma = 0.0, ov_dgamma = 2.75, ov_dc = 1.0;
    int ov_points = 1200, ov_nodes = 24;
    std::vector<double> ov_dt;
    ov->add_option("--mode", ov_mode)->check(CLI::IsMember({"family-scan", "grid-search"}));
    ov->add_option("--rho", ov_rho);
    ov->add_option("--family-points", ov_points)->check(CLI::PositiveNumber);
    ov->add_option("--grid-nodes", ov_nodes)->check(CLI::PositiveNumber);
    ov->add_option("--eps", ov_eps, "report functionals at this eps");
    ov->add_option("--gamma", ov_gamma, "report functionals at this gamma");
    ov->add_option("--decay-gamma", ov_dgamma);
    ov->add_option("--decay-c", ov_dc);
    ov->add_option("--decay-t", ov_dt, "long-horizon grid (rho > 0)");

    // spectral-gap
    auto* sg = app.add_subcommand("spectral-gap", "variance decay and gap inequality");
    std::vector<double> sg_t;
    int sg_haar = 192, sg_center = 16384;
    long long sg_inner = 192, sg_poin = 4096;
    double sg_step = 1e-2;
    std::string sg_f = "m00re";
    sg->add_option("--t", sg_t, "horizons");
    sg->add_option("--haar", sg_haar)->check(CLI::PositiveNumber);
    sg->add_option("--inner-paths", sg_inner)->check(CLI::PositiveNumber);
    sg->add_option("--step", sg_step);
    sg->add_option("--center", sg_center);
    sg->add_option("--f", sg_f, "field expression on the compact model");
    sg->add_option("--poincare-samples", sg_poin);

    // cc-distance
    auto* cc = app.add_subcommand("cc-distance", "control-distance upper bound");
    std::string cc_model = "heisenberg", cc_x = "id", cc_y;
    int cc_intervals = 40, cc_starts = 8, cc_stages = 5, cc_iter = 400;
    double cc_pen = 100.0, cc_growth = 10.0, cc_tol = 1e-5;
    cc->add_option("--model", cc_model)->check(model_check);
    cc->add_option("--x", cc_x, "element spec: id | exp:a,b,c | rand:seed");
    cc->add_option("--y", cc_y, "element spec")->required();
    cc->add_option("--intervals", cc_intervals)->check(CLI::PositiveNumber);
    cc->add_option("--starts", cc_starts)->check(CLI::PositiveNumber);
    cc->add_option("--stages", cc_stages)->check(CLI::PositiveNumber);
    cc->add_option("--penalty0", cc_pen);
    cc->add_option("--growth", cc_growth);
    cc->add_option("--tol", cc_tol);
    cc->add_option("--max-iter", cc_iter);

    // diameter
    auto* di = app.add_subcommand("diameter", "max distance over random pairs (compact model)");
    int di_pairs = 20, di_intervals = 20, di_starts = 4, di_stages = 5, di_iter = 120;
    double di_tol = 3e-5;
    di->add_option("--pairs", di_pairs)->check(CLI::PositiveNumber);
    di->add_option("--intervals", di_intervals)->check(CLI::PositiveNumber);
    di->add_option("--starts", di_starts)->check(CLI::PositiveNumber);
    di->add_option("--stages", di_stages)->check(CLI::PositiveNumber);
    di->add_option("--tol", di_tol);
    di->add_option("--max-iter", di_iter);

    // short-time
    auto* st = app.add_subcommand("short-time", "small-time density exponent");
    long long st_paths = 200000;
    int st_points = 8, st_steps = 64, st_dump = 0;
    double st_lo = 0.05, st_hi = 0.4;
    st->add_option("--paths", st_paths)->check(CLI::PositiveNumber);
    st->add_option("--points", st_points)->check(CLI::PositiveNumber);
    st->add_option("--t-lo", st_lo);
    st->add_option("--t-hi", st_hi);
    st->add_option("--steps", st_steps)->check(CLI::PositiveNumber);
    st->add_option("--dump-paths", st_dump, "also write the first few trajectories as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*vi) return cmd_verify_identities(g, vi_model, vi_count, vi_points);
        if (*lc) return cmd_liyau_coeffs(g, lc_profile, lc_alpha, lc_rho, lc_t);
        if (*cl)
            return cmd_check_liyau(g, cl_model, cl_route, cl_f, cl_t, cl_alpha, cl_nx, cl_hw,
                                   cl_hh, cl_probe, cl_paths, cl_step, cl_fd, cl_budget);
        if (*ov)
            return cmd_optimize_v(g, ov_mode, ov_rho, ov_points, ov_nodes, ov_eps, ov_gamma,
                                  ov_dgamma, ov_dc, ov_dt);
        if (*sg)
            return cmd_spectral_gap(g, sg_t, sg_haar, sg_inner, sg_step, sg_center, sg_f, sg_poin);
        if (*cc)
            return cmd_cc_distance(g, cc_model, cc_x, cc_y, cc_intervals, cc_starts, cc_stages,
                                   cc_pen, cc_growth, cc_tol, cc_iter);
        if (*di) return cmd_diameter(g, di_pairs, di_intervals, di_starts, di_stages, di_tol, di_iter);
        if (*st) return cmd_short_time(g, st_paths, st_points, st_lo, st_hi, st_steps, st_dump);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        OrderedJson diag{{"error", e.what()}};
        std::cout << diag.dump(2) << "\n";
        try {
            write_json_file(out_path(g, "error.json"), diag);
        } catch (...) {
        }
        return 3;
    }
}
