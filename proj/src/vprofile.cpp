#include "subriem/vprofile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "subriem/optim.hpp"
#include "subriem/quadrature.hpp"
#include "subriem/rng.hpp"
#include "subriem/stats.hpp"

namespace subriem {
namespace {

void check_family_params(double eps, double gamma) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("two-piece profile needs eps in (0, 1)");
    if (!(gamma > 2.5) || !(gamma < 3.0))
        throw std::invalid_argument("two-piece profile needs gamma in the open interval (5/2, 3)");
}

double family_lambda_of(double eps, double gamma) {
    return -std::log(eps) + 1.0 / (3.0 - gamma);
}

std::vector<double> make_cuts(const std::vector<double>& splits, double hi) {
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (double s : splits)
        if (s > 0.0 && s < hi) cuts.push_back(s);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

/// Piecewise adaptive integral over [0, hi] with an x^sigma0 endpoint power at
/// 0 and interior break points where smoothness fails.
double split_integral(const std::function<double(double)>& f, double sigma0,
                      const std::vector<double>& cuts, double rel_tol) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (i == 0)
            total += integrate_singular(f, cuts[0], cuts[1], sigma0, 1.0, rel_tol).value;
        else
            total += integrate(f, cuts[i], cuts[i + 1], rel_tol, 1e-13).value;
    }
    return total;
}

void require_constraint_convergent(double p) {
    if (!(p < 3.0))
        throw std::domain_error(
            "constraint integral int x^2/V diverges at 0: integrand ~ x^(2-p) needs vanishing "
            "order p < 3");
}

}  // namespace

VProfile VProfile::parametric(double eps, double gamma) {
    check_family_params(eps, gamma);
    VProfile v;
    v.kind_ = Kind::Parametric;
    v.p_ = gamma;
    v.eps_ = eps;
    v.gamma_ = gamma;
    v.lambda_ = family_lambda_of(eps, gamma);
    v.splits_ = {eps};
    return v;
}

VProfile VProfile::callable(std::function<double(double)> v, std::function<double(double)> dv,
                            double p, std::vector<double> splits) {
    if (!v || !dv) throw std::invalid_argument("callable profile needs both V and V'");
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("vanishing order at 0 must be positive and finite");
    VProfile out;
    out.kind_ = Kind::Callable;
    out.p_ = p;
    out.v_ = std::move(v);
    out.dv_ = std::move(dv);
    std::sort(splits.begin(), splits.end());
    for (double s : splits)
        if (s > 0.0 && s < 1.0) out.splits_.push_back(s);
    return out;
}

VProfile VProfile::grid(std::vector<double> nodes, std::vector<double> values, double p) {
    if (nodes.size() < 2 || nodes.size() != values.size())
        throw std::invalid_argument("grid profile needs matching node/value arrays, length >= 2");
    if (!(nodes.front() > 0.0)) throw std::invalid_argument("first grid node must be positive");
    if (std::fabs(nodes.back() - 1.0) > 1e-12)
        throw std::invalid_argument("last grid node must be 1");
    nodes.back() = 1.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw std::invalid_argument("grid nodes must be strictly increasing");
    for (double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("grid values must be positive");
    if (!(p > 2.0)) throw std::invalid_argument("grid profile needs first-cell power p > 2");
    VProfile out;
    out.kind_ = Kind::Grid;
    out.p_ = p;
    out.nodes_ = std::move(nodes);
    out.values_ = std::move(values);
    out.splits_.assign(out.nodes_.begin(), out.nodes_.end() - 1);
    return out;
}

double VProfile::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    double v = 0.0;
    switch (kind_) {
        case Kind::Parametric:
            v = (x >= eps_) ? lambda_ * x * x * x
                            : lambda_ * std::pow(eps_, 3.0 - gamma_) * std::pow(x, gamma_);
            break;
        case Kind::Callable:
            v = v_(x);
            break;
        case Kind::Grid: {
            if (x <= nodes_.front()) {
                v = values_.front() * std::pow(x / nodes_.front(), p_);
            } else {
                auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
                std::size_t hi = std::min<std::size_t>(it - nodes_.begin(), nodes_.size() - 1);
                std::size_t lo = hi - 1;
                double w = (x - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
                v = values_[lo] + w * (values_[hi] - values_[lo]);
            }
            break;
        }
    }
    return scale_ * v;
}

double VProfile::derivative(double x) const {
    if (x <= 0.0) return 0.0;
    double d = 0.0;
    switch (kind_) {
        case Kind::Parametric:
            d = (x >= eps_) ? 3.0 * lambda_ * x * x
                            : gamma_ * lambda_ * std::pow(eps_, 3.0 - gamma_) *
                                  std::pow(x, gamma_ - 1.0);
            break;
        case Kind::Callable:
            d = dv_(x);
            break;
        case Kind::Grid: {
            if (x <= nodes_.front()) {
                d = p_ * values_.front() * std::pow(x, p_ - 1.0) / std::pow(nodes_.front(), p_);
            } else {
                auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
                std::size_t hi = std::min<std::size_t>(it - nodes_.begin(), nodes_.size() - 1);
                std::size_t lo = hi - 1;
                d = (values_[hi] - values_[lo]) / (nodes_[hi] - nodes_[lo]);
            }
            break;
        }
    }
    return scale_ * d;
}

double VProfile::family_eps() const {
    if (kind_ != Kind::Parametric) throw std::logic_error("not a two-piece family profile");
    return eps_;
}

double VProfile::family_gamma() const {
    if (kind_ != Kind::Parametric) throw std::logic_error("not a two-piece family profile");
    return gamma_;
}

double VProfile::family_lambda() const {
    if (kind_ != Kind::Parametric) throw std::logic_error("not a two-piece family profile");
    return lambda_;
}

double VProfile::constraint_integral(double rel_tol) const {
    require_constraint_convergent(p_);
    auto f = [this](double x) { return x * x / (*this)(x); };
    return split_integral(f, 2.0 - p_, make_cuts(splits_, 1.0), rel_tol);
}

VProfile VProfile::normalized(double rel_tol) const {
    double I = constraint_integral(rel_tol);
    if (!std::isfinite(I) || !(I > 0.0))
        throw std::runtime_error("constraint integral of the profile is not positive");
    VProfile out = *this;
    out.scale_ *= I;
    return out;
}

VProfile VProfile::scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("profile scale must be positive");
    VProfile out = *this;
    out.scale_ *= c;
    return out;
}

namespace {

/// Exact cell-by-cell forms for a piecewise-linear profile (power first cell).
VFunctionals grid_functionals(const VProfile& v, double rel_tol) {
    const std::vector<double>& xs = v.grid_nodes();
    const double p = v.near_zero_power();
    const std::size_t n = xs.size();
    std::vector<double> val(n);
    for (std::size_t i = 0; i < n; ++i) val[i] = v(xs[i]);  // scale applied

    VFunctionals out;
    out.v_at_1 = val.back();
    const double x1 = xs.front(), v1 = val.front();
    out.alpha = p * v1 / ((p - 2.0) * x1 * x1);
    out.beta = p * p * v1 * v1 / ((2.0 * p - 5.0) * std::pow(x1, 5.0));
    double parts = v1 / ((p - 2.0) * x1 * x1);  // int_0^{x1} V/x^3
    out.constraint = std::pow(x1, 3.0) / ((3.0 - p) * v1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = xs[i], b = xs[i + 1];
        double slope = (val[i + 1] - val[i]) / (b - a);
        double icpt = val[i] - slope * a;  // V = slope x + icpt on the cell
        out.alpha += slope * (1.0 / a - 1.0 / b);
        out.beta += slope * slope * (1.0 / (3.0 * a * a * a) - 1.0 / (3.0 * b * b * b));
        parts += slope * (1.0 / a - 1.0 / b) + 0.5 * icpt * (1.0 / (a * a) - 1.0 / (b * b));
        out.constraint +=
            integrate([&](double x) { return x * x / (slope * x + icpt); }, a, b, rel_tol, 1e-13)
                .value;
    }
    out.alpha_by_parts = out.v_at_1 + 2.0 * parts;
    return out;
}

}  // namespace

VFunctionals functionals(const VProfile& v, double rel_tol) {
    const double p = v.near_zero_power();
    if (!(p > 2.0))
        throw std::domain_error(
            "alpha integral int V'/x^2 diverges at 0: integrand ~ x^(p-3) needs vanishing order "
            "p > 2");
    if (!(p > 2.5))
        throw std::domain_error(
            "beta integral int (V'/x^2)^2 diverges at 0: integrand ~ x^(2p-6) needs vanishing "
            "order p > 5/2");
    require_constraint_convergent(p);
    if (v.kind() == VProfile::Kind::Grid) return grid_functionals(v, rel_tol);

    const std::vector<double> cuts = make_cuts(v.split_points(), 1.0);
    VFunctionals out;
    out.v_at_1 = v(1.0);
    out.alpha = split_integral([&v](double x) { return v.derivative(x) / (x * x); }, p - 3.0,
                               cuts, rel_tol);
    out.beta = split_integral(
        [&v](double x) {
            double w = v.derivative(x) / (x * x);
            return w * w;
        },
        2.0 * p - 6.0, cuts, rel_tol);
    out.alpha_by_parts =
        out.v_at_1 +
        2.0 * split_integral([&v](double x) { return v(x) / (x * x * x); }, p - 3.0, cuts,
                             rel_tol);
    out.constraint =
        split_integral([&v](double x) { return x * x / v(x); }, 2.0 - p, cuts, rel_tol);
    return out;
}

LiYauForm liyau_from_V(const VProfile& v, double rho, double t, double rel_tol) {
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
    VFunctionals f = functionals(v, rel_tol);
    if (std::fabs(f.constraint - 1.0) > 1e-8)
        throw std::invalid_argument("profile must be normalized: int_0^1 x^2/V = 1");
    LiYauForm form;
    form.c_gamma = f.v_at_1;
    form.c_z = t;
    form.c_rate = f.alpha - 2.0 * rho * t;
    form.c_const = (f.beta - f.alpha * f.alpha + form.c_rate * form.c_rate) / (4.0 * t);
    form.rho = rho;
    form.t = t;
    return form;
}

FamilyForms family_closed_forms(double eps, double gamma) {
    check_family_params(eps, gamma);
    FamilyForms f;
    const double l = family_lambda_of(eps, gamma);
    const double s = 3.0 - gamma;
    f.lambda = l;
    f.v_at_1 = l;
    f.alpha = l * (3.0 + 2.0 * eps * s / (gamma - 2.0));
    f.beta = l * l * (9.0 + eps * (15.0 - gamma) * s / (2.0 * gamma - 5.0));
    f.beta_minus_alpha2 = l * l * eps * s * s / (gamma - 2.0) *
                          ((gamma + 10.0) / (2.0 * gamma - 5.0) - 4.0 * eps / (gamma - 2.0));
    f.c_ratio = f.beta / (4.0 * f.alpha);
    return f;
}

VProfile v_from_b(const BProfile& bp) {
    if (!bp.vanishes_at_t)
        throw std::invalid_argument("change of variables needs b(t) = b'(t) = 0");
    validate_profile(bp);
    const double t = bp.t;
    const double b0 = bp.b(0.0);
    const double db0 = bp.db(0.0);
    if (!(b0 > 0.0) || !(db0 < 0.0))
        throw std::invalid_argument("change of variables needs b(0) > 0 and b'(0) < 0");
    const double alpha = bp.endpoint_order;
    if (!(alpha > 2.0)) throw std::invalid_argument("endpoint order must exceed 2");

    // Safeguarded Newton inversion of the decreasing map s -> b(s).
    auto invert = [bfn = bp.b, dbfn = bp.db, t, b0](double x) -> double {
        if (x >= b0) return 0.0;
        double lo = 0.0, hi = t;
        double s = 0.5 * t;
        for (int it = 0; it < 160 && hi - lo > 2e-16 * t; ++it) {
            double val = bfn(s) - x;
            if (val == 0.0) break;
            (val > 0.0 ? lo : hi) = s;
            double d = dbfn(s);
            double ns = s - val / d;
            if (!(d < 0.0) || !(ns > lo) || !(ns < hi)) ns = 0.5 * (lo + hi);
            s = ns;
        }
        return s;
    };

    // Values of x below b(t - gap0) would need the inversion to resolve a gap
    // t - s smaller than a double near t can represent, which silently returns
    // s == t and turns V into 0/0. Inside that range switch to the endpoint
    // power law b(s) ~ K (t - s)^alpha, calibrated at the last resolvable gap;
    // its relative error there is O(gap0), far below the quadrature tolerance,
    // and the region carries a vanishing share of every functional.
    const double gap0 = 1e-9 * t;
    const double x_tail = bp.b(t - gap0);
    const double k_root = std::pow(x_tail, 1.0 / alpha) / gap0;  // K^(1/alpha)
    if (!(x_tail > 0.0) || !std::isfinite(k_root))
        throw std::invalid_argument("profile vanishes too fast at t for the change of variables");

    // V(x) = -x^2 b'(s(x)) on (0, b(0)], rescaled to [0, 1].
    auto v_fun = [invert, dbfn = bp.db, b0, alpha, x_tail, k_root](double y) -> double {
        if (y <= 0.0) return 0.0;
        double x = b0 * y;
        if (x < x_tail) return alpha * k_root * std::pow(x, 3.0 - 1.0 / alpha) / (b0 * b0 * b0);
        double s = invert(x);
        return -(x * x) * dbfn(s) / (b0 * b0 * b0);
    };
    auto dv_fun = [invert, dbfn = bp.db, d2bfn = bp.d2b, b0, alpha, x_tail,
                   k_root](double y) -> double {
        if (y <= 0.0) return 0.0;
        double x = b0 * y;
        if (x < x_tail)
            return (3.0 * alpha - 1.0) * k_root * std::pow(x, 2.0 - 1.0 / alpha) / (b0 * b0);
        double s = invert(x);
        double d1 = dbfn(s);
        return (-2.0 * x * d1 - x * x * d2bfn(s) / d1) / (b0 * b0);
    };
    return VProfile::callable(v_fun, dv_fun, 3.0 - 1.0 / alpha).normalized();
}

UnnormalizedConstants unnormalized_constants(const std::function<double(double)>& v,
                                             const std::function<double(double)>& dv, double b0,
                                             double p, double rho, std::span<const double> splits,
                                             double rel_tol) {
    if (!(b0 > 0.0)) throw std::invalid_argument("domain endpoint must be positive");
    if (!(p > 2.5) || !(p < 3.0))
        throw std::domain_error("native-scale constants need vanishing order p in (5/2, 3)");
    std::vector<double> cuts =
        make_cuts(std::vector<double>(splits.begin(), splits.end()), b0);

    UnnormalizedConstants out;
    out.t = split_integral([&v](double x) { return x * x / v(x); }, 2.0 - p, cuts, rel_tol);
    out.a0 = v(b0) / (b0 * b0);
    const double twist = 2.0 * rho * out.t;
    out.A = split_integral([&dv, twist](double x) { return dv(x) / (x * x) - twist; }, p - 3.0,
                           cuts, rel_tol);
    out.B = 0.25 * split_integral(
                       [&dv, twist](double x) {
                           double w = dv(x) / (x * x) - twist;
                           return w * w;
                       },
                       2.0 * p - 6.0, cuts, rel_tol);
    out.C = out.t * out.B / out.A;
    return out;
}

BestCResult best_C_rho0(int family_points, int grid_node_count, uint64_t seed) {
    if (family_points < 16) family_points = 16;
    if (grid_node_count != 0 && grid_node_count < 4) grid_node_count = 4;
    BestCResult res;
    res.min_c_seen = std::numeric_limits<double>::infinity();
    auto record = [&res](double c) {
        res.evaluated += 1;
        if (c < res.min_c_seen) res.min_c_seen = c;
        if (!(c > 2.0)) res.all_above_2 = false;
    };

    // Stage 1: dense closed-form scan of the two-piece family.
    const int n_eps = static_cast<int>(std::ceil(std::sqrt(1.6 * family_points)));
    const int n_gam = (family_points + n_eps - 1) / n_eps;
    const double le_lo = std::log(1e-4), le_hi = std::log(0.97);
    const double ga_lo = 2.52, ga_hi = 2.98;
    res.family_c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_eps; ++i) {
        double eps = std::exp(le_lo + (le_hi - le_lo) * i / (n_eps - 1.0));
        for (int j = 0; j < n_gam; ++j) {
            double gamma = ga_lo + (ga_hi - ga_lo) * j / (n_gam - 1.0);
            double c = family_closed_forms(eps, gamma).c_ratio;
            record(c);
            res.family_trace.push_back({eps, gamma, c});
            if (c < res.family_c) {
                res.family_c = c;
                res.family_eps = eps;
                res.family_gamma = gamma;
            }
        }
    }

    // Stage 2: simplex refinement in (ln eps, gamma) with a box barrier.
    auto objective = [&record](std::span<const double> q) -> double {
        double le = q[0], gamma = q[1];
        double pen = 0.0;
        const double le_min = std::log(1e-6), le_max = std::log(0.999);
        if (le < le_min) pen += le_min - le;
        if (le > le_max) pen += le - le_max;
        if (gamma < 2.505) pen += 2.505 - gamma;
        if (gamma > 2.995) pen += gamma - 2.995;
        if (pen > 0.0) return 1e6 * (1.0 + pen);
        double c = family_closed_forms(std::exp(le), gamma).c_ratio;
        record(c);
        return c;
    };
    std::vector<double> q0 = {std::log(res.family_eps), res.family_gamma};
    std::vector<double> step = {0.25, 0.04};
    SimplexResult sr = nelder_mead(objective, q0, step, 1e-12, 400);
    res.refined_eps = std::exp(sr.x[0]);
    res.refined_gamma = sr.x[1];
    res.refined_c = sr.value;
    if (res.refined_c > res.family_c) {  // keep the better of the two
        res.refined_eps = res.family_eps;
        res.refined_gamma = res.family_gamma;
        res.refined_c = res.family_c;
    }

    // Stage 3: free-form coordinate search over piecewise-linear profiles,
    // warm-started from the refined family member. Values move multiplicatively
    // (they stay positive); the first-cell power is an extra coordinate.
    // Skipped entirely when no grid nodes are requested (family-only scan).
    if (grid_node_count == 0) return res;
    const int n = grid_node_count;
    std::vector<double> nodes(n), vals(n);
    VProfile warm = VProfile::parametric(res.refined_eps, res.refined_gamma);
    for (int i = 0; i < n; ++i) {
        nodes[i] = std::pow(10.0, -3.0 * (1.0 - i / (n - 1.0)));
        vals[i] = warm(nodes[i]);
    }
    nodes.back() = 1.0;
    double p = std::clamp(res.refined_gamma, 2.55, 2.95);

    auto eval_grid = [&nodes, &record](const std::vector<double>& vv, double pp) -> double {
        VFunctionals f = functionals(VProfile::grid(nodes, vv, pp), 1e-9);
        // Normalizing V -> I V scales beta/(4 alpha) by the constraint I.
        double c = f.constraint * f.beta / (4.0 * f.alpha);
        record(c);
        return c;
    };

    auto descend = [&](std::vector<double>& vv, double& pp, double h0) -> double {
        double best = eval_grid(vv, pp);
        double h = h0;
        while (h >= 1e-3) {
            bool improved = false;
            for (int j = 0; j <= n; ++j) {
                for (double dir : {1.0, -1.0}) {
                    std::vector<double> cand = vv;
                    double pc = pp;
                    if (j < n) {
                        cand[j] *= (dir > 0.0) ? (1.0 + h) : 1.0 / (1.0 + h);
                    } else {
                        pc = std::clamp(pp + dir * 0.1 * h, 2.55, 2.95);
                        if (pc == pp) continue;
                    }
                    double c = eval_grid(cand, pc);
                    if (c < best - 1e-12) {
                        best = c;
                        vv = cand;
                        pp = pc;
                        improved = true;
                    }
                }
            }
            if (!improved) h *= 0.5;
        }
        return best;
    };

    double best = descend(vals, p, 0.25);
    Rng rng(seed);
    for (int restart = 0; restart < 2; ++restart) {
        std::vector<double> jv = vals;
        double jp = p;
        for (double& x : jv) x *= std::exp(0.05 * rng.normal());
        double c = descend(jv, jp, 0.1);
        if (c < best) {
            best = c;
            vals = jv;
            p = jp;
        }
    }

    // Store the winner with the constraint normalized to 1.
    VFunctionals fb = functionals(VProfile::grid(nodes, vals, p), 1e-10);
    for (double& x : vals) x *= fb.constraint;
    res.grid_c = best;
    res.grid_nodes = nodes;
    res.grid_values = vals;
    res.grid_p = p;
    return res;
}

DecayResult long_time_decay(double rho, std::span<const double> t_grid, double gamma, double c) {
    if (!(rho > 0.0)) throw std::invalid_argument("decay analysis needs rho > 0");
    if (!(gamma > 2.5) || !(gamma < 3.0))
        throw std::invalid_argument("gamma must lie in the open interval (5/2, 3)");
    DecayResult out;
    std::vector<double> ts, lw;
    for (double t : t_grid) {
        if (!(t > 0.0)) {
            out.skipped += 1;
            continue;
        }
        const double base = -2.0 * rho * t / 3.0 + 1.0 / (3.0 - gamma);
        const double r = c * t * std::exp(-rho * t / 3.0);
        const double ep = std::exp(base + r);
        const double em = std::exp(base - r);
        if (!(ep > 0.0) || !(ep < 1.0) || !(em > 0.0) || !(em < 1.0)) {
            out.skipped += 1;
            continue;
        }
        FamilyForms fp = family_closed_forms(ep, gamma);
        FamilyForms fm = family_closed_forms(em, gamma);
        const double rate_p = fp.alpha - 2.0 * rho * t;  // widened eps: negative rate
        const double rate_m = fm.alpha - 2.0 * rho * t;  // narrowed eps: positive rate
        if (!(rate_p < 0.0) || !(rate_m > 0.0)) {
            out.skipped += 1;
            continue;
        }
        const double const_p = (fp.beta - fp.alpha * fp.alpha + rate_p * rate_p) / (4.0 * t);
        const double const_m = (fm.beta - fm.alpha * fm.alpha + rate_m * rate_m) / (4.0 * t);
        const double upper = const_p / (-rate_p);
        const double lower = -const_m / rate_m;
        out.t.push_back(t);
        out.upper.push_back(upper);
        out.lower.push_back(lower);
        out.width.push_back(upper - lower);
        out.order_ratio.push_back(rate_p * rate_p / (fp.beta - fp.alpha * fp.alpha));
        if (upper - lower > 0.0) {
            ts.push_back(t);
            lw.push_back(std::log(upper - lower));
        }
    }
    if (ts.size() >= 3) {
        LineFit lf = fit_line(ts, lw);
        out.slope = lf.slope;
        out.slope_se = lf.slope_se;
    }
    return out;
}

}  // namespace subriem
