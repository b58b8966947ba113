#include "subriem/ccdist.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "subriem/optim.hpp"
#include "subriem/rng.hpp"
#include "subriem/spectral.hpp"

namespace subriem {

namespace {

// Shared scratch for one optimization target: the relative displacement T and
// the per-cell exponentials with their prefix/suffix products, so a perturbed
// cell needs only two multiplications to re-evaluate the endpoint.
struct EndpointWorkspace {
    Model kind;
    GroupElement target;
    int intervals;
    double dt;
    std::vector<GroupElement> cell;    // exp(dt * (u1_k X + u2_k Y))
    std::vector<GroupElement> prefix;  // prefix[k] = cell[0] ... cell[k-1]
    std::vector<GroupElement> suffix;  // suffix[k] = cell[k] ... cell[K-1]

    EndpointWorkspace(Model m, const GroupElement& t, int k)
        : kind(m), target(t), intervals(k), dt(1.0 / k), cell(static_cast<std::size_t>(k)),
          prefix(static_cast<std::size_t>(k) + 1), suffix(static_cast<std::size_t>(k) + 1) {}

    void rebuild(std::span<const double> u) {
        const int k = intervals;
        for (int i = 0; i < k; ++i)
            cell[static_cast<std::size_t>(i)] =
                group_exp(kind, {dt * u[static_cast<std::size_t>(i)],
                                 dt * u[static_cast<std::size_t>(k + i)], 0.0});
        prefix[0] = identity(kind);
        for (int i = 0; i < k; ++i)
            prefix[static_cast<std::size_t>(i) + 1] =
                multiply(prefix[static_cast<std::size_t>(i)], cell[static_cast<std::size_t>(i)]);
        suffix[static_cast<std::size_t>(k)] = identity(kind);
        for (int i = k - 1; i >= 0; --i)
            suffix[static_cast<std::size_t>(i)] =
                multiply(cell[static_cast<std::size_t>(i)], suffix[static_cast<std::size_t>(i) + 1]);
    }

    double gap_sq() const {
        const double d = coord_distance(prefix[static_cast<std::size_t>(intervals)], target);
        return d * d;
    }

    // Endpoint gap with cell i replaced by exp(dt * (a X + b Y)).
    double gap_sq_with(int i, double a, double b) const {
        const GroupElement e = group_exp(kind, {dt * a, dt * b, 0.0});
        const GroupElement p = multiply(multiply(prefix[static_cast<std::size_t>(i)], e),
                                        suffix[static_cast<std::size_t>(i) + 1]);
        const double d = coord_distance(p, target);
        return d * d;
    }
};

// Energy plus endpoint penalty; analytic energy gradient, central-difference
// penalty gradient through the prefix/suffix factorization (O(K) per call).
double penalized_objective(EndpointWorkspace& ws, double mu, std::span<const double> u,
                           std::span<double> grad) {
    const int k = ws.intervals;
    const double dt = ws.dt;
    ws.rebuild(u);
    double energy = 0.0;
    for (int i = 0; i < 2 * k; ++i) energy += dt * u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    const double gap2 = ws.gap_sq();
    if (!grad.empty()) {
        const double eps = 1e-6;
        for (int i = 0; i < k; ++i) {
            const double a = u[static_cast<std::size_t>(i)];
            const double b = u[static_cast<std::size_t>(k + i)];
            const double da =
                (ws.gap_sq_with(i, a + eps, b) - ws.gap_sq_with(i, a - eps, b)) / (2.0 * eps);
            const double db =
                (ws.gap_sq_with(i, a, b + eps) - ws.gap_sq_with(i, a, b - eps)) / (2.0 * eps);
            grad[static_cast<std::size_t>(i)] = 2.0 * dt * a + mu * da;
            grad[static_cast<std::size_t>(k + i)] = 2.0 * dt * b + mu * db;
        }
    }
    return energy + mu * gap2;
}

HorizontalPath finish_path(EndpointWorkspace& ws, const GroupElement& x,
                           std::span<const double> u, double tol) {
    const int k = ws.intervals;
    ws.rebuild(u);
    HorizontalPath p;
    p.model = ws.kind;
    p.u1.assign(u.begin(), u.begin() + k);
    p.u2.assign(u.begin() + k, u.begin() + 2 * k);
    for (int i = 0; i < k; ++i) {
        const double a = p.u1[static_cast<std::size_t>(i)];
        const double b = p.u2[static_cast<std::size_t>(i)];
        p.length += ws.dt * std::sqrt(a * a + b * b);
        p.energy += ws.dt * (a * a + b * b);
    }
    p.endpoint = renormalize(multiply(x, ws.prefix[static_cast<std::size_t>(k)]));
    p.endpoint_gap = std::sqrt(ws.gap_sq());
    p.converged = p.endpoint_gap <= tol;
    return p;
}

}  // namespace

CcResult cc_distance(Model m, const GroupElement& x, const GroupElement& y,
                     const PathConfig& cfg) {
    if (x.model != m || y.model != m)
        throw std::invalid_argument("cc_distance: elements are not on the requested model");
    if (cfg.intervals < 2) throw std::invalid_argument("cc_distance: need at least 2 intervals");
    if (cfg.starts < 1 || cfg.stages < 1) throw std::invalid_argument("cc_distance: bad multistart config");
    if (!(cfg.penalty0 > 0.0) || !(cfg.penalty_growth >= 1.0))
        throw std::invalid_argument("cc_distance: bad penalty schedule");

    const GroupElement target = multiply(inverse(x), y);
    const int k = cfg.intervals;
    const int dim = 2 * k;
    EndpointWorkspace ws(m, target, k);

    CcResult best;
    best.path.converged = false;
    double best_length = 0.0;
    double best_gap = 0.0;
    bool have_any = false;

    const double d0 = coord_distance(target, identity(m));
    for (int s = 0; s < cfg.starts; ++s) {
        std::vector<double> u(static_cast<std::size_t>(dim), 0.0);
        if (s == 0) {
            // Informed start: the constant control reaching the horizontal
            // shadow of the displacement (exact when the target has no
            // vertical component).
            if (auto lg = group_log(target)) {
                for (int i = 0; i < k; ++i) {
                    u[static_cast<std::size_t>(i)] = lg->a;
                    u[static_cast<std::size_t>(k + i)] = lg->b;
                }
            }
        } else {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(s));
            const double sigma = std::max(1.0, 2.0 * d0);
            for (auto& v : u) v = sigma * rng.normal();
        }

        double mu = cfg.penalty0;
        for (int stage = 0; stage < cfg.stages; ++stage) {
            auto fg = [&ws, mu](std::span<const double> q, std::span<double> g) {
                return penalized_objective(ws, mu, q, g);
            };
            GradientResult r = lbfgs_minimize(fg, u, 1e-10, cfg.max_iter);
            u = r.x;
            mu *= cfg.penalty_growth;
        }

        HorizontalPath p = finish_path(ws, x, u, cfg.endpoint_tol);
        const bool better = !have_any ||
                            (p.converged && !best.path.converged) ||
                            (p.converged == best.path.converged &&
                             (p.converged ? p.length < best_length : p.endpoint_gap < best_gap));
        if (better) {
            best.path = p;
            best_length = p.length;
            best_gap = p.endpoint_gap;
            have_any = true;
        }
    }
    best.distance = best.path.length;
    return best;
}

std::vector<GroupElement> path_states(const GroupElement& x, const HorizontalPath& path) {
    const std::size_t k = path.u1.size();
    if (path.u2.size() != k) throw std::invalid_argument("path_states: control arrays disagree");
    const double dt = 1.0 / static_cast<double>(k);
    std::vector<GroupElement> out;
    out.reserve(k + 1);
    GroupElement g = x;
    out.push_back(g);
    for (std::size_t i = 0; i < k; ++i) {
        g = multiply(g, group_exp(path.model, {dt * path.u1[i], dt * path.u2[i], 0.0}));
        out.push_back(g);
    }
    return out;
}

DiameterReport diameter_probe(int n_pairs, const PathConfig& cfg, std::uint64_t seed) {
    if (n_pairs < 1) throw std::invalid_argument("diameter_probe: need at least one pair");
    const std::vector<GroupElement> pts = haar_samples_su2(seed, 2 * n_pairs);
    DiameterReport rep;
    rep.pairs = n_pairs;
    for (int i = 0; i < n_pairs; ++i) {
        const CcResult r = cc_distance(Model::SU2, pts[static_cast<std::size_t>(2 * i)],
                                       pts[static_cast<std::size_t>(2 * i) + 1], cfg);
        rep.distances.push_back(r.distance);
        if (r.path.converged) {
            ++rep.converged;
            rep.max_distance = std::max(rep.max_distance, r.distance);
        }
    }
    return rep;
}

}  // namespace subriem
