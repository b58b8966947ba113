#include "subriem/heat_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subriem {

HeisenbergGrid::HeisenbergGrid(const GridConfig& cfg) {
    if (cfg.nx < 4 || cfg.ny < 4 || cfg.nx % 2 != 0 || cfg.ny % 2 != 0)
        throw std::invalid_argument("grid needs even nx, ny >= 4");
    if (!(cfg.lx > 0.0) || !(cfg.ly > 0.0) || !(cfg.lz > 0.0))
        throw std::invalid_argument("domain half-widths must be positive");
    nx_ = cfg.nx;
    ny_ = cfg.ny;
    dx_ = 2.0 * cfg.lx / nx_;
    dy_ = 2.0 * cfg.ly / ny_;
    dz_ = dx_ * dy_;  // makes the shifted stencil land on grid nodes exactly
    nz_ = static_cast<int>(2 * std::max<long long>(1, std::llround(cfg.lz / dz_)));
    const std::size_t total = static_cast<std::size_t>(nx_ + 1) * (ny_ + 1) * (nz_ + 1);
    if (total > 40000000u) throw std::invalid_argument("grid would exceed the memory budget");
    dirichlet_ = cfg.dirichlet;
    u_.assign(total, 0.0);
    scratch_.assign(total, 0.0);
    const double limit = 1.0 / (2.0 / (dx_ * dx_) + 2.0 / (dy_ * dy_));
    set_dt(cfg.dt > 0.0 ? cfg.dt : 0.9 * limit);
}

void HeisenbergGrid::set_dt(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const double speed = dt * (2.0 / (dx_ * dx_) + 2.0 / (dy_ * dy_));
    if (speed > 1.0 + 1e-12)
        throw std::invalid_argument(
            "time step violates the stability bound dt (2/dx^2 + 2/dy^2) <= 1");
    dt_ = dt;
    cx_ = dt / (dx_ * dx_);
    cy_ = dt / (dy_ * dy_);
}

void HeisenbergGrid::fill(const std::function<double(double, double, double)>& f) {
    for (int i = 0; i <= nx_; ++i)
        for (int j = 0; j <= ny_; ++j)
            for (int k = 0; k <= nz_; ++k) u_[index(i, j, k)] = f(x_at(i), y_at(j), z_at(k));
    time_ = 0.0;
    leak_ = 0.0;
}

void HeisenbergGrid::load(std::vector<double> values, double time) {
    if (values.size() != u_.size())
        throw std::invalid_argument("loaded field has the wrong size for this grid");
    u_ = std::move(values);
    time_ = time;
    leak_ = 0.0;
}

void HeisenbergGrid::step(int n) {
    for (int s = 0; s < n; ++s) flux_step();
}

void HeisenbergGrid::flux_step() {
    const int pz = nz_ + 1;
    std::vector<double>& v = scratch_;
    v = u_;
    double raw_leak = 0.0;
    const std::size_t sx = static_cast<std::size_t>(ny_ + 1) * pz;

    // x-direction faces (i, i+1); the conservative face form makes the total
    // mass change telescope to the walls.
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j <= ny_; ++j) {
            const double* a = &u_[index(i, j, 0)];
            const double* b = a + sx;
            double* va = &v[index(i, j, 0)];
            double* vb = va + sx;
            for (int k = 0; k < pz; ++k) {
                const double F = cx_ * (b[k] - a[k]);
                va[k] += F;
                vb[k] -= F;
            }
        }

    // Shifted y-direction faces between (j, k) and (j+1, k+m) at x = m dx.
    for (int i = 0; i <= nx_; ++i) {
        const int m = shift_at(i);
        for (int j = 0; j < ny_; ++j) {
            const int klo = std::max(0, -m);
            const int khi = std::min(nz_, nz_ - m);
            const double* a = &u_[index(i, j, 0)];
            const double* b = &u_[index(i, j + 1, 0)] + m;
            double* va = &v[index(i, j, 0)];
            double* vb = &v[index(i, j + 1, 0)] + m;
            for (int k = klo; k <= khi; ++k) {
                const double F = cy_ * (b[k] - a[k]);
                va[k] += F;
                vb[k] -= F;
            }
        }
    }

    if (dirichlet_) {
        // Ghost value 0 beyond every wall; the outflux is tracked so that
        // mass + leak stays conserved.
        for (int j = 0; j <= ny_; ++j)
            for (int k = 0; k < pz; ++k) {
                const std::size_t lo = index(0, j, k), hi = index(nx_, j, k);
                v[lo] -= cx_ * u_[lo];
                v[hi] -= cx_ * u_[hi];
                raw_leak += cx_ * (u_[lo] + u_[hi]);
            }
        for (int i = 0; i <= nx_; ++i) {
            const int m = shift_at(i);
            for (int j = 0; j <= ny_; ++j)
                for (int k = 0; k < pz; ++k) {
                    const int up = k + m, dn = k - m;
                    int ghosts = 0;
                    if (j + 1 > ny_ || up < 0 || up > nz_) ++ghosts;
                    if (j - 1 < 0 || dn < 0 || dn > nz_) ++ghosts;
                    if (ghosts) {
                        const std::size_t id = index(i, j, k);
                        v[id] -= ghosts * cy_ * u_[id];
                        raw_leak += ghosts * cy_ * u_[id];
                    }
                }
        }
    }

    leak_ += raw_leak * cell_volume();
    std::swap(u_, scratch_);
    time_ += dt_;
}

double HeisenbergGrid::mass() const {
    double s = 0.0;
    for (double v : u_) s += v;
    return s * cell_volume();
}

double HeisenbergGrid::min_value() const {
    return *std::min_element(u_.begin(), u_.end());
}

double HeisenbergGrid::weighted_xy_moment() const {
    double s = 0.0;
    for (int i = 0; i <= nx_; ++i) {
        const double x = x_at(i);
        for (int j = 0; j <= ny_; ++j) {
            const double r2 = x * x + y_at(j) * y_at(j);
            const double* row = &u_[index(i, j, 0)];
            double rs = 0.0;
            for (int k = 0; k <= nz_; ++k) rs += row[k];
            s += r2 * rs;
        }
    }
    return s * cell_volume();
}

double HeisenbergGrid::value_at(double x, double y, double z) const {
    auto locate = [](double q, double h, int n) {
        double f = q / h + 0.5 * n;
        f = std::clamp(f, 0.0, static_cast<double>(n) - 1e-12);
        int i0 = static_cast<int>(f);
        if (i0 >= n) i0 = n - 1;
        return std::pair<int, double>(i0, f - i0);
    };
    auto [i0, fx] = locate(x, dx_, nx_);
    auto [j0, fy] = locate(y, dy_, ny_);
    auto [k0, fz] = locate(z, dz_, nz_);
    double acc = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                const double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy) *
                                 (dk ? fz : 1.0 - fz);
                acc += w * u_[index(i0 + di, j0 + dj, k0 + dk)];
            }
    return acc;
}

namespace {

std::vector<double> log_field(const std::vector<double>& f) {
    std::vector<double> out(f.size());
    for (std::size_t q = 0; q < f.size(); ++q) {
        if (!(f[q] > 0.0))
            throw std::runtime_error("field must stay positive to take logarithms");
        out[q] = std::log(f[q]);
    }
    return out;
}

struct Snapshots {
    std::vector<double> before, centre, after;  // ln-fields at t - dt, t, t + dt
    double dt = 0.0;
};

/// March from f0 and capture ln-field triples around each requested time.
/// All times must be whole multiples of one stable step.
std::vector<Snapshots> run_snapshots(const GridConfig& cfg,
                                     const std::function<double(double, double, double)>& f0,
                                     std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("need at least one snapshot time");
    HeisenbergGrid g(cfg);
    const double t0 = times.front();
    if (!(t0 > 0.0)) throw std::invalid_argument("snapshot times must be positive");
    const long long n0 =
        std::max<long long>(2, static_cast<long long>(std::ceil(t0 / g.dt() - 1e-12)));
    g.set_dt(t0 / static_cast<double>(n0));
    for (double t : times) {
        const double steps = t / g.dt();
        if (std::fabs(steps - std::llround(steps)) > 1e-9)
            throw std::invalid_argument("snapshot times must share a common step");
    }
    g.fill(f0);
    long long cur = 0;
    std::vector<Snapshots> out;
    for (double t : times) {
        const long long target = std::llround(t / g.dt());
        if (target - 1 < cur) throw std::invalid_argument("snapshot times are too close");
        g.step(static_cast<int>(target - 1 - cur));
        cur = target - 1;
        Snapshots s;
        s.dt = g.dt();
        s.before = log_field(g.data());
        g.step(1);
        ++cur;
        s.centre = log_field(g.data());
        g.step(1);
        ++cur;
        s.after = log_field(g.data());
        out.push_back(std::move(s));
    }
    return out;
}

struct NodeDeriv {
    double gamma_u = 0, zu_sq = 0, du_dt = 0;
};

NodeDeriv node_derivatives(const HeisenbergGrid& g, const Snapshots& s, int i, int j, int k) {
    const int m = g.shift_at(i);
    auto at = [&g](const std::vector<double>& w, int a, int b, int c) {
        return w[g.index(a, b, c)];
    };
    const auto& c = s.centre;
    const double xu = (at(c, i + 1, j, k) - at(c, i - 1, j, k)) / (2.0 * g.dx());
    const double yu = (at(c, i, j + 1, k + m) - at(c, i, j - 1, k - m)) / (2.0 * g.dy());
    const double zu = (at(c, i, j, k + 1) - at(c, i, j, k - 1)) / (2.0 * g.dz());
    NodeDeriv d;
    d.gamma_u = xu * xu + yu * yu;
    d.zu_sq = zu * zu;
    d.du_dt = (at(s.after, i, j, k) - at(s.before, i, j, k)) / (2.0 * s.dt);
    return d;
}

double margin_of(const LiYauForm& f, const NodeDeriv& d) {
    return f.c_rate * d.du_dt + f.c_const - f.c_gamma * d.gamma_u - f.c_z * d.zu_sq;
}

}  // namespace

std::vector<GridMarginReport> grid_liyau_margins(
    const std::function<double(double, double, double)>& f0, std::span<const double> times,
    double alpha, const GridConfig& cfg, int n_points) {
    if (n_points <= 0) throw std::invalid_argument("need a positive number of probe points");
    GridConfig ccfg = cfg;
    ccfg.nx = cfg.nx / 2;
    ccfg.ny = cfg.ny / 2;
    ccfg.dt = 0.0;
    HeisenbergGrid fine(cfg);
    HeisenbergGrid coarse(ccfg);

    // Interior lattice points shared by the two grids, spread around the
    // centre; indices must leave room for the shifted stencil on both.
    struct Probe {
        int fi, fj, fk, ci, cj, ck;
        double x, y, z;
    };
    std::vector<Probe> candidates;
    auto fits = [](const HeisenbergGrid& g, int i, int j, int k) {
        const int m = std::abs(g.shift_at(i));
        return i >= 1 && i + 1 <= g.nx() && j >= 1 && j + 1 <= g.ny() && k - m - 1 >= 0 &&
               k + m + 1 <= g.nz();
    };
    for (int ci = 0; ci <= coarse.nx(); ++ci) {
        const double x = coarse.x_at(ci);
        if (std::fabs(x) > 1.26) continue;
        for (int cj = 0; cj <= coarse.ny(); ++cj) {
            const double y = coarse.y_at(cj);
            if (std::fabs(y) > 1.26) continue;
            for (int ck = 0; ck <= coarse.nz(); ++ck) {
                const double z = coarse.z_at(ck);
                if (std::fabs(z) > 0.51) continue;
                const int fi = static_cast<int>(std::llround(x / fine.dx())) + fine.nx() / 2;
                const int fj = static_cast<int>(std::llround(y / fine.dy())) + fine.ny() / 2;
                const int fk = static_cast<int>(std::llround(z / fine.dz())) + fine.nz() / 2;
                if (std::fabs(fine.x_at(fi) - x) > 1e-9 || std::fabs(fine.y_at(fj) - y) > 1e-9 ||
                    std::fabs(fine.z_at(fk) - z) > 1e-9)
                    continue;  // not a shared node
                if (!fits(fine, fi, fj, fk) || !fits(coarse, ci, cj, ck)) continue;
                candidates.push_back({fi, fj, fk, ci, cj, ck, x, y, z});
            }
        }
    }
    if (candidates.empty()) throw std::runtime_error("no shared interior probe points");
    std::vector<Probe> probes;
    const std::size_t want = static_cast<std::size_t>(n_points);
    if (candidates.size() <= want) {
        probes = candidates;
    } else {
        for (std::size_t q = 0; q < want; ++q)
            probes.push_back(candidates[q * candidates.size() / want]);
    }

    std::vector<Snapshots> fine_snaps = run_snapshots(cfg, f0, times);
    std::vector<Snapshots> coarse_snaps = run_snapshots(ccfg, f0, times);

    std::vector<GridMarginReport> reports;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        GridMarginReport rep;
        rep.t = times[ti];
        rep.form = corollary22_form(alpha, 0.0, times[ti]);
        rep.min_margin = std::numeric_limits<double>::infinity();
        rep.all_pass = true;
        for (const Probe& p : probes) {
            NodeDeriv df = node_derivatives(fine, fine_snaps[ti], p.fi, p.fj, p.fk);
            NodeDeriv dc = node_derivatives(coarse, coarse_snaps[ti], p.ci, p.cj, p.ck);
            GridMarginPoint pt;
            pt.x = p.x;
            pt.y = p.y;
            pt.z = p.z;
            pt.gamma_u = df.gamma_u;
            pt.zu_sq = df.zu_sq;
            pt.du_dt = df.du_dt;
            pt.margin = margin_of(rep.form, df);
            pt.budget = std::fabs(pt.margin - margin_of(rep.form, dc)) + 1e-4;
            pt.pass = pt.margin >= -pt.budget;
            rep.min_margin = std::min(rep.min_margin, pt.margin);
            rep.max_budget = std::max(rep.max_budget, pt.budget);
            rep.all_pass = rep.all_pass && pt.pass;
            rep.points.push_back(pt);
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

namespace {

// Composable central differences on full fields; boundary stencils fall back
// to one-sided, which only pollutes regions the positive weight suppresses.
std::vector<double> dx_field(const HeisenbergGrid& g, const std::vector<double>& w) {
    std::vector<double> out(w.size());
    for (int i = 0; i <= g.nx(); ++i) {
        const int ip = std::min(i + 1, g.nx()), im = std::max(i - 1, 0);
        const double inv = 1.0 / ((ip - im) * g.dx());
        for (int j = 0; j <= g.ny(); ++j)
            for (int k = 0; k <= g.nz(); ++k)
                out[g.index(i, j, k)] =
                    (w[g.index(ip, j, k)] - w[g.index(im, j, k)]) * inv;
    }
    return out;
}

std::vector<double> dz_field(const HeisenbergGrid& g, const std::vector<double>& w) {
    std::vector<double> out(w.size());
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            for (int k = 0; k <= g.nz(); ++k) {
                const int kp = std::min(k + 1, g.nz()), km = std::max(k - 1, 0);
                out[g.index(i, j, k)] =
                    (w[g.index(i, j, kp)] - w[g.index(i, j, km)]) / ((kp - km) * g.dz());
            }
    return out;
}

std::vector<double> dy_field(const HeisenbergGrid& g, const std::vector<double>& w) {
    std::vector<double> out(w.size());
    for (int i = 0; i <= g.nx(); ++i) {
        const int m = g.shift_at(i);
        for (int j = 0; j <= g.ny(); ++j) {
            const int jp = std::min(j + 1, g.ny()), jm = std::max(j - 1, 0);
            const double inv = 1.0 / ((jp - jm) * g.dy());
            for (int k = 0; k <= g.nz(); ++k) {
                const int kp = std::clamp(k + m * (jp - j), 0, g.nz());
                const int km = std::clamp(k - m * (j - jm), 0, g.nz());
                out[g.index(i, j, k)] =
                    (w[g.index(i, jp, kp)] - w[g.index(i, jm, km)]) * inv;
            }
        }
    }
    return out;
}

std::vector<double> hadamard(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t q = 0; q < a.size(); ++q) out[q] = a[q] * b[q];
    return out;
}

}  // namespace

PhiDerivativeCheck check_phi_derivatives(const std::function<double(double, double, double)>& f0,
                                         double t, const GridConfig& cfg) {
    if (!(t > 0.0)) throw std::invalid_argument("horizon must be positive");
    HeisenbergGrid g(cfg);
    const long long N =
        2 * std::max<long long>(3, static_cast<long long>(std::ceil(t / (2.0 * g.dt()) - 1e-12)));
    const double dt = t / static_cast<double>(N);
    g.set_dt(dt);
    g.fill(f0);
    const long long half = N / 2;

    g.step(static_cast<int>(half - 2));
    std::vector<double> G_a = g.data();  // time t - s0 - ds  (s = s0 + ds)
    g.step(2);
    std::vector<double> G_b = g.data();  // time t - s0       (s = s0)
    g.step(2);
    std::vector<double> G_c = g.data();  // time t - s0 + ds  (s = s0 - ds)

    auto propagate = [&cfg, dt](const std::vector<double>& q, long long steps) {
        HeisenbergGrid h(cfg);
        h.set_dt(dt);
        h.load(q);
        h.step(static_cast<int>(steps));
        return h.data()[h.index(h.nx() / 2, h.ny() / 2, h.nz() / 2)];
    };

    auto phi_pair = [&](const std::vector<double>& G, long long steps,
                        double& phi1, double& phi2) {
        HeisenbergGrid geom(cfg);   // geometry only, for the difference fields
        geom.set_dt(dt);
        std::vector<double> u = log_field(G);
        std::vector<double> xu = dx_field(geom, u);
        std::vector<double> yu = dy_field(geom, u);
        std::vector<double> zu = dz_field(geom, u);
        std::vector<double> gam(u.size());
        for (std::size_t q = 0; q < u.size(); ++q) gam[q] = xu[q] * xu[q] + yu[q] * yu[q];
        phi1 = propagate(hadamard(G, gam), steps);
        std::vector<double> zsq(u.size());
        for (std::size_t q = 0; q < u.size(); ++q) zsq[q] = zu[q] * zu[q];
        phi2 = propagate(hadamard(G, zsq), steps);
    };

    double p1a, p2a, p1c, p2c;
    phi_pair(G_a, half + 2, p1a, p2a);
    phi_pair(G_c, half - 2, p1c, p2c);
    const double ds = 2.0 * dt;

    PhiDerivativeCheck out;
    out.phi1_rate_fd = (p1a - p1c) / (2.0 * ds);
    out.phi2_rate_fd = (p2a - p2c) / (2.0 * ds);

    {
        HeisenbergGrid geom(cfg);
        geom.set_dt(dt);
        std::vector<double> u = log_field(G_b);
        std::vector<double> xu = dx_field(geom, u);
        std::vector<double> yu = dy_field(geom, u);
        std::vector<double> zu = dz_field(geom, u);
        std::vector<double> xxu = dx_field(geom, xu);
        std::vector<double> yyu = dy_field(geom, yu);
        std::vector<double> xyu = dx_field(geom, yu);
        std::vector<double> yxu = dy_field(geom, xu);
        std::vector<double> xzu = dx_field(geom, zu);
        std::vector<double> yzu = dy_field(geom, zu);
        std::vector<double> g2(u.size());
        for (std::size_t q = 0; q < u.size(); ++q) {
            const double sym = xyu[q] + yxu[q];
            g2[q] = xxu[q] * xxu[q] + yyu[q] * yyu[q] + 0.5 * sym * sym +
                    0.5 * zu[q] * zu[q] - 2.0 * xu[q] * yzu[q] + 2.0 * yu[q] * xzu[q];
        }
        out.phi1_rate_identity = 2.0 * propagate(hadamard(G_b, g2), half);
        std::vector<double> gz(u.size());
        for (std::size_t q = 0; q < u.size(); ++q)
            gz[q] = xzu[q] * xzu[q] + yzu[q] * yzu[q];
        out.phi2_rate_identity = 2.0 * propagate(hadamard(G_b, gz), half);
    }

    out.gap1 = std::fabs(out.phi1_rate_fd - out.phi1_rate_identity) /
               (std::fabs(out.phi1_rate_identity) + 1e-12);
    out.gap2 = std::fabs(out.phi2_rate_fd - out.phi2_rate_identity) /
               (std::fabs(out.phi2_rate_identity) + 1e-12);
    return out;
}

HarnackScan harnack_time_bound(const std::function<double(double, double, double)>& f0,
                               const GridConfig& cfg, double C, double t_min, double budget) {
    if (!(t_min > 0.0) || !(t_min < 1.0))
        throw std::invalid_argument("scan start must lie in (0, 1)");
    HeisenbergGrid g(cfg);
    const long long steps =
        std::max<long long>(8, static_cast<long long>(std::ceil(1.0 / g.dt() - 1e-12)));
    g.set_dt(1.0 / static_cast<double>(steps));
    g.fill(f0);
    const std::size_t centre = g.index(g.nx() / 2, g.ny() / 2, g.nz() / 2);

    HarnackScan out;
    for (long long s = 1; s <= steps; ++s) {
        g.step(1);
        if (g.time() >= t_min - 1e-12) {
            const double val = g.data()[centre];
            if (!(val > 0.0)) throw std::runtime_error("centre value must stay positive");
            out.t.push_back(g.time());
            out.u.push_back(std::log(val));
        }
    }
    if (out.u.empty()) throw std::runtime_error("scan recorded no times");
    const double u1 = out.u.back();
    out.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < out.t.size(); ++q) {
        const double slack = u1 - C * std::log(out.t[q]) - out.u[q];
        out.min_slack = std::min(out.min_slack, slack);
    }
    out.pass = out.min_slack >= -budget;
    return out;
}

}  // namespace subriem
