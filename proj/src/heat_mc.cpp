#include "subriem/heat_mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "subriem/parallel.hpp"
#include "subriem/rng.hpp"
#include "subriem/stats.hpp"

namespace subriem {
namespace {

constexpr long long kChunk = 4096;
constexpr double kTwoPi = 6.283185307179586476925286766559;

long long step_count(double t, double step) {
    if (!(t > 0.0)) return 0;
    if (!(step > 0.0)) throw std::invalid_argument("step size must be positive");
    return std::max<long long>(1, std::llround(t / step));
}

struct ChunkError {
    bool ok = true;
    std::string message;
};

template <class Body>
void guarded(ChunkError& e, Body&& body) {
    try {
        body();
    } catch (const std::exception& ex) {
        e.ok = false;
        e.message = ex.what();
    } catch (...) {
        e.ok = false;
        e.message = "unknown worker error";
    }
}

void rethrow_first(const std::vector<ChunkError>& errs) {
    for (const auto& e : errs)
        if (!e.ok) throw std::runtime_error("Monte Carlo worker failed: " + e.message);
}

}  // namespace

GroupElement diffusion_step(const GroupModel& m, const GroupElement& g, double h, double xi1,
                            double xi2) {
    const double s = std::sqrt(2.0 * h);
    return multiply(g, group_exp(m.kind, {s * xi1, s * xi2, 0.0}));
}

HeatEstimate estimate_Ptf(const GroupModel& m, const GroupElement& g0,
                          const std::function<double(const GroupElement&)>& f, double t,
                          const DiffusionConfig& cfg) {
    if (cfg.paths <= 0) throw std::invalid_argument("need at least one path");
    HeatEstimate out;
    out.paths = cfg.paths;
    if (!(t >= 0.0)) throw std::invalid_argument("horizon must be non-negative");
    if (t == 0.0) {
        out.value = f(g0);
        return out;
    }
    const long long n = step_count(t, cfg.step);
    const double h = t / static_cast<double>(n);
    out.step = h;
    out.steps = n;

    const long long n_chunks = (cfg.paths + kChunk - 1) / kChunk;
    struct Slot {
        double sum = 0.0;
        double sumsq = 0.0;
        long long n = 0;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_chunks));
    std::vector<ChunkError> errs(static_cast<std::size_t>(n_chunks));
    const int renorm = cfg.renorm_interval > 0 ? cfg.renorm_interval : 64;

    parallel_for(n_chunks, cfg.threads, [&](std::int64_t ci) {
        guarded(errs[ci], [&] {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(ci));
            Slot& slot = slots[ci];
            const long long lo = ci * kChunk;
            const long long count = std::min<long long>(kChunk, cfg.paths - lo);
            for (long long p = 0; p < count; ++p) {
                GroupElement g = g0;
                for (long long k = 0; k < n; ++k) {
                    g = diffusion_step(m, g, h, rng.normal(), rng.normal());
                    if ((k + 1) % renorm == 0) g = renormalize(g);
                }
                const double v = f(g);
                if (!std::isfinite(v))
                    throw std::runtime_error("non-finite integrand value along a path");
                slot.sum += v;
                slot.sumsq += v * v;
            }
            slot.n = count;
        });
    });
    rethrow_first(errs);

    double sum = 0.0, sumsq = 0.0;
    long long cnt = 0;
    for (const Slot& s : slots) {  // fixed reduction order
        sum += s.sum;
        sumsq += s.sumsq;
        cnt += s.n;
    }
    out.value = sum / static_cast<double>(cnt);
    if (cnt > 1) {
        double var = (sumsq - static_cast<double>(cnt) * out.value * out.value) /
                     static_cast<double>(cnt - 1);
        out.std_error = var > 0.0 ? std::sqrt(var / static_cast<double>(cnt)) : 0.0;
    }
    return out;
}

LogHeatDerivatives estimate_log_derivatives(const GroupModel& m, const GroupElement& g0,
                                            const std::function<double(const GroupElement&)>& f,
                                            double t, const DiffusionConfig& cfg, double fd_eps) {
    if (!(t > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(fd_eps > 0.0)) throw std::invalid_argument("difference width must be positive");
    if (cfg.paths <= 0) throw std::invalid_argument("need at least one path");
    const long long n = step_count(t, cfg.step);
    const double h = t / static_cast<double>(n);
    const long long d = std::max<long long>(1, std::llround(0.1 * static_cast<double>(n)));
    const double delta = static_cast<double>(d) * h;

    // Perturbed starting points; left invariance lets every one reuse the same
    // increment product W.
    const double e = fd_eps;
    std::array<GroupElement, 7> starts = {
        g0,
        multiply(g0, group_exp(m.kind, {+e, 0.0, 0.0})),
        multiply(g0, group_exp(m.kind, {-e, 0.0, 0.0})),
        multiply(g0, group_exp(m.kind, {0.0, +e, 0.0})),
        multiply(g0, group_exp(m.kind, {0.0, -e, 0.0})),
        multiply(g0, group_exp(m.kind, {0.0, 0.0, +e})),
        multiply(g0, group_exp(m.kind, {0.0, 0.0, -e})),
    };

    const long long n_chunks = (cfg.paths + kChunk - 1) / kChunk;
    std::vector<MomentAccumulator> slots(static_cast<std::size_t>(n_chunks),
                                         MomentAccumulator(9));
    std::vector<ChunkError> errs(static_cast<std::size_t>(n_chunks));
    const int renorm = cfg.renorm_interval > 0 ? cfg.renorm_interval : 64;

    parallel_for(n_chunks, cfg.threads, [&](std::int64_t ci) {
        guarded(errs[ci], [&] {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(ci));
            MomentAccumulator& acc = slots[ci];
            const long long lo = ci * kChunk;
            const long long count = std::min<long long>(kChunk, cfg.paths - lo);
            for (long long p = 0; p < count; ++p) {
                GroupElement w = identity(m.kind);
                GroupElement w_early = w;  // after n - d steps
                GroupElement w_mid = w;    // after n steps
                for (long long k = 1; k <= n + d; ++k) {
                    w = diffusion_step(m, w, h, rng.normal(), rng.normal());
                    if (k % renorm == 0) w = renormalize(w);
                    if (k == n - d) w_early = w;
                    if (k == n) w_mid = w;
                }
                std::array<double, 9> row{};
                for (int j = 0; j < 7; ++j) row[j] = f(multiply(starts[j], w_mid));
                row[7] = f(multiply(g0, w_early));
                row[8] = f(multiply(g0, w));
                for (double v : row)
                    if (!std::isfinite(v))
                        throw std::runtime_error("non-finite integrand value along a path");
                acc.add(row);
            }
        });
    });
    rethrow_first(errs);

    MomentAccumulator acc(9);
    for (const auto& s : slots) acc.merge(s);  // fixed order

    const std::vector<double> mean = acc.mean();
    for (double v : mean)
        if (!(v > 0.0))
            throw std::runtime_error(
                "semigroup mean is not positive; cannot differentiate its logarithm");
    const std::vector<double> cov = acc.mean_covariance();

    const double xu = (std::log(mean[1]) - std::log(mean[2])) / (2.0 * e);
    const double yu = (std::log(mean[3]) - std::log(mean[4])) / (2.0 * e);
    const double zu = (std::log(mean[5]) - std::log(mean[6])) / (2.0 * e);

    LogHeatDerivatives out;
    out.gamma_u = xu * xu + yu * yu;
    out.zu_sq = zu * zu;
    out.du_dt = (std::log(mean[8]) - std::log(mean[7])) / (2.0 * delta);

    std::vector<double> grad(9, 0.0);
    grad[1] = xu / (e * mean[1]);
    grad[2] = -xu / (e * mean[2]);
    grad[3] = yu / (e * mean[3]);
    grad[4] = -yu / (e * mean[4]);
    out.gamma_u_se = delta_method_se(grad, cov);

    std::fill(grad.begin(), grad.end(), 0.0);
    grad[5] = zu / (e * mean[5]);
    grad[6] = -zu / (e * mean[6]);
    out.zu_sq_se = delta_method_se(grad, cov);

    std::fill(grad.begin(), grad.end(), 0.0);
    grad[8] = 1.0 / (2.0 * delta * mean[8]);
    grad[7] = -1.0 / (2.0 * delta * mean[7]);
    out.du_dt_se = delta_method_se(grad, cov);
    return out;
}

ShortTimeResult short_time_exponent(const ShortTimeConfig& cfg) {
    if (cfg.paths <= 0 || cfg.t_points <= 0 || cfg.steps_per_horizon <= 0)
        throw std::invalid_argument("short-time settings must be positive");
    if (!(cfg.t_lo > 0.0) || !(cfg.t_hi >= cfg.t_lo))
        throw std::invalid_argument("horizon range must satisfy 0 < t_lo <= t_hi");

    ShortTimeResult out;
    const int np = cfg.t_points;
    std::vector<double> lnt, lnp;
    for (int ti = 0; ti < np; ++ti) {
        const double t =
            np == 1 ? cfg.t_lo
                    : std::exp(std::log(cfg.t_lo) +
                               (std::log(cfg.t_hi) - std::log(cfg.t_lo)) * ti / (np - 1.0));
        const int n = cfg.steps_per_horizon;
        const double h = t / n;
        const double s = std::sqrt(2.0 * h);

        const long long n_chunks = (cfg.paths + kChunk - 1) / kChunk;
        std::vector<std::vector<std::array<double, 3>>> ends(
            static_cast<std::size_t>(n_chunks));
        parallel_for(n_chunks, cfg.threads, [&](std::int64_t ci) {
            // Same stream for a given (horizon index, chunk) whatever t is:
            // with a fixed step count the scheme commutes exactly with the
            // parabolic dilations, which the tests exploit.
            Rng rng = Rng::stream(cfg.seed,
                                  (static_cast<std::uint64_t>(ti) << 32) |
                                      static_cast<std::uint64_t>(ci));
            const long long lo = ci * kChunk;
            const long long count = std::min<long long>(kChunk, cfg.paths - lo);
            auto& mine = ends[ci];
            mine.resize(static_cast<std::size_t>(count));
            for (long long p = 0; p < count; ++p) {
                double x = 0.0, y = 0.0, z = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double a = s * rng.normal();
                    const double b = s * rng.normal();
                    // (x,y,z)(a,b,ab/2): the unit-triangular product law
                    z += 0.5 * a * b + x * b;
                    x += a;
                    y += b;
                }
                mine[static_cast<std::size_t>(p)] = {x, y, z};
            }
        });

        // Sequential moment and density passes (deterministic by construction).
        double m2[3] = {0.0, 0.0, 0.0};
        double m1[3] = {0.0, 0.0, 0.0};
        long long cnt = 0;
        for (const auto& chunk : ends)
            for (const auto& q : chunk) {
                for (int j = 0; j < 3; ++j) {
                    m1[j] += q[j];
                    m2[j] += q[j] * q[j];
                }
                ++cnt;
            }
        const double N = static_cast<double>(cnt);
        double sigma[3], bw[3];
        const double shrink = std::pow(N, -1.0 / 7.0);  // d = 3 reference rate
        for (int j = 0; j < 3; ++j) {
            const double mu = m1[j] / N;
            sigma[j] = std::sqrt(std::max(0.0, m2[j] / N - mu * mu));
            if (!(sigma[j] > 0.0)) throw std::runtime_error("degenerate endpoint spread");
            bw[j] = sigma[j] * shrink;
        }
        const double norm = 1.0 / (std::pow(kTwoPi, 1.5) * bw[0] * bw[1] * bw[2]);
        double ksum = 0.0;
        for (const auto& chunk : ends)
            for (const auto& q : chunk) {
                const double w0 = q[0] / bw[0], w1 = q[1] / bw[1], w2 = q[2] / bw[2];
                ksum += std::exp(-0.5 * (w0 * w0 + w1 * w1 + w2 * w2));
            }
        const double dens = norm * ksum / N;
        if (!(dens > 0.0)) throw std::runtime_error("vanishing density estimate");

        out.t.push_back(t);
        out.log_density.push_back(std::log(dens));
        out.scaled_xy2.push_back((m2[0] + m2[1]) / N / t);
        out.scaled_z2.push_back(m2[2] / N / (t * t));
        lnt.push_back(std::log(t));
        lnp.push_back(std::log(dens));
    }
    if (lnt.size() >= 3) {
        LineFit lf = fit_line(lnt, lnp);
        out.slope = lf.slope;
        out.slope_se = lf.slope_se;
        out.intercept = lf.intercept;
    }
    return out;
}

std::vector<std::vector<std::vector<double>>> dump_trajectories(const GroupModel& m,
                                                                const GroupElement& g0, double t,
                                                                const DiffusionConfig& cfg,
                                                                int n_paths) {
    if (n_paths <= 0) throw std::invalid_argument("need at least one dumped path");
    const long long n = step_count(t, cfg.step);
    const double h = n > 0 ? t / static_cast<double>(n) : 0.0;
    const int renorm = cfg.renorm_interval > 0 ? cfg.renorm_interval : 64;
    std::vector<std::vector<std::vector<double>>> out;
    out.reserve(static_cast<std::size_t>(n_paths));
    // Chunk-0 stream: the first dumped paths coincide with the estimator's.
    Rng rng = Rng::stream(cfg.seed, 0);
    for (int p = 0; p < n_paths; ++p) {
        std::vector<std::vector<double>> path;
        path.reserve(static_cast<std::size_t>(n + 1));
        GroupElement g = g0;
        auto push = [&path](const GroupElement& e) {
            auto span = e.coords();
            path.emplace_back(span.begin(), span.end());
        };
        push(g);
        for (long long k = 0; k < n; ++k) {
            g = diffusion_step(m, g, h, rng.normal(), rng.normal());
            if ((k + 1) % renorm == 0) g = renormalize(g);
            push(g);
        }
        out.push_back(std::move(path));
    }
    return out;
}

}  // namespace subriem
