#include "subriem/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "subriem/gamma.hpp"
#include "subriem/parallel.hpp"
#include "subriem/stats.hpp"

namespace subriem {

namespace {

// Stream keys: the product-estimator streams are indexed below 2^40, the
// bookkeeping streams (centering, per-horizon measure draws) above it.
constexpr std::uint64_t kCenterStream = std::uint64_t{1} << 40;
constexpr std::uint64_t kPointStreamBase = (std::uint64_t{1} << 40) + 1;

struct WorkerError {
    bool failed = false;
    std::string message;
};

// parallel_for does not carry exceptions across threads; workers record the
// first failure per slot and the caller rethrows after the join.
template <class Body>
void guarded(WorkerError& slot, const Body& body) {
    try {
        body();
    } catch (const std::exception& e) {
        if (!slot.failed) {
            slot.failed = true;
            slot.message = e.what();
        }
    }
}

void rethrow_first(const std::vector<WorkerError>& errors) {
    for (const auto& e : errors)
        if (e.failed) throw std::runtime_error(e.message);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

GroupElement haar_sample_su2(Rng& rng) {
    double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0, n2 = 0.0;
    do {
        q0 = rng.normal();
        q1 = rng.normal();
        q2 = rng.normal();
        q3 = rng.normal();
        n2 = q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3;
    } while (!(n2 > 1e-300));
    const double inv = 1.0 / std::sqrt(n2);
    q0 *= inv;
    q1 *= inv;
    q2 *= inv;
    q3 *= inv;
    GroupElement g = identity(Model::SU2);
    // Row-major [re00 im00 re01 im01 re10 im10 re11 im11] of
    // [[q0 + i q1, q2 + i q3], [-q2 + i q3, q0 - i q1]].
    g.c = {q0, q1, q2, q3, -q2, q3, q0, -q1, 0.0};
    return g;
}

std::vector<GroupElement> haar_samples_su2(std::uint64_t seed, int n) {
    if (n < 0) throw std::invalid_argument("haar_samples_su2: negative count");
    Rng rng(seed);
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(haar_sample_su2(rng));
    return out;
}

SpectralEstimate variance_decay(const ScalarField& f, std::span<const double> t_grid,
                                const SpectralConfig& cfg) {
    if (f.model() != Model::SU2)
        throw std::invalid_argument("variance_decay: needs the compact model (SU2)");
    if (t_grid.empty()) throw std::invalid_argument("variance_decay: empty t_grid");
    for (double t : t_grid)
        if (!(t > 0.0)) throw std::invalid_argument("variance_decay: horizons must be positive");
    if (cfg.haar_samples < 8) throw std::invalid_argument("variance_decay: haar_samples < 8");
    if (cfg.inner_paths < 2) throw std::invalid_argument("variance_decay: inner_paths < 2");
    if (!(cfg.step > 0.0)) throw std::invalid_argument("variance_decay: step must be positive");
    if (cfg.center_samples < 16) throw std::invalid_argument("variance_decay: center_samples < 16");

    const GroupModel model = make_model(Model::SU2);

    // Center f against the invariant measure and measure its spread; a flat
    // function has nothing to decay and the rate would be pure noise.
    double f_mean = 0.0;
    double f_var = 0.0;
    {
        Rng rng = Rng::stream(cfg.seed, kCenterStream);
        std::vector<double> vals(static_cast<std::size_t>(cfg.center_samples));
        for (auto& v : vals) {
            v = f(haar_sample_su2(rng));
            if (!std::isfinite(v)) throw std::runtime_error("variance_decay: f is not finite on the group");
        }
        f_mean = mean_of(vals);
        double ss = 0.0;
        for (double v : vals) ss += (v - f_mean) * (v - f_mean);
        f_var = ss / static_cast<double>(vals.size() - 1);
    }
    if (f_var <= 1e-14 * (1.0 + f_mean * f_mean))
        throw std::runtime_error(
            "variance_decay: f is constant under the invariant measure (sample variance " +
            std::to_string(f_var) + "); the decay rate is undefined for a flat function");

    const int n = cfg.haar_samples;
    const int threads = resolve_threads(cfg.threads);

    SpectralEstimate est;
    est.f_mean = f_mean;
    est.f_variance = f_var;
    est.t_grid.assign(t_grid.begin(), t_grid.end());

    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        const double t = t_grid[ti];
        const long long n_steps = std::max(1ll, static_cast<long long>(std::llround(t / cfg.step)));
        const double h = t / static_cast<double>(n_steps);

        // Fresh measure points per horizon keep the horizon estimates
        // independent, which is what the weighted fit assumes.
        std::vector<GroupElement> points;
        {
            Rng rng = Rng::stream(cfg.seed, kPointStreamBase + ti);
            points.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) points.push_back(haar_sample_su2(rng));
        }

        std::vector<double> products(static_cast<std::size_t>(n), 0.0);
        std::vector<WorkerError> errors(static_cast<std::size_t>(n));
        parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
            guarded(errors[i], [&] {
                double means[2] = {0.0, 0.0};
                for (int slot = 0; slot < 2; ++slot) {
                    const std::uint64_t key =
                        (static_cast<std::uint64_t>(ti) * static_cast<std::uint64_t>(n) +
                         static_cast<std::uint64_t>(i)) *
                            2 +
                        static_cast<std::uint64_t>(slot);
                    Rng rng = Rng::stream(cfg.seed, key);
                    double sum = 0.0;
                    for (long long p = 0; p < cfg.inner_paths; ++p) {
                        GroupElement g = points[i];
                        for (long long k = 0; k < n_steps; ++k) {
                            g = diffusion_step(model, g, h, rng.normal(), rng.normal());
                            if ((k & 63) == 63) g = renormalize(g);
                        }
                        const double v = f(renormalize(g));
                        if (!std::isfinite(v))
                            throw std::runtime_error("variance_decay: f is not finite along the diffusion");
                        sum += v;
                    }
                    means[slot] = sum / static_cast<double>(cfg.inner_paths);
                }
                // Two independent path means make the product an unbiased
                // estimate of (P_t f - mean)^2 at this point.
                products[i] = (means[0] - f_mean) * (means[1] - f_mean);
            });
        });
        rethrow_first(errors);

        const MeanVar mv = mean_var(products);
        est.variance.push_back(mv.mean);
        est.variance_se.push_back(mv.std_error);
    }

    // A horizon only enters the fit if its estimate stands clear of its own
    // noise; ln of a value at the noise floor carries no rate information.
    for (std::size_t ti = 0; ti < est.variance.size(); ++ti) {
        const double v = est.variance[ti];
        if (v > 3.0 * est.variance_se[ti] && v > 1e-12 * f_var)
            est.kept.push_back(static_cast<int>(ti));
    }
    if (est.kept.size() < 3)
        throw std::runtime_error(
            "variance_decay: only " + std::to_string(est.kept.size()) + " of " +
            std::to_string(est.variance.size()) +
            " horizons rise above their noise floor; shorten the horizons or add paths");

    std::vector<double> xs, ys, ws;
    for (int ti : est.kept) {
        const double v = est.variance[static_cast<std::size_t>(ti)];
        const double se = est.variance_se[static_cast<std::size_t>(ti)];
        xs.push_back(est.t_grid[static_cast<std::size_t>(ti)]);
        ys.push_back(std::log(v));
        const double sigma_ln = se / v;
        ws.push_back(1.0 / (sigma_ln * sigma_ln + 1e-30));
    }
    const LineFit fit = fit_line_weighted(xs, ys, ws);
    est.decay_rate = -fit.slope;
    est.rate_se = fit.slope_se;
    est.ci_lo = est.decay_rate - 3.0 * est.rate_se;
    est.ci_hi = est.decay_rate + 3.0 * est.rate_se;

    double rss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
        rss += r * r;
    }
    est.residual_rms = std::sqrt(rss / static_cast<double>(xs.size()));
    if (est.residual_rms > 0.75)
        throw std::runtime_error(
            "variance_decay: fit residual rms " + std::to_string(est.residual_rms) +
            " is too large for a single exponential; the window mixes regimes — widen or shift "
            "t_grid");
    return est;
}

PoincareReport poincare_check(const ScalarField& f, long long n_samples, std::uint64_t seed) {
    if (f.model() != Model::SU2)
        throw std::invalid_argument("poincare_check: needs the compact model (SU2)");
    if (n_samples < 16) throw std::invalid_argument("poincare_check: too few samples");
    const double rho = make_model(Model::SU2).rho;
    const ScalarField carre = gamma(f, f);

    std::vector<double> fv(static_cast<std::size_t>(n_samples));
    std::vector<double> gv(static_cast<std::size_t>(n_samples));
    Rng rng = Rng::stream(seed, 0x9);
    for (long long i = 0; i < n_samples; ++i) {
        const GroupElement g = haar_sample_su2(rng);
        fv[static_cast<std::size_t>(i)] = f(g);
        gv[static_cast<std::size_t>(i)] = carre(g);
        if (!std::isfinite(fv[static_cast<std::size_t>(i)]) ||
            !std::isfinite(gv[static_cast<std::size_t>(i)]))
            throw std::runtime_error("poincare_check: non-finite field value");
    }

    const double m_f = mean_of(fv);
    const double m_g = mean_of(gv);
    // Two-pass variance: for a constant f every centered term is the same tiny
    // rounding residue, so the margin collapses to an exact-scale zero instead
    // of a catastrophically cancelled difference of squares.
    double var_pop = 0.0;
    for (double v : fv) var_pop += (v - m_f) * (v - m_f);
    var_pop /= static_cast<double>(n_samples);

    const double coef = 3.0 / rho;
    PoincareReport rep;
    rep.samples = n_samples;
    rep.var_f = var_pop;
    rep.mean_gamma = m_g;
    rep.margin = coef * m_g - var_pop;

    double ss = 0.0;
    for (long long i = 0; i < n_samples; ++i) {
        const double df = fv[static_cast<std::size_t>(i)] - m_f;
        const double infl = coef * (gv[static_cast<std::size_t>(i)] - m_g) - (df * df - var_pop);
        ss += infl * infl;
    }
    rep.sigma = std::sqrt(ss / (static_cast<double>(n_samples) * static_cast<double>(n_samples - 1)));
    rep.pass = rep.margin >= -3.0 * rep.sigma;
    return rep;
}

static UltracontractivityFit fit_from_short_time(const ShortTimeResult& r) {
    UltracontractivityFit fit;
    fit.detail = r;
    fit.amplitude_log = r.intercept;
    fit.decay_order = -r.slope;
    double rss = 0.0;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        const double res = r.log_density[i] - (r.intercept + r.slope * std::log(r.t[i]));
        rss += res * res;
    }
    fit.residual_rms = r.t.empty() ? 0.0 : std::sqrt(rss / static_cast<double>(r.t.size()));
    return fit;
}

UltracontractivityFit ultracontractivity_probe(const ShortTimeConfig& cfg) {
    return fit_from_short_time(short_time_exponent(cfg));
}

}  // namespace subriem
