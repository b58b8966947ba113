#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "subriem/group.hpp"
#include "subriem/liyau.hpp"

namespace subriem {

/// Monte Carlo settings for the horizontal diffusion with generator
/// L = X^2 + Y^2 (so the abelianized coordinates have variance 2t each).
struct DiffusionConfig {
    double step = 1e-2;       // requested Euler step; the horizon is divided evenly
    long long paths = 100000;
    std::uint64_t seed = 1;
    int renorm_interval = 64; // projection back onto the group between multiplications
    int threads = 0;          // 0 = hardware concurrency
};

struct HeatEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long paths = 0;
    double step = 0.0;  // effective step actually used
    long long steps = 0;
};

/// g <- g * exp(sqrt(2h) (xi1 X + xi2 Y)).
GroupElement diffusion_step(const GroupModel& m, const GroupElement& g, double h, double xi1,
                            double xi2);

/// P_t f(g0) = E[f(g0 W_t)]. Deterministic for a fixed seed: paths are chunked,
/// each chunk has its own derived stream, and chunk results are reduced in
/// index order whatever the thread count. t = 0 returns f(g0) exactly, and a
/// constant f is averaged without roundoff.
HeatEstimate estimate_Ptf(const GroupModel& m, const GroupElement& g0,
                          const std::function<double(const GroupElement&)>& f, double t,
                          const DiffusionConfig& cfg);

/// Derivatives of u = ln P_t f at g0 by common-random-number central
/// differences: every perturbed starting point reuses the same simulated
/// increment product W (left invariance moves the starting point out front),
/// and the time derivative reuses the same path truncated or extended by a few
/// steps. Standard errors are propagated from the joint covariance of the nine
/// correlated means.
LogHeatDerivatives estimate_log_derivatives(const GroupModel& m, const GroupElement& g0,
                                            const std::function<double(const GroupElement&)>& f,
                                            double t, const DiffusionConfig& cfg,
                                            double fd_eps = 1e-2);

struct ShortTimeConfig {
    long long paths = 200000;
    int steps_per_horizon = 64;  // fixed per horizon: the scheme then commutes
                                 // with the parabolic dilations exactly
    int t_points = 8;
    double t_lo = 0.05;
    double t_hi = 0.4;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct ShortTimeResult {
    std::vector<double> t;
    std::vector<double> log_density;  // ln of the density estimate at the identity
    std::vector<double> scaled_xy2;   // E[x^2 + y^2] / t (equals 4 in law)
    std::vector<double> scaled_z2;    // E[z^2] / t^2 (dilation invariant)
    double slope = 0.0;               // d ln p_t(e) / d ln t; -2 for the model
    double slope_se = 0.0;
    double intercept = 0.0;
};

/// Samples the Heisenberg diffusion at log-spaced horizons, estimates the
/// density at the identity with a product Gaussian kernel (per-coordinate
/// bandwidth sigma_j N^(-1/7)), and fits ln p_t(e) against ln t.
ShortTimeResult short_time_exponent(const ShortTimeConfig& cfg);

/// Coordinate rows of the first few simulated paths: result[path][step] is the
/// ambient coordinate vector after that many steps (step 0 = start).
std::vector<std::vector<std::vector<double>>> dump_trajectories(const GroupModel& m,
                                                                const GroupElement& g0, double t,
                                                                const DiffusionConfig& cfg,
                                                                int n_paths);

}  // namespace subriem
