#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "subriem/field.hpp"
#include "subriem/group.hpp"
#include "subriem/heat_mc.hpp"
#include "subriem/rng.hpp"

namespace subriem {

/// One draw from the bi-invariant probability measure on SU(2): a unit
/// quaternion (four normals, normalized) mapped to the matrix
/// [[a, b], [-conj b, conj a]] with a = q0 + i q1, b = q2 + i q3.
GroupElement haar_sample_su2(Rng& rng);

/// Deterministic batch for a given seed.
std::vector<GroupElement> haar_samples_su2(std::uint64_t seed, int n);

struct SpectralConfig {
    int haar_samples = 192;        // measure points per horizon
    long long inner_paths = 192;   // diffusion paths behind each semigroup mean
    double step = 1e-2;            // diffusion time step
    int center_samples = 16384;    // draws used to center f under the measure
    std::uint64_t seed = 1;
    int threads = 0;
};

struct SpectralEstimate {
    double decay_rate = 0.0;  // fitted rate of the squared-norm decay
    double rate_se = 0.0;
    double ci_lo = 0.0;       // three-sigma band around the rate
    double ci_hi = 0.0;
    double f_mean = 0.0;      // empirical centering constant
    double f_variance = 0.0;  // sample variance of f under the measure
    std::vector<double> t_grid;
    std::vector<double> variance;     // squared-norm estimate per horizon
    std::vector<double> variance_se;
    std::vector<int> kept;            // horizons that entered the fit
    double residual_rms = 0.0;        // scatter of ln V around the fitted line
};

/// Fits exp(-rate * t) to the squared norm of the centered semigroup image
/// of f, measured by a product of two independent path means at every sample
/// point of the invariant measure. Compact-model only (the estimator centers
/// f against the invariant probability measure, so it requires SU(2)).
/// Throws when f has no measurable variance, when fewer than three horizons
/// rise above their own noise, or when the fit residual says the decay is not
/// exponential over the window.
SpectralEstimate variance_decay(const ScalarField& f, std::span<const double> t_grid,
                                const SpectralConfig& cfg);

struct PoincareReport {
    double margin = 0.0;      // (3/rho) * mean Gamma(f) - sample variance of f
    double sigma = 0.0;       // influence-function standard error of the margin
    double var_f = 0.0;
    double mean_gamma = 0.0;
    long long samples = 0;
    bool pass = false;        // margin >= -3 sigma
};

/// Monte Carlo check of the spectral-gap inequality
///   integral f^2 dmu <= (integral f dmu)^2 + (3/rho) integral Gamma(f) dmu
/// on SU(2), both sides sampled from the same deterministic measure draws.
PoincareReport poincare_check(const ScalarField& f, long long n_samples = 4096,
                              std::uint64_t seed = 1);

struct UltracontractivityFit {
    double amplitude_log = 0.0;  // intercept A of ln p_t(e,e) ~ A - C ln t
    double decay_order = 0.0;    // fitted C; 2 is the expected small-time order
    double residual_rms = 0.0;
    ShortTimeResult detail;
};

/// Reads the on-diagonal small-time blow-up order off the short-horizon
/// density fit; thin wrapper over short_time_exponent.
UltracontractivityFit ultracontractivity_probe(const ShortTimeConfig& cfg);

}  // namespace subriem
