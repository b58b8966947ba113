#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace subriem {

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;       // unbiased sample variance
    double std_error = 0.0; // sqrt(var / n)
    long long n = 0;
};

MeanVar mean_var(std::span<const double> xs);

/// Streaming first and second moments of d-dimensional samples; chunks can be
/// accumulated separately and merged in a fixed order for reproducibility.
class MomentAccumulator {
  public:
    explicit MomentAccumulator(int dim);
    void add(std::span<const double> x);
    void merge(const MomentAccumulator& other);
    int dim() const { return d_; }
    long long count() const { return n_; }
    std::vector<double> mean() const;
    /// d x d row-major unbiased sample covariance of a single observation.
    std::vector<double> covariance() const;
    /// Covariance of the sample-mean vector: covariance() / n.
    std::vector<double> mean_covariance() const;

  private:
    int d_;
    long long n_ = 0;
    std::vector<double> sum_;
    std::vector<double> cross_;  // upper triangle packed row-major d*d (full)
};

/// Standard error of g(mean) with gradient grad: sqrt(grad^T C grad) where C
/// is the covariance of the mean vector (row-major d*d).
double delta_method_se(std::span<const double> grad, std::span<const double> mean_cov);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    double r2 = 0.0;
    long long n = 0;
};

/// Ordinary least squares; slope_se from residual variance.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Weighted least squares with w_i = 1 / sigma_i^2; the standard errors come
/// from the weight matrix (known-variance model), not from residuals.
LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w);

}  // namespace subriem
