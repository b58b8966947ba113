#include "subriem/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace subriem {

MeanVar mean_var(std::span<const double> xs) {
    MeanVar mv;
    mv.n = static_cast<long long>(xs.size());
    if (mv.n == 0) return mv;
    double s = 0.0;
    for (double x : xs) s += x;
    mv.mean = s / static_cast<double>(mv.n);
    if (mv.n < 2) return mv;
    double ss = 0.0;
    for (double x : xs) {
        double d = x - mv.mean;
        ss += d * d;
    }
    mv.var = ss / static_cast<double>(mv.n - 1);
    mv.std_error = std::sqrt(mv.var / static_cast<double>(mv.n));
    return mv;
}

MomentAccumulator::MomentAccumulator(int dim)
    : d_(dim), sum_(static_cast<size_t>(dim), 0.0),
      cross_(static_cast<size_t>(dim) * dim, 0.0) {
    if (dim <= 0) throw std::invalid_argument("accumulator dimension must be positive");
}

void MomentAccumulator::add(std::span<const double> x) {
    if (static_cast<int>(x.size()) != d_)
        throw std::invalid_argument("accumulator dimension mismatch");
    ++n_;
    for (int i = 0; i < d_; ++i) {
        sum_[i] += x[i];
        for (int j = 0; j < d_; ++j) cross_[static_cast<size_t>(i) * d_ + j] += x[i] * x[j];
    }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.d_ != d_) throw std::invalid_argument("accumulator dimension mismatch");
    n_ += other.n_;
    for (size_t i = 0; i < sum_.size(); ++i) sum_[i] += other.sum_[i];
    for (size_t i = 0; i < cross_.size(); ++i) cross_[i] += other.cross_[i];
}

std::vector<double> MomentAccumulator::mean() const {
    std::vector<double> m(sum_);
    if (n_ == 0) return m;
    for (double& v : m) v /= static_cast<double>(n_);
    return m;
}

std::vector<double> MomentAccumulator::covariance() const {
    std::vector<double> c(cross_.size(), 0.0);
    if (n_ < 2) return c;
    std::vector<double> m = mean();
    double nn = static_cast<double>(n_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
            size_t ij = static_cast<size_t>(i) * d_ + j;
            c[ij] = (cross_[ij] - nn * m[i] * m[j]) / (nn - 1.0);
        }
    return c;
}

std::vector<double> MomentAccumulator::mean_covariance() const {
    std::vector<double> c = covariance();
    if (n_ > 0)
        for (double& v : c) v /= static_cast<double>(n_);
    return c;
}

double delta_method_se(std::span<const double> grad, std::span<const double> mean_cov) {
    size_t d = grad.size();
    if (mean_cov.size() != d * d) throw std::invalid_argument("covariance size mismatch");
    double q = 0.0;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) q += grad[i] * mean_cov[i * d + j] * grad[j];
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

namespace {

LineFit fit_core(std::span<const double> x, std::span<const double> y,
                 std::span<const double> w, bool known_variance) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("line fit needs matched x/y with n >= 2");
    LineFit out;
    out.n = static_cast<long long>(x.size());
    double sw = 0, swx = 0, swy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        sw += wi;
        swx += wi * x[i];
        swy += wi * y[i];
    }
    double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        sxx += wi * (x[i] - xbar) * (x[i] - xbar);
        sxy += wi * (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx <= 0.0) throw std::invalid_argument("line fit: degenerate abscissae");
    out.slope = sxy / sxx;
    out.intercept = ybar - out.slope * xbar;
    double rss = 0, tss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        double r = y[i] - out.intercept - out.slope * x[i];
        rss += wi * r * r;
        tss += wi * (y[i] - ybar) * (y[i] - ybar);
    }
    out.r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    double var_scale;
    if (known_variance) {
        var_scale = 1.0;  // w_i = 1/sigma_i^2 carries the noise level
    } else {
        var_scale = out.n > 2 ? rss / static_cast<double>(out.n - 2) : 0.0;
    }
    out.slope_se = std::sqrt(var_scale / sxx);
    out.intercept_se = std::sqrt(var_scale * (1.0 / sw + xbar * xbar / sxx));
    return out;
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    return fit_core(x, y, {}, false);
}

LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w) {
    if (w.size() != x.size()) throw std::invalid_argument("weight vector size mismatch");
    return fit_core(x, y, w, true);
}

}  // namespace subriem
