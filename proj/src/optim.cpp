#include "subriem/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subriem {

double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double x_tol, int max_iter) {
    if (!(a < b)) throw std::invalid_argument("golden section needs a < b");
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x0, std::span<const double> step,
                          double f_tol, int max_iter) {
    size_t n = x0.size();
    if (step.size() != n) throw std::invalid_argument("nelder_mead: step size mismatch");
    std::vector<std::vector<double>> pts(n + 1, std::vector<double>(x0.begin(), x0.end()));
    for (size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    std::vector<double> vals(n + 1);
    SimplexResult res;
    for (size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
    res.evaluations = static_cast<int>(n + 1);

    std::vector<size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    for (int it = 0; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });
        size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::fabs(vals[worst] - vals[best]) <= f_tol * (1.0 + std::fabs(vals[best]))) {
            res.converged = true;
            res.x = pts[best];
            res.value = vals[best];
            return res;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

        auto blend = [&](std::vector<double>& out, double coef) {
            for (size_t j = 0; j < n; ++j)
                out[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
        };
        blend(trial, -1.0);  // reflection
        double fr = f(trial);
        ++res.evaluations;
        if (fr < vals[best]) {
            blend(trial2, -2.0);  // expansion
            double fe = f(trial2);
            ++res.evaluations;
            if (fe < fr) {
                pts[worst] = trial2;
                vals[worst] = fe;
            } else {
                pts[worst] = trial;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = trial;
            vals[worst] = fr;
        } else {
            double coef = fr < vals[worst] ? -0.5 : 0.5;
            blend(trial2, coef);
            double fc = f(trial2);
            ++res.evaluations;
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = trial2;
                vals[worst] = fc;
            } else {  // shrink towards the best vertex
                for (size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    vals[i] = f(pts[i]);
                    ++res.evaluations;
                }
            }
        }
    }
    size_t best = 0;
    for (size_t i = 1; i <= n; ++i)
        if (vals[i] < vals[best]) best = i;
    res.x = pts[best];
    res.value = vals[best];
    return res;
}

GradientResult lbfgs_minimize(
    const std::function<double(std::span<const double>, std::span<double>)>& fg,
    std::span<const double> x0, double g_tol, int max_iter, int history) {
    size_t n = x0.size();
    GradientResult res;
    std::vector<double> x(x0.begin(), x0.end()), g(n), xn(n), gn(n), dir(n);
    double fx = fg(x, g);
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    auto inf_norm = [](std::span<const double> v) {
        double m = 0.0;
        for (double a : v) m = std::max(m, std::fabs(a));
        return m;
    };
    auto dot = [](std::span<const double> a, std::span<const double> b) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    for (int it = 0; it < max_iter; ++it) {
        res.grad_norm = inf_norm(g);
        if (res.grad_norm <= g_tol) {
            res.converged = true;
            break;
        }
        // Two-loop recursion for the search direction.
        dir.assign(g.begin(), g.end());
        int m = static_cast<int>(s_hist.size());
        std::vector<double> alpha(m);
        for (int i = m - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], dir);
            for (size_t j = 0; j < n; ++j) dir[j] -= alpha[i] * y_hist[i][j];
        }
        if (m > 0) {
            double yy = dot(y_hist[m - 1], y_hist[m - 1]);
            double sy = dot(s_hist[m - 1], y_hist[m - 1]);
            if (yy > 0 && sy > 0)
                for (double& v : dir) v *= sy / yy;
        }
        for (int i = 0; i < m; ++i) {
            double beta = rho_hist[i] * dot(y_hist[i], dir);
            for (size_t j = 0; j < n; ++j) dir[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        for (double& v : dir) v = -v;

        double slope = dot(g, dir);
        if (slope >= 0.0) {  // safeguard: fall back to steepest descent
            for (size_t j = 0; j < n; ++j) dir[j] = -g[j];
            slope = -dot(g, g);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }
        double step = 1.0;
        double fn = fx;
        bool ok = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (size_t j = 0; j < n; ++j) xn[j] = x[j] + step * dir[j];
            fn = fg(xn, gn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * step * slope) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        ++res.iterations;
        if (!ok) break;  // no acceptable step: stationary for our purposes
        std::vector<double> s(n), yv(n);
        for (size_t j = 0; j < n; ++j) {
            s[j] = xn[j] - x[j];
            yv[j] = gn[j] - g[j];
        }
        double sy = dot(s, yv);
        if (sy > 1e-14) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > history) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }
        double drop = fx - fn;
        x.swap(xn);
        g.swap(gn);
        fx = fn;
        if (drop <= 1e-14 * (1.0 + std::fabs(fx))) {
            res.converged = true;
            break;
        }
    }
    res.x = std::move(x);
    res.value = fx;
    res.grad_norm = inf_norm(g);
    return res;
}

}  // namespace subriem
