#include "subriem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace subriem {
namespace {

// Kronrod-15 abscissae on [0,1] side (symmetric) and weights; every second
// node is a Gauss-7 node.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000,
};
constexpr double kWk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct Segment {
    double a = 0.0;
    double b = 0.0;
    double integral = 0.0;
    double error = 0.0;
};

Segment eval_segment(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double kron = kWk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double lo = f(c - h * kXgk[j]);
        double hi = f(c + h * kXgk[j]);
        kron += kWk[j] * (lo + hi);
        if (j % 2 == 1) gauss += kWg[j / 2] * (lo + hi);
    }
    if (!std::isfinite(kron)) throw std::runtime_error("quadrature: non-finite integrand value");
    Segment s;
    s.a = a;
    s.b = b;
    s.integral = kron * h;
    double diff = std::fabs(kron - gauss) * h;
    // Classic QUADPACK-style sharpening of the raw discrepancy.
    double scale = std::fabs(s.integral) + 1e-300;
    s.error = scale * std::min(1.0, std::pow(200.0 * diff / scale, 1.5));
    if (s.error < diff) s.error = diff * 1e-2;
    return s;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol) {
    QuadratureResult res;
    if (a == b) return res;
    std::vector<Segment> segs;
    segs.push_back(eval_segment(f, a, b));
    res.evaluations = 15;
    const int max_segments = 4000;
    for (;;) {
        double total = 0.0, err = 0.0;
        size_t worst = 0;
        for (size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].integral;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        double target = std::max(abs_tol, rel_tol * std::fabs(total));
        if (err <= target || segs[worst].error == 0.0) {
            res.value = total;
            res.error = err;
            res.segments = static_cast<int>(segs.size());
            return res;
        }
        if (static_cast<int>(segs.size()) >= max_segments)
            throw std::runtime_error("quadrature: subdivision budget exhausted");
        Segment seg = segs[worst];
        double mid = 0.5 * (seg.a + seg.b);
        if (mid <= seg.a || mid >= seg.b)
            throw std::runtime_error("quadrature: interval collapsed below machine precision");
        segs[worst] = eval_segment(f, seg.a, mid);
        segs.push_back(eval_segment(f, mid, seg.b));
        res.evaluations += 30;
    }
}

int power_substitution_order(double sigma) {
    if (sigma >= 1.0) return 1;
    if (sigma <= -1.0) throw std::invalid_argument("endpoint exponent must exceed -1");
    int k = static_cast<int>(std::ceil(2.0 / (1.0 + sigma) - 1e-12));
    return std::clamp(k, 1, 64);
}

QuadratureResult integrate_singular(const std::function<double(double)>& f, double a, double b,
                                    double sigma_left, double sigma_right, double rel_tol) {
    int kl = power_substitution_order(sigma_left);
    int kr = power_substitution_order(sigma_right);
    if (kl == 1 && kr == 1) return integrate(f, a, b, rel_tol);

    auto left_part = [&](double lo, double hi) {
        // x = lo + (hi-lo) tau^kl over tau in [0,1]
        double h = hi - lo;
        auto g = [&f, lo, h, kl](double tau) {
            double tk = std::pow(tau, kl - 1);
            return f(lo + h * tk * tau) * kl * h * tk;
        };
        return integrate(g, 0.0, 1.0, rel_tol);
    };
    auto right_part = [&](double lo, double hi) {
        // x = hi - (hi-lo) tau^kr over tau in [0,1]
        double h = hi - lo;
        auto g = [&f, hi, h, kr](double tau) {
            double tk = std::pow(tau, kr - 1);
            return f(hi - h * tk * tau) * kr * h * tk;
        };
        return integrate(g, 0.0, 1.0, rel_tol);
    };

    QuadratureResult res;
    if (kl > 1 && kr > 1) {
        double mid = 0.5 * (a + b);
        QuadratureResult l = left_part(a, mid);
        QuadratureResult r = right_part(mid, b);
        res.value = l.value + r.value;
        res.error = l.error + r.error;
        res.evaluations = l.evaluations + r.evaluations;
        res.segments = l.segments + r.segments;
    } else if (kl > 1) {
        res = left_part(a, b);
    } else {
        res = right_part(a, b);
    }
    return res;
}

}  // namespace subriem
