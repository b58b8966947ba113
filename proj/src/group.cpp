#include "subriem/group.hpp"

#include <cmath>

namespace subriem {

namespace {

void require_same(const GroupElement& g, const GroupElement& h) {
    if (g.model != h.model)
        throw std::invalid_argument("group elements belong to different models");
}

/// sin(x)/x and friends with series fallbacks near zero.
double sinc(double x) {
    if (std::fabs(x) < 1e-5) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}
double sinhc(double x) {
    if (std::fabs(x) < 1e-5) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

}  // namespace

const char* model_name(Model m) {
    switch (m) {
        case Model::Heisenberg: return "heisenberg";
        case Model::SU2: return "su2";
        case Model::SL2: return "sl2";
    }
    return "?";
}

Model model_from_name(const std::string& name) {
    if (name == "heisenberg" || name == "h3") return Model::Heisenberg;
    if (name == "su2") return Model::SU2;
    if (name == "sl2") return Model::SL2;
    throw std::invalid_argument("unknown model: " + name);
}

double canonical_rho(Model m) {
    switch (m) {
        case Model::Heisenberg: return 0.0;
        case Model::SU2: return 1.0;
        case Model::SL2: return -1.0;
    }
    return 0.0;
}

GroupModel make_model(Model kind) { return {kind, canonical_rho(kind)}; }
GroupModel make_model(Model kind, double rho) { return {kind, rho}; }

AlgebraElement bracket(const AlgebraElement& u, const AlgebraElement& v, const GroupModel& g) {
    // [u, v] with [X,Y]=Z, [X,Z]=-rho Y, [Y,Z]=rho X.
    AlgebraElement r;
    r.c = u.a * v.b - u.b * v.a;
    r.b = -g.rho * (u.a * v.c - u.c * v.a);
    r.a = g.rho * (u.b * v.c - u.c * v.b);
    return r;
}

GroupElement identity(Model m) {
    GroupElement g;
    g.model = m;
    switch (m) {
        case Model::Heisenberg:
            g.c = {1, 0, 0, 0, 1, 0, 0, 0, 1};
            break;
        case Model::SU2:
            g.c = {1, 0, 0, 0, 0, 0, 1, 0, 0};  // re00=1, re11=1
            break;
        case Model::SL2:
            g.c = {1, 0, 0, 1, 0, 0, 0, 0, 0};
            break;
    }
    return g;
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    require_same(g, h);
    GroupElement r;
    r.model = g.model;
    mul_coords_right(g.model, g.c.data(), h.c.data(), r.c.data());
    return r;
}

GroupElement inverse(const GroupElement& g) {
    GroupElement r;
    r.model = g.model;
    switch (g.model) {
        case Model::Heisenberg: {
            const double x = g.c[1], z = g.c[2], y = g.c[5];
            r = identity(g.model);
            r.c[1] = -x;
            r.c[5] = -y;
            r.c[2] = -z + x * y;
            break;
        }
        case Model::SL2: {
            // adjugate; group members have determinant one
            const double det = g.c[0] * g.c[3] - g.c[1] * g.c[2];
            r.c = {g.c[3] / det, -g.c[1] / det, -g.c[2] / det, g.c[0] / det, 0, 0, 0, 0, 0};
            break;
        }
        case Model::SU2: {
            // complex adjugate / det
            const double dr = (g.c[0] * g.c[6] - g.c[1] * g.c[7]) - (g.c[2] * g.c[4] - g.c[3] * g.c[5]);
            const double di = (g.c[0] * g.c[7] + g.c[1] * g.c[6]) - (g.c[2] * g.c[5] + g.c[3] * g.c[4]);
            const double n = dr * dr + di * di;
            auto divd = [&](double re, double im, double* outre, double* outim) {
                *outre = (re * dr + im * di) / n;
                *outim = (im * dr - re * di) / n;
            };
            double re, im;
            divd(g.c[6], g.c[7], &re, &im);
            r.c[0] = re;
            r.c[1] = im;
            divd(-g.c[2], -g.c[3], &re, &im);
            r.c[2] = re;
            r.c[3] = im;
            divd(-g.c[4], -g.c[5], &re, &im);
            r.c[4] = re;
            r.c[5] = im;
            divd(g.c[0], g.c[1], &re, &im);
            r.c[6] = re;
            r.c[7] = im;
            break;
        }
    }
    return r;
}

Coords embed(Model m, const AlgebraElement& A) {
    Coords c{};
    switch (m) {
        case Model::Heisenberg:
            c = {0, A.a, A.c, 0, 0, A.b, 0, 0, 0};
            break;
        case Model::SU2:
            // (1/2) [[i c, a + i b], [-a + i b, -i c]]
            c = {0, A.c / 2, A.a / 2, A.b / 2, -A.a / 2, A.b / 2, 0, -A.c / 2};
            break;
        case Model::SL2:
            // (1/2) [[a, b + c], [b - c, -a]]
            c = {A.a / 2, (A.b + A.c) / 2, (A.b - A.c) / 2, -A.a / 2};
            break;
    }
    return c;
}

GroupElement group_exp(Model m, const AlgebraElement& A) {
    GroupElement g;
    g.model = m;
    switch (m) {
        case Model::Heisenberg: {
            // strictly upper triangular: exp = I + M + M^2/2
            g = identity(m);
            g.c[1] = A.a;
            g.c[5] = A.b;
            g.c[2] = A.c + A.a * A.b / 2.0;
            break;
        }
        case Model::SU2: {
            const double th = 0.5 * std::sqrt(A.a * A.a + A.b * A.b + A.c * A.c);
            const double C = std::cos(th), S = sinc(th);
            const Coords M = embed(m, A);
            for (int k = 0; k < 8; ++k) g.c[k] = S * M[k];
            g.c[0] += C;
            g.c[6] += C;
            break;
        }
        case Model::SL2: {
            // M^2 = delta * I with delta = -det(M) = (a^2 + b^2 - c^2)/4
            const double delta = (A.a * A.a + A.b * A.b - A.c * A.c) / 4.0;
            double C, S;
            if (delta >= 0.0) {
                const double r = std::sqrt(delta);
                C = std::cosh(r);
                S = sinhc(r);
            } else {
                const double r = std::sqrt(-delta);
                C = std::cos(r);
                S = sinc(r);
            }
            const Coords M = embed(m, A);
            for (int k = 0; k < 4; ++k) g.c[k] = S * M[k];
            g.c[0] += C;
            g.c[3] += C;
            break;
        }
    }
    return g;
}

GroupElement renormalize(const GroupElement& g) {
    GroupElement r = g;
    switch (g.model) {
        case Model::Heisenberg:
            r.c[0] = r.c[4] = r.c[8] = 1.0;
            r.c[3] = r.c[6] = r.c[7] = 0.0;
            break;
        case Model::SL2: {
            const double det = r.c[0] * r.c[3] - r.c[1] * r.c[2];
            if (det <= 0.0) throw std::runtime_error("renormalize: SL2 drift past determinant zero");
            const double s = 1.0 / std::sqrt(det);
            for (int k = 0; k < 4; ++k) r.c[k] *= s;
            break;
        }
        case Model::SU2: {
            // Gram-Schmidt on the first row, second row = orthonormal complement
            // with the phase fixed by det = 1: rows (alpha, beta), (-conj beta, conj alpha).
            double ar = r.c[0], ai = r.c[1], br = r.c[2], bi = r.c[3];
            const double n = std::sqrt(ar * ar + ai * ai + br * br + bi * bi);
            if (n == 0.0) throw std::runtime_error("renormalize: SU2 drift to zero matrix");
            ar /= n;
            ai /= n;
            br /= n;
            bi /= n;
            r.c = {ar, ai, br, bi, -br, bi, ar, -ai, 0};
            break;
        }
    }
    return r;
}

GroupElement random_element(Model m, Rng& rng, double sigma) {
    AlgebraElement A{sigma * rng.normal(), sigma * rng.normal(), sigma * rng.normal()};
    return group_exp(m, A);
}

double coord_distance(const GroupElement& g, const GroupElement& h) {
    require_same(g, h);
    double s = 0.0;
    for (int k = 0; k < coord_count(g.model); ++k) {
        const double d = g.c[k] - h.c[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double coord_norm(const GroupElement& g) {
    double s = 0.0;
    for (int k = 0; k < coord_count(g.model); ++k) s += g.c[k] * g.c[k];
    return std::sqrt(s);
}

double membership_residual(const GroupElement& g) {
    switch (g.model) {
        case Model::Heisenberg: {
            double r = 0.0;
            r += std::fabs(g.c[0] - 1) + std::fabs(g.c[4] - 1) + std::fabs(g.c[8] - 1);
            r += std::fabs(g.c[3]) + std::fabs(g.c[6]) + std::fabs(g.c[7]);
            return r;
        }
        case Model::SL2: {
            const double det = g.c[0] * g.c[3] - g.c[1] * g.c[2];
            return std::fabs(det - 1.0);
        }
        case Model::SU2: {
            // unitary with determinant one <=> rows (alpha, beta), (-conj beta, conj alpha), |alpha|^2+|beta|^2 = 1
            const double unit = std::fabs(g.c[0] * g.c[0] + g.c[1] * g.c[1] + g.c[2] * g.c[2] + g.c[3] * g.c[3] - 1.0);
            const double patt = std::fabs(g.c[4] + g.c[2]) + std::fabs(g.c[5] - g.c[3]) +
                                std::fabs(g.c[6] - g.c[0]) + std::fabs(g.c[7] + g.c[1]);
            return unit + patt;
        }
    }
    return 0.0;
}

std::optional<AlgebraElement> group_log(const GroupElement& g) {
    switch (g.model) {
        case Model::Heisenberg: {
            const double x = g.c[1], z = g.c[2], y = g.c[5];
            return AlgebraElement{x, y, z - x * y / 2.0};
        }
        case Model::SU2: {
            double C = 0.5 * (g.c[0] + g.c[6]);
            if (C > 1.0) C = 1.0;
            if (C < -1.0) C = -1.0;
            const double th = std::acos(C);
            const double S = sinc(th);
            if (S < 1e-8) {
                if (th < 1.0) return AlgebraElement{0, 0, 0};
                return std::nullopt;  // antipodal ambiguity
            }
            // averaged over the two slots each coefficient occupies
            return AlgebraElement{(g.c[2] - g.c[4]) / S, (g.c[3] + g.c[5]) / S, (g.c[1] - g.c[7]) / S};
        }
        case Model::SL2: {
            const double tr2 = 0.5 * (g.c[0] + g.c[3]);
            double S;
            if (tr2 > 1.0) {
                const double r = std::acosh(tr2);
                S = sinhc(r);
            } else if (tr2 > -1.0) {
                const double r = std::acos(tr2);
                S = sinc(r);
                if (S < 1e-8) return std::nullopt;
            } else {
                return std::nullopt;
            }
            const double a = (g.c[0] - g.c[3]) / S;
            const double bpc = 2.0 * g.c[1] / S;
            const double bmc = 2.0 * g.c[2] / S;
            return AlgebraElement{a, (bpc + bmc) / 2.0, (bpc - bmc) / 2.0};
        }
    }
    return std::nullopt;
}

}  // namespace subriem
