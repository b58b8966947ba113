#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "subriem/rng.hpp"

namespace subriem {

/// The three model groups share the bracket relations
///   [X,Y] = Z,  [X,Z] = -rho*Y,  [Y,Z] = rho*X
/// with rho = 0 (Heisenberg), +1 (SU2), -1 (SL2) in the matrix realizations.
enum class Model { Heisenberg, SU2, SL2 };

const char* model_name(Model m);
Model model_from_name(const std::string& name);
double canonical_rho(Model m);

/// Number of real ambient coordinates: 9 (3x3 real), 8 (2x2 complex as re/im
/// pairs, row-major: re00 im00 re01 im01 re10 im10 re11 im11), 4 (2x2 real).
constexpr int coord_count(Model m) {
    switch (m) {
        case Model::Heisenberg: return 9;
        case Model::SU2: return 8;
        case Model::SL2: return 4;
    }
    return 0;
}

constexpr std::size_t kMaxCoords = 9;
using Coords = std::array<double, kMaxCoords>;

/// Coefficients (a,b,c) of a*X + b*Y + c*Z in the model basis.
struct AlgebraElement {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct GroupModel {
    Model kind;
    double rho;  // any real at the algebra level; matrix ops need the canonical value
};

GroupModel make_model(Model kind);
GroupModel make_model(Model kind, double rho);

AlgebraElement bracket(const AlgebraElement& u, const AlgebraElement& v, const GroupModel& g);

struct GroupElement {
    Model model = Model::Heisenberg;
    Coords c{};

    std::span<const double> coords() const { return {c.data(), static_cast<std::size_t>(coord_count(model))}; }
};

GroupElement identity(Model m);
GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

/// Matrix of a*X + b*Y + c*Z in ambient coordinates.
Coords embed(Model m, const AlgebraElement& A);

/// Closed-form exponential: polynomial (Heisenberg), cos/sinc (SU2),
/// cosh/sinhc or cos/sinc depending on the sign of -det (SL2).
GroupElement group_exp(Model m, const AlgebraElement& A);

/// Projects back onto the constraint set (unit upper-triangular / special
/// unitary via Gram-Schmidt / unit determinant). Used every few dozen
/// multiplications in long products to control drift.
GroupElement renormalize(const GroupElement& g);

/// exp of a Gaussian algebra element, coefficients N(0, sigma^2).
GroupElement random_element(Model m, Rng& rng, double sigma = 1.0);

/// Distance between ambient coordinate vectors (Frobenius on the matrices).
double coord_distance(const GroupElement& g, const GroupElement& h);
double coord_norm(const GroupElement& g);

/// How far g sits from the constraint set (exact-zero pattern, unitarity,
/// determinant). Zero for exact group members.
double membership_residual(const GroupElement& g);

/// Principal logarithm where defined (always for Heisenberg; within the
/// injectivity radius for SU2; tr > -2 elliptic/hyperbolic cases for SL2).
std::optional<AlgebraElement> group_log(const GroupElement& g);

// --- generic coordinate-level product --------------------------------------
// Right factor has plain double coordinates; the left factor's scalar type T
// may be a jet. Used both for group arithmetic (T = double) and for lifting
// matrix entries to jets when differentiating fields along invariant flows.

template <class T>
void mul_coords_right(Model m, const T* a, const double* b, T* out) {
    switch (m) {
        case Model::Heisenberg:
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    T s = a[i * 3 + 0] * b[0 * 3 + j];
                    s = s + a[i * 3 + 1] * b[1 * 3 + j];
                    s = s + a[i * 3 + 2] * b[2 * 3 + j];
                    out[i * 3 + j] = s;
                }
            return;
        case Model::SL2:
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out[i * 2 + j] = a[i * 2 + 0] * b[0 * 2 + j] + a[i * 2 + 1] * b[1 * 2 + j];
            return;
        case Model::SU2:
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    // (ar + i ai)(br + i bi) summed over k
                    T re = a[(i * 2 + 0) * 2] * b[(0 * 2 + j) * 2] - a[(i * 2 + 0) * 2 + 1] * b[(0 * 2 + j) * 2 + 1] +
                           a[(i * 2 + 1) * 2] * b[(1 * 2 + j) * 2] - a[(i * 2 + 1) * 2 + 1] * b[(1 * 2 + j) * 2 + 1];
                    T im = a[(i * 2 + 0) * 2] * b[(0 * 2 + j) * 2 + 1] + a[(i * 2 + 0) * 2 + 1] * b[(0 * 2 + j) * 2] +
                           a[(i * 2 + 1) * 2] * b[(1 * 2 + j) * 2 + 1] + a[(i * 2 + 1) * 2 + 1] * b[(1 * 2 + j) * 2];
                    out[(i * 2 + j) * 2] = re;
                    out[(i * 2 + j) * 2 + 1] = im;
                }
            return;
    }
}

}  // namespace subriem
