#pragma once

#include <vector>

#include "subriem/field.hpp"

namespace subriem {

/// Sub-Laplacian L = X^2 + Y^2 (sum of squares of the two horizontal fields).
ScalarField L_op(const ScalarField& f);

/// Carre du champ, direct form Xf Xg + Yf Yg.
ScalarField gamma(const ScalarField& f, const ScalarField& g);

/// Same bilinear form via (1/2)(L(fg) - f Lg - g Lf); agreement with the
/// direct form is a consistency check of the jet engine.
ScalarField gamma_via_definition(const ScalarField& f, const ScalarField& g);

/// Vertical derivative, either directly along Z or as the commutator XY - YX.
ScalarField Z_direct(const ScalarField& f);
ScalarField Z_from_commutator(const ScalarField& f);

/// Iterated form: (1/2)(L Gamma(f,f) - 2 Gamma(f, Lf)). Needs depth 3.
ScalarField gamma2(const ScalarField& f);

/// Expanded form:
///   (X^2 f)^2 + (Y^2 f)^2 + 1/2 ((XY+YX) f)^2 + 1/2 (Zf)^2
///   + rho Gamma(f,f) - 2 Xf YZf + 2 Yf XZf.
ScalarField gamma2_expanded(const ScalarField& f, double rho);

struct Gamma2Sample {
    int field_index = 0;
    int point_index = 0;
    double definition = 0.0;
    double expanded = 0.0;
    double abs_gap = 0.0;
    double rel_gap = 0.0;  // abs_gap / (1 + |definition|)
};

struct GammaReport {
    std::vector<Gamma2Sample> samples;
    double max_abs_gap = 0.0;
    double max_rel_gap = 0.0;
};

GammaReport check_gamma2_identity(Model m, const std::vector<ScalarField>& fields,
                                  const std::vector<GroupElement>& points);

/// Largest absolute error over fields x points for each operator identity.
struct CommutatorReport {
    double xy_minus_z = 0.0;       // (XY-YX)f - Zf
    double xz_plus_rho_y = 0.0;    // (XZ-ZX)f + rho Yf
    double yz_minus_rho_x = 0.0;   // (YZ-ZY)f - rho Xf
    double lz_commutator = 0.0;    // (LZ-ZL)f
    double mixed_cancellation = 0.0;  // Xf Zf [X,Z]f + Yf Zf [Y,Z]f
    double gamma_routes = 0.0;     // direct Gamma vs definition
    double z_routes = 0.0;         // direct Z vs commutator
    int checked = 0;
};

CommutatorReport check_commutators(Model m, const std::vector<ScalarField>& fields,
                                   const std::vector<GroupElement>& points);

/// Pointwise margin of
///   Gamma2(g) >= 1/2 (Lg)^2 + 1/2 (Zg)^2 + (rho - 1/lambda) Gamma(g) - lambda Gamma(Zg).
struct BoundReport {
    double min_margin = 0.0;
    int checked = 0;
};

BoundReport gamma2_lower_bound_check(Model m, const std::vector<ScalarField>& fields,
                                     const std::vector<GroupElement>& points, double lambda);

/// (v - gamma)^2 >= 0 in the scalarized form v^2 >= 2 gamma v - gamma^2,
/// sampled over v = Lg values and a gamma grid.
BoundReport quadratic_bound_check(Model m, const std::vector<ScalarField>& fields,
                                  const std::vector<GroupElement>& points,
                                  const std::vector<double>& gammas);

}  // namespace subriem
