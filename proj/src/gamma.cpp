#include "subriem/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subriem {

ScalarField L_op(const ScalarField& f) { return dX(dX(f)) + dY(dY(f)); }

ScalarField gamma(const ScalarField& f, const ScalarField& g) {
    return dX(f) * dX(g) + dY(f) * dY(g);
}

ScalarField gamma_via_definition(const ScalarField& f, const ScalarField& g) {
    return 0.5 * (L_op(f * g) - f * L_op(g) - g * L_op(f));
}

ScalarField Z_direct(const ScalarField& f) { return dZ(f); }

ScalarField Z_from_commutator(const ScalarField& f) { return dX(dY(f)) - dY(dX(f)); }

ScalarField gamma2(const ScalarField& f) {
    return 0.5 * (L_op(gamma(f, f)) - 2.0 * gamma(f, L_op(f)));
}

ScalarField gamma2_expanded(const ScalarField& f, double rho) {
    ScalarField xx = dX(dX(f));
    ScalarField yy = dY(dY(f));
    ScalarField sym = dX(dY(f)) + dY(dX(f));
    ScalarField zf = dZ(f);
    ScalarField core = xx * xx + yy * yy + 0.5 * (sym * sym) + 0.5 * (zf * zf);
    ScalarField cross = -2.0 * (dX(f) * dY(zf)) + 2.0 * (dY(f) * dX(zf));
    if (rho != 0.0) return core + rho * gamma(f, f) + cross;
    return core + cross;
}

GammaReport check_gamma2_identity(Model m, const std::vector<ScalarField>& fields,
                                  const std::vector<GroupElement>& points) {
    GammaReport rep;
    double rho = canonical_rho(m);
    for (int fi = 0; fi < static_cast<int>(fields.size()); ++fi) {
        ScalarField lhs = gamma2(fields[fi]);
        ScalarField rhs = gamma2_expanded(fields[fi], rho);
        for (int pi = 0; pi < static_cast<int>(points.size()); ++pi) {
            Gamma2Sample s;
            s.field_index = fi;
            s.point_index = pi;
            s.definition = lhs(points[pi]);
            s.expanded = rhs(points[pi]);
            s.abs_gap = std::fabs(s.definition - s.expanded);
            s.rel_gap = s.abs_gap / (1.0 + std::fabs(s.definition));
            rep.max_abs_gap = std::max(rep.max_abs_gap, s.abs_gap);
            rep.max_rel_gap = std::max(rep.max_rel_gap, s.rel_gap);
            rep.samples.push_back(s);
        }
    }
    return rep;
}

CommutatorReport check_commutators(Model m, const std::vector<ScalarField>& fields,
                                   const std::vector<GroupElement>& points) {
    CommutatorReport rep;
    double rho = canonical_rho(m);
    for (const ScalarField& f : fields) {
        ScalarField zf = dZ(f);
        ScalarField xy_z = Z_from_commutator(f) - zf;
        ScalarField xz = dX(zf) - dZ(dX(f)) + rho * dY(f);
        ScalarField yz = dY(zf) - dZ(dY(f)) - rho * dX(f);
        ScalarField lz = L_op(zf) - dZ(L_op(f));
        ScalarField mixed = dX(f) * zf * (dX(zf) - dZ(dX(f))) + dY(f) * zf * (dY(zf) - dZ(dY(f)));
        // Mixed cancellation: with [X,Z] = -rho Y and [Y,Z] = rho X the two
        // terms combine to rho Zf (Yf Xf - Xf Yf) = 0.
        ScalarField g_gap = gamma(f, f) - gamma_via_definition(f, f);
        ScalarField z_gap = zf - Z_from_commutator(f);
        for (const GroupElement& p : points) {
            rep.xy_minus_z = std::max(rep.xy_minus_z, std::fabs(xy_z(p)));
            rep.xz_plus_rho_y = std::max(rep.xz_plus_rho_y, std::fabs(xz(p)));
            rep.yz_minus_rho_x = std::max(rep.yz_minus_rho_x, std::fabs(yz(p)));
            rep.lz_commutator = std::max(rep.lz_commutator, std::fabs(lz(p)));
            rep.mixed_cancellation = std::max(rep.mixed_cancellation, std::fabs(mixed(p)));
            rep.gamma_routes = std::max(rep.gamma_routes, std::fabs(g_gap(p)));
            rep.z_routes = std::max(rep.z_routes, std::fabs(z_gap(p)));
            ++rep.checked;
        }
    }
    return rep;
}

BoundReport gamma2_lower_bound_check(Model m, const std::vector<ScalarField>& fields,
                                     const std::vector<GroupElement>& points, double lambda) {
    BoundReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    double rho = canonical_rho(m);
    for (const ScalarField& f : fields) {
        ScalarField lf = L_op(f);
        ScalarField zf = dZ(f);
        ScalarField margin = gamma2_expanded(f, rho) - 0.5 * (lf * lf) - 0.5 * (zf * zf) -
                             (rho - 1.0 / lambda) * gamma(f, f) + lambda * gamma(zf, zf);
        for (const GroupElement& p : points) {
            rep.min_margin = std::min(rep.min_margin, margin(p));
            ++rep.checked;
        }
    }
    return rep;
}

BoundReport quadratic_bound_check(Model m, const std::vector<ScalarField>& fields,
                                  const std::vector<GroupElement>& points,
                                  const std::vector<double>& gammas) {
    BoundReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const ScalarField& f : fields) {
        ScalarField lf = L_op(f);
        for (const GroupElement& p : points) {
            double v = lf(p);
            for (double g : gammas) {
                rep.min_margin = std::min(rep.min_margin, v * v - 2.0 * g * v + g * g);
                ++rep.checked;
            }
        }
    }
    (void)m;
    return rep;
}

}  // namespace subriem
