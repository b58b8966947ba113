#pragma once

#include <cstdint>
#include <vector>

#include "subriem/group.hpp"

namespace subriem {

struct PathConfig {
    int intervals = 40;            // piecewise-constant control cells on [0,1]
    int starts = 8;                // multistart count (first start is informed)
    int stages = 5;                // penalty continuation stages; the final
                                   // weight sets the reachable endpoint gap
    double penalty0 = 100.0;       // initial endpoint penalty weight
    double penalty_growth = 10.0;  // weight multiplier per stage
    double endpoint_tol = 1e-5;    // ambient-coordinate gap accepted as "reached"
    int max_iter = 400;            // optimizer iterations per stage
    std::uint64_t seed = 1;        // stream for the random restarts
};

/// A horizontal path from x: piecewise-constant controls (u1, u2) driving
/// g' = u1 X(g) + u2 Y(g) on the unit time interval.
struct HorizontalPath {
    Model model = Model::Heisenberg;
    std::vector<double> u1;
    std::vector<double> u2;
    double length = 0.0;        // sum dt * |u_k|
    double energy = 0.0;        // sum dt * |u_k|^2
    GroupElement endpoint;      // state reached from the left endpoint x
    double endpoint_gap = 0.0;  // ambient-coordinate distance to the target y
    bool converged = false;
};

struct CcResult {
    double distance = 0.0;  // length of the best admissible path (upper bound)
    HorizontalPath path;
};

/// Upper bound on the control distance d(x, y): minimizes control energy plus
/// a growing endpoint penalty from several starts, then reports the length of
/// the best path whose endpoint gap is within tolerance. Only the relative
/// displacement inverse(x) * y enters, so the bound is left-invariant by
/// construction.
CcResult cc_distance(Model m, const GroupElement& x, const GroupElement& y,
                     const PathConfig& cfg = {});

/// Group states along the path, starting at x (intervals + 1 entries).
std::vector<GroupElement> path_states(const GroupElement& x, const HorizontalPath& path);

struct DiameterReport {
    std::vector<double> distances;
    double max_distance = 0.0;
    int converged = 0;
    int pairs = 0;
};

/// Distance bounds between random pairs of invariant-measure draws on the
/// compact model; the running maximum probes the diameter.
DiameterReport diameter_probe(int n_pairs, const PathConfig& cfg, std::uint64_t seed = 1);

}  // namespace subriem
