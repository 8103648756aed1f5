#pragma once

// Monotone nearest-sample matching between two sampled trajectories.
// Orbit comparisons up to time reparametrization use the matched
// distance: each sample of the first trajectory is paired with the
// closest not-yet-passed sample of the second inside a time window.

#include "geolab/flow.hpp"

namespace geolab {

struct MatchResult {
    std::vector<double> dists;  // matched Sasaki distance per sample of A
    std::vector<size_t> pairs;  // index into B matched to each sample of A
    double sup_dist = 0.0;
    double reparam_dev = 0.0;   // sup |t_B(match) - t_A|
};

/// Match every sample of A to a sample of B, monotone in time, searching
/// within [t_A - window, t_A + window]. Uses the quotient-aware distance
/// on the constant model.
inline MatchResult match_trajectories(const SurfaceModel& M, const Trajectory& A,
                                      const Trajectory& B, double window) {
    if (A.samples.empty() || B.samples.empty())
        throw GeolabError("match_trajectories: empty trajectory");
    MatchResult out;
    out.dists.reserve(A.samples.size());
    out.pairs.reserve(A.samples.size());
    size_t lo = 0;
    for (const auto& a : A.samples) {
        while (lo + 1 < B.samples.size() && B.samples[lo].t < a.t - window) ++lo;
        size_t best_j = lo;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = lo; j < B.samples.size() && B.samples[j].t <= a.t + window; ++j) {
            double d = surface_sasaki_distance(M, a.theta, B.samples[j].theta);
            if (d < best_d) {
                best_d = d;
                best_j = j;
            }
        }
        if (!std::isfinite(best_d))
            best_d = surface_sasaki_distance(M, a.theta, B.samples[best_j].theta);
        out.dists.push_back(best_d);
        out.pairs.push_back(best_j);
        out.sup_dist = std::max(out.sup_dist, best_d);
        out.reparam_dev = std::max(out.reparam_dev, std::fabs(B.samples[best_j].t - a.t));
        lo = best_j; // monotone: later samples never match earlier ones
    }
    return out;
}

} // namespace geolab
