#pragma once

// Flat strips, the equivalence relation collapsing them, quotient
// classes with a Hausdorff pseudo-metric, the quotient flow, and
// expansivity probes for the original and quotient flows.

#include <optional>

#include "geolab/asymptotic.hpp"

namespace geolab {

struct StripScan {
    double range = 1.5;  // transversal offsets swept: [-range, range]
    double step = 1e-3;
    double T = 16.0;     // bi-asymptoticity horizon
    double C = 1.0;      // bounded-distance threshold
    double sync_tol = 0.05;
};

struct Strip {
    UnitTangent base;
    double lo = 0.0, hi = 0.0; // offset interval of the cross-section
    double width = 0.0;
    double uncertainty = 0.0;  // scan resolution (plus indeterminate edges)
    std::vector<std::pair<double, UnitTangent>> members; // offset -> tangent

    bool trivial(double step) const { return width < 2.0 * step; }
};

namespace detail {

/// Synchronization defect of eta against theta's orbit: the flow time
/// offset at which theta's orbit passes closest to eta's base. Members
/// of one strip sit at offset zero; a time shift along the same orbit
/// shows up as the shift itself.
inline double collar_sync_defect(const SurfaceModel& M, const UnitTangent& theta,
                                 const UnitTangent& eta, double S = 2.0) {
    Trajectory tr = sample_trajectory(M, theta, -S, S, 0.02, 1e-9);
    double best = std::numeric_limits<double>::infinity();
    double s_best = 0.0;
    for (const auto& s : tr.samples) {
        double d = base_chart_distance(M, eta.base, s.theta.base);
        if (d < best) {
            best = d;
            s_best = s.t;
        }
    }
    return s_best;
}

} // namespace detail

/// Same-class test: eta on the stable set of theta (synchronized, not
/// merely forward-asymptotic) and bi-asymptotic to it.
inline Ternary equivalence_check(const SurfaceModel& M, const UnitTangent& theta,
                                 const UnitTangent& eta, double T, double C,
                                 double sync_tol = 0.05) {
    if (M.is_constant()) {
        bool fwd = ideal_points_equal(M, forward_endpoint(M, theta), forward_endpoint(M, eta));
        bool bwd = ideal_points_equal(M, backward_endpoint(M, theta), backward_endpoint(M, eta));
        if (!fwd || !bwd) return Ternary::No;
        // same geodesic: exclude time shifts along it
        BusemannValue b = busemann(M, theta, eta.base, std::max(T, 20.0));
        return (std::fabs(b.value) < 1e-6) ? Ternary::Yes : Ternary::No;
    }
    // sharp necessary condition first: the conserved-momentum endpoint
    // classification separates band-trapped orbits from escapers exactly,
    // where finite-horizon sampling is blind near the band edge
    if (!ideal_points_equal(M, forward_endpoint(M, theta), forward_endpoint(M, eta)) ||
        !ideal_points_equal(M, backward_endpoint(M, theta), backward_endpoint(M, eta)))
        return Ternary::No;
    // a geodesic confined to the flat band keeps its radius only when it
    // runs exactly along the band; any tilt moves the radius linearly
    // there and the orbit meets negative curvature. Strips of parallel
    // orbits therefore pass only through band-aligned tangents, and
    // every other class is the single tangent itself. Finite-horizon
    // distance sampling is blind to this (a tilted orbit can take far
    // longer than the horizon to reach the curved region).
    const CollarProfile& prof = M.profile();
    auto band_aligned = [&](const UnitTangent& t) {
        return std::fabs(std::cos(t.angle)) < 1e-6 &&
               std::fabs(t.base.u) <= 0.5 * prof.w + 1e-9;
    };
    if (!band_aligned(theta) || !band_aligned(eta))
        return surface_sasaki_distance(M, theta, eta) < 1e-7 ? Ternary::Yes : Ternary::No;
    BiasymptoticResult bi = are_biasymptotic(M, theta, eta, T, C);
    if (bi.verdict == Ternary::No) return Ternary::No;
    double sync = std::fabs(detail::collar_sync_defect(M, theta, eta));
    if (bi.verdict == Ternary::Indeterminate) return Ternary::Indeterminate;
    if (sync > 2.0 * sync_tol) return Ternary::No;
    if (sync > sync_tol) return Ternary::Indeterminate;
    return Ternary::Yes;
}

/// Tangent at transversal offset o through theta: stable-horocycle arc
/// offset on the constant model, radial offset on the collar.
inline UnitTangent strip_transversal(const SurfaceModel& M, const UnitTangent& theta,
                                     double o) {
    if (M.is_constant())
        return apply_isometry_tangent(frame_isometry(theta), {{o, 1.0}, kPi / 2.0});
    return {{theta.base.u + o, theta.base.v}, theta.angle};
}

/// Maximal interval of transversal offsets around 0 whose geodesics stay
/// in theta's class; the cross-section of the flat strip through theta.
inline Strip detect_strip(const SurfaceModel& M, const UnitTangent& theta,
                          const StripScan& scan = {}) {
    if (!(scan.step > 0.0) || !(scan.range > 0.0))
        throw GeolabError("detect_strip: bad scan parameters");
    Strip strip;
    strip.base = theta;
    strip.uncertainty = scan.step;
    strip.members.push_back({0.0, theta});
    for (double dir : {1.0, -1.0}) {
        double edge = 0.0;
        for (double o = scan.step; o <= scan.range + 1e-12; o += scan.step) {
            UnitTangent cand = strip_transversal(M, theta, dir * o);
            Ternary verdict = equivalence_check(M, theta, cand, scan.T, scan.C,
                                                scan.sync_tol);
            if (verdict == Ternary::Indeterminate) {
                strip.uncertainty = std::max(strip.uncertainty, 2.0 * scan.step);
                break;
            }
            if (verdict == Ternary::No) break;
            edge = dir * o;
            strip.members.push_back({edge, cand});
        }
        if (dir > 0.0) strip.hi = edge;
        else strip.lo = edge;
    }
    std::sort(strip.members.begin(), strip.members.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    strip.width = strip.hi - strip.lo;
    return strip;
}

struct QuotientClass {
    Strip strip;
    UnitTangent representative; // midpoint of the cross-section interval
    bool trivial = true;
};

inline QuotientClass make_quotient_class(const SurfaceModel& M, const UnitTangent& theta,
                                         const StripScan& scan = {}) {
    QuotientClass cls;
    cls.strip = detect_strip(M, theta, scan);
    cls.trivial = cls.strip.trivial(scan.step);
    double mid = 0.5 * (cls.strip.lo + cls.strip.hi);
    cls.representative = cls.trivial ? theta : strip_transversal(M, theta, mid);
    return cls;
}

/// Hausdorff distance between the member sets under the Sasaki proxy.
inline double quotient_distance(const SurfaceModel& M, const QuotientClass& a,
                                const QuotientClass& b) {
    auto one_sided = [&](const QuotientClass& from, const QuotientClass& to) {
        double worst = 0.0;
        for (const auto& [of, tf] : from.strip.members) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [ot, tt] : to.strip.members)
                best = std::min(best, surface_sasaki_distance(M, tf, tt));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

/// Flow a class forward: members are flow-covariant, so flow each member
/// (the class of the flowed representative re-detects to the same set).
inline QuotientClass flow_class_members(const SurfaceModel& M, const QuotientClass& cls,
                                        double t, double tol = 1e-10) {
    QuotientClass out = cls;
    out.representative = geodesic_flow(M, cls.representative, t, tol);
    out.strip.base = geodesic_flow(M, cls.strip.base, t, tol);
    for (auto& [o, m] : out.strip.members) m = geodesic_flow(M, m, t, tol);
    return out;
}

/// Quotient flow psi_t: flow the representative and re-detect its class.
inline QuotientClass quotient_flow(const SurfaceModel& M, const QuotientClass& cls,
                                   double t, const StripScan& scan = {}) {
    UnitTangent moved = geodesic_flow(M, cls.representative, t, 1e-10);
    return make_quotient_class(M, moved, scan);
}

struct ViolatingPair {
    size_t i = 0, j = 0;
    double sup_distance = 0.0;
};

struct ExpansivityReport {
    std::vector<ViolatingPair> violators;
    bool partial = false;
    size_t pairs_checked = 0;
};

/// Search sampled pairs for expansivity violations: distinct orbits that
/// stay within eps over [-T, T] up to monotone time matching (original
/// flow) or in the quotient metric (quotient flow).
inline ExpansivityReport expansivity_probe(const SurfaceModel& M,
                                           const std::vector<UnitTangent>& samples,
                                           bool quotient, double eps, double T,
                                           const StripScan& scan = {},
                                           size_t budget_pairs = 1'000'000) {
    if (!(eps > 0.0) || !(T > 0.0))
        throw GeolabError("expansivity_probe: eps and T must be positive");
    ExpansivityReport rep;
    double dt = 0.25;
    std::vector<Trajectory> trajs;
    std::vector<QuotientClass> classes;
    if (quotient) {
        classes.reserve(samples.size());
        for (const auto& s : samples) classes.push_back(make_quotient_class(M, s, scan));
    } else {
        trajs.reserve(samples.size());
        for (const auto& s : samples)
            trajs.push_back(sample_trajectory(M, s, -T, T, dt, 1e-9));
    }
    for (size_t i = 0; i < samples.size(); ++i) {
        for (size_t j = i + 1; j < samples.size(); ++j) {
            if (rep.pairs_checked >= budget_pairs) {
                rep.partial = true;
                return rep;
            }
            ++rep.pairs_checked;
            if (quotient) {
                // same quotient point: not a pair of distinct orbits
                if (quotient_distance(M, classes[i], classes[j]) < 2.0 * scan.step)
                    continue;
                double sup = 0.0;
                for (double t = -T; t <= T + 1e-9; t += dt) {
                    QuotientClass a = flow_class_members(M, classes[i], t);
                    QuotientClass b = flow_class_members(M, classes[j], t);
                    sup = std::max(sup, quotient_distance(M, a, b));
                    if (sup > eps) break;
                }
                if (sup <= eps) rep.violators.push_back({i, j, sup});
            } else {
                MatchResult match = match_trajectories(M, trajs[i], trajs[j], 2.0 * eps + dt);
                if (match.sup_dist < 1e-6) continue; // same orbit
                if (match.sup_dist <= eps)
                    rep.violators.push_back({i, j, match.sup_dist});
            }
        }
    }
    return rep;
}

} // namespace geolab
