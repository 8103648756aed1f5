#pragma once

// Pseudo-orbits and shadowing. On the constant model the tracing orbit
// comes from endpoint geometry: lift the broken chain to the universal
// cover, read off the ideal endpoints of its first and last legs, and
// connect them by a geodesic. Periodic chains close through the
// accumulated deck transformation (constant model) or by shooting on
// the collar.

#include "geolab/strips.hpp"

namespace geolab {

struct PseudoOrbit {
    std::vector<UnitTangent> points;
    std::vector<double> durations;
    double delta_actual = 0.0; // largest jump found during validation
    double delta_target = 0.0;
    double min_duration = 0.0;
    bool periodic = false;

    size_t size() const { return points.size(); }
    double total_time() const {
        double s = 0.0;
        for (double d : durations) s += d;
        return s;
    }
};

/// Validate a chain of (tangent, duration) segments as a pseudo-orbit
/// with jump bound delta_target. Periodic chains also check the jump
/// from the last segment's end back to the first point.
inline PseudoOrbit make_pseudo_orbit(const SurfaceModel& M,
                                     const std::vector<std::pair<UnitTangent, double>>& segments,
                                     double delta_target, bool periodic = false,
                                     double min_duration = 0.5, double tol = 1e-10) {
    if (segments.size() < (periodic ? 1u : 2u))
        throw GeolabError("make_pseudo_orbit: too few segments");
    if (!(delta_target >= 0.0))
        throw GeolabError("make_pseudo_orbit: delta_target must be nonnegative");
    PseudoOrbit po;
    po.delta_target = delta_target;
    po.min_duration = min_duration;
    po.periodic = periodic;
    for (const auto& [theta, dur] : segments) {
        if (dur < min_duration)
            throw GeolabError("make_pseudo_orbit: segment duration below the minimum");
        po.points.push_back(theta);
        po.durations.push_back(dur);
    }
    size_t n = po.points.size();
    size_t jumps = periodic ? n : n - 1;
    for (size_t k = 0; k < jumps; ++k) {
        // reduce the flowed end first: the quotient distance search only
        // covers deck copies neighboring the fundamental domain
        UnitTangent end = reduce_tangent(M, geodesic_flow(M, po.points[k], po.durations[k], tol));
        double jump = surface_sasaki_distance(M, end, po.points[(k + 1) % n]);
        if (jump > delta_target)
            throw GeolabError("make_pseudo_orbit: jump " + std::to_string(jump) +
                              " above target at segment " + std::to_string(k));
        po.delta_actual = std::max(po.delta_actual, jump);
    }
    return po;
}

struct ShadowingResult {
    UnitTangent orbit; // initial condition of the tracing orbit, reduced
    double eps_achieved = 0.0;
    double reparam_dev = 0.0;
    MatchResult matched;
};

namespace detail {

/// Deck transformation (matrix and word) carrying the quotient tangent x
/// closest to the cover tangent y: y ~ g x. The word evaluates to g.
inline std::pair<IsometryMatrix, GroupWord> closest_deck(const FuchsianGroup& G,
                                                         const SurfaceModel& M,
                                                         const UnitTangent& y,
                                                         const UnitTangent& x) {
    auto [p, w] = G.reduce_to_fundamental_domain(y.base.hp());
    (void)p;
    IsometryMatrix E = G.evaluate(w);
    UnitTangent y_red = apply_isometry_tangent(E.inverse(), y);
    const auto& neigh = G.neighbor_transforms();
    const auto& words = G.neighbor_words();
    size_t best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < neigh.size(); ++j) {
        double d = sasaki_distance(M, y_red, apply_isometry_tangent(neigh[j], x));
        if (d < best) {
            best = d;
            best_j = j;
        }
    }
    return {(E * neigh[best_j]).normalized(), concat(w, words[best_j])};
}

/// Lift the chain to the cover: lift 0 is the first point itself, each
/// later point is moved by the deck transformation matching it to the
/// flowed end of the previous lift. For periodic chains the transform
/// closing the last end back onto point 0 is the chain's holonomy.
struct LiftedChain {
    std::vector<UnitTangent> lifts;
    IsometryMatrix closing;
    GroupWord closing_word;
};

inline LiftedChain lift_chain(const SurfaceModel& M, const PseudoOrbit& po) {
    const FuchsianGroup& G = M.group();
    LiftedChain out;
    out.lifts.push_back(po.points[0]);
    size_t n = po.size();
    size_t jumps = po.periodic ? n : n - 1;
    for (size_t k = 0; k < jumps; ++k) {
        UnitTangent end = flow_constant(out.lifts.back(), po.durations[k]);
        auto [g, gw] = closest_deck(G, M, end, po.points[(k + 1) % n]);
        if (k + 1 < n) {
            out.lifts.push_back(apply_isometry_tangent(g, po.points[k + 1]));
        } else {
            out.closing = g;
            out.closing_word = gw;
        }
    }
    return out;
}

/// The whole lifted chain sampled on one global clock.
inline Trajectory sample_chain(const PseudoOrbit& po, const std::vector<UnitTangent>& lifts,
                               double dt) {
    Trajectory chain;
    double t0 = 0.0;
    for (size_t k = 0; k < lifts.size(); ++k) {
        long steps = std::lround(std::floor(po.durations[k] / dt + 1e-9));
        for (long i = 0; i <= steps; ++i) {
            double local = i * dt;
            chain.samples.push_back({t0 + local, flow_constant(lifts[k], local)});
        }
        t0 += po.durations[k];
    }
    return chain;
}

} // namespace detail

/// Find the orbit tracing a non-periodic pseudo-orbit on the constant
/// model: the geodesic between the backward endpoint of the first lifted
/// leg and the forward endpoint of the last one.
inline ShadowingResult shadow_search(const SurfaceModel& M, const PseudoOrbit& po,
                                     double dt = 0.05, double window = 2.0) {
    if (!M.is_constant())
        throw GeolabError("shadow_search: constant model only");
    if (po.periodic)
        throw GeolabError("shadow_search: use close_periodic for periodic chains");
    detail::LiftedChain lifted = detail::lift_chain(M, po);
    double xi = backward_endpoint_constant(lifted.lifts.front());
    double zeta = forward_endpoint_constant(lifted.lifts.back());
    UnitTangent conn = detail::geodesic_between(xi, zeta, lifted.lifts.front().base.hp());
    Trajectory chain = detail::sample_chain(po, lifted.lifts, dt);
    Trajectory orbit = sample_trajectory(M, conn, -window, po.total_time() + window, dt);
    ShadowingResult res;
    res.matched = match_trajectories(M, chain, orbit, window);
    res.eps_achieved = res.matched.sup_dist;
    res.reparam_dev = res.matched.reparam_dev;
    res.orbit = reduce_tangent(M, conn);
    return res;
}

struct PeriodicOrbitRecord {
    GroupWord word; // holonomy word; empty for collar records
    double period = 0.0;
    UnitTangent initial;
    bool primitive = true;
    double eps_achieved = 0.0; // closeness to the source chain, if any
    double residual = 0.0;     // closing residual of the collar shooting
};

namespace detail {

/// Axis tangent of a hyperbolic isometry at the closest axis point to p.
inline UnitTangent axis_tangent(const IsometryMatrix& m, const HPoint& p) {
    AxisEndpoints ends = axis_endpoints(m);
    return geodesic_between(ends.repelling, ends.attracting, p);
}

/// Damped least-squares closing of a collar chain: shoot on the initial
/// radius, angle and the period, holding the initial phase fixed.
inline PeriodicOrbitRecord close_periodic_collar(const SurfaceModel& M, const PseudoOrbit& po) {
    const CollarProfile& prof = M.profile();
    double phase = po.points[0].base.v;
    double r0 = po.points[0].base.u;
    double b0 = po.points[0].angle;
    double ell = po.total_time();
    auto residual = [&](double r, double b, double L) -> std::array<double, 3> {
        UnitTangent end = geodesic_flow(M, {{r, phase}, b}, L, 1e-11);
        return {end.base.u - r, prof.f(r) * wrap_angle_signed(end.base.v - phase),
                wrap_angle_signed(end.angle - b)};
    };
    auto norm3 = [](const std::array<double, 3>& v) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    auto det3 = [](const double m0[3][3]) {
        return m0[0][0] * (m0[1][1] * m0[2][2] - m0[1][2] * m0[2][1]) -
               m0[0][1] * (m0[1][0] * m0[2][2] - m0[1][2] * m0[2][0]) +
               m0[0][2] * (m0[1][0] * m0[2][1] - m0[1][1] * m0[2][0]);
    };
    std::array<double, 3> F = residual(r0, b0, ell);
    double fn = norm3(F);
    // the band carries a one-parameter family of closed circles, so the
    // Jacobian is singular in the radial direction there; the damping
    // term keeps the steps well posed
    double mu = 1e-3;
    for (int it = 0; it < 80 && fn > 1e-11; ++it) {
        double h = 1e-7;
        auto Fr = residual(r0 + h, b0, ell);
        auto Fb = residual(r0, b0 + h, ell);
        auto Fl = residual(r0, b0, ell + h);
        double J[3][3];
        for (int i = 0; i < 3; ++i) {
            J[i][0] = (Fr[i] - F[i]) / h;
            J[i][1] = (Fb[i] - F[i]) / h;
            J[i][2] = (Fl[i] - F[i]) / h;
        }
        double JTJ[3][3], JTF[3];
        for (int i = 0; i < 3; ++i) {
            JTF[i] = 0.0;
            for (int j = 0; j < 3; ++j) {
                JTJ[i][j] = (i == j) ? mu : 0.0;
                for (int k = 0; k < 3; ++k) JTJ[i][j] += J[k][i] * J[k][j];
            }
            for (int k = 0; k < 3; ++k) JTF[i] += J[k][i] * F[k];
        }
        double D = det3(JTJ);
        if (std::fabs(D) < 1e-30) {
            mu *= 10.0;
            continue;
        }
        double s[3];
        for (int col = 0; col < 3; ++col) {
            double Mc[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) Mc[i][j] = (j == col) ? -JTF[i] : JTJ[i][j];
            s[col] = det3(Mc) / D;
        }
        auto Fn = residual(r0 + s[0], b0 + s[1], ell + s[2]);
        double fn2 = norm3(Fn);
        if (fn2 < fn) {
            r0 += s[0];
            b0 += s[1];
            ell += s[2];
            F = Fn;
            fn = fn2;
            mu = std::max(mu * 0.3, 1e-12);
        } else {
            mu *= 10.0;
        }
    }
    if (fn > 1e-6)
        throw GeolabError("close_periodic: shooting stalled at residual " + std::to_string(fn));
    PeriodicOrbitRecord rec;
    rec.period = ell;
    rec.initial = {{r0, wrap_angle_2pi(phase)}, wrap_angle_2pi(b0)};
    rec.residual = fn;
    return rec;
}

} // namespace detail

/// Close a periodic pseudo-orbit into a true periodic orbit.
inline PeriodicOrbitRecord close_periodic(const SurfaceModel& M, const PseudoOrbit& po,
                                          double dt = 0.05, double window = 2.0) {
    if (!po.periodic) throw GeolabError("close_periodic: chain is not periodic");
    if (M.is_constant()) {
        detail::LiftedChain lifted = detail::lift_chain(M, po);
        if (!is_hyperbolic(lifted.closing))
            throw GeolabError("close_periodic: chain holonomy is not hyperbolic");
        PeriodicOrbitRecord rec;
        rec.word = lifted.closing_word;
        rec.period = translation_length(lifted.closing);
        UnitTangent conn = detail::axis_tangent(lifted.closing, po.points[0].base.hp());
        rec.initial = reduce_tangent(M, conn);
        rec.primitive = !is_proper_power(canonical_cyclic(rec.word));
        Trajectory chain = detail::sample_chain(po, lifted.lifts, dt);
        Trajectory orbit = sample_trajectory(M, conn, -window, po.total_time() + window, dt);
        rec.eps_achieved = match_trajectories(M, chain, orbit, window).sup_dist;
        return rec;
    }
    PeriodicOrbitRecord rec = detail::close_periodic_collar(M, po);
    // closeness of the chain to the recovered orbit, on the chain's clock
    Trajectory orbit =
        sample_trajectory(M, rec.initial, -window, po.total_time() + window, dt, 1e-10);
    double eps = 0.0;
    double t0 = 0.0;
    for (size_t k = 0; k < po.size(); ++k) {
        Trajectory seg = sample_trajectory(M, po.points[k], 0.0, po.durations[k], dt, 1e-10);
        for (auto& smp : seg.samples) smp.t += t0;
        eps = std::max(eps, match_trajectories(M, seg, orbit, window).sup_dist);
        t0 += po.durations[k];
    }
    rec.eps_achieved = eps;
    return rec;
}

/// All primitive closed orbits of the constant model with period at most
/// T, one per free-homotopy class, from the conjugacy-class enumeration.
inline std::vector<PeriodicOrbitRecord> enumerate_periodic_orbits(const SurfaceModel& M,
                                                                  double T) {
    if (!M.is_constant())
        throw GeolabError("enumerate_periodic_orbits: constant model only");
    const FuchsianGroup& G = M.group();
    EnumerationResult enumd = G.enumerate_conjugacy_classes(T);
    if (!enumd.complete)
        throw GeolabError("enumerate_periodic_orbits: enumeration did not certify completeness");
    std::vector<PeriodicOrbitRecord> out;
    out.reserve(enumd.classes.size());
    for (const auto& e : enumd.classes) {
        PeriodicOrbitRecord rec;
        rec.word = e.word;
        rec.period = e.length;
        rec.primitive = true;
        rec.initial = reduce_tangent(M, detail::axis_tangent(e.matrix, G.center()));
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace geolab
