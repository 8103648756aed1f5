#pragma once

// Asymptotic geometry: Busemann functions, ideal endpoints, horocycle
// sampling, bi-asymptoticity tests and heteroclinic connectors. On the
// constant model everything is exact through the boundary action; on the
// collar the conserved angular momentum f(r) sin(angle) classifies the
// forward end analytically.

#include "geolab/matching.hpp"

namespace geolab {

enum class CollarEnd { None, PlusInf, MinusInf, BandTrapped };

struct IdealPoint {
    // constant model: boundary coordinate in the half-plane chart
    double boundary = 0.0;
    // collar: end label plus the conserved angular momentum
    CollarEnd end = CollarEnd::None;
    double angular_momentum = 0.0;
};

namespace detail {

inline IdealPoint collar_endpoint(const CollarProfile& prof, const UnitTangent& theta) {
    IdealPoint out;
    double r = theta.base.u;
    double p = prof.f(r) * std::sin(theta.angle);
    double rp = std::cos(theta.angle);
    out.angular_momentum = p;
    double half_w = prof.w / 2.0;
    const double tol = 1e-12;
    if (std::fabs(rp) < tol) {
        if (std::fabs(r) <= half_w + tol) {
            out.end = CollarEnd::BandTrapped; // runs along a band circle
        } else {
            // turning point outside the band: pushed outward, away from it
            out.end = (r > 0.0) ? CollarEnd::PlusInf : CollarEnd::MinusInf;
        }
        return out;
    }
    bool rightward = rp > 0.0;
    double r_ahead_band = rightward ? -half_w : half_w;
    bool band_ahead = rightward ? (r < r_ahead_band) : (r > r_ahead_band);
    if (!band_ahead) {
        // the warp factor never drops below the current value ahead, so
        // sin(angle) cannot reach 1 again: no turning point
        out.end = rightward ? CollarEnd::PlusInf : CollarEnd::MinusInf;
        return out;
    }
    // approaching the band from outside: turning iff |p| exceeds the
    // waist radius, asymptotic band capture at equality
    if (std::fabs(p) > prof.c + tol) {
        out.end = rightward ? CollarEnd::MinusInf : CollarEnd::PlusInf;
    } else if (std::fabs(p) >= prof.c - tol) {
        out.end = CollarEnd::BandTrapped;
    } else {
        out.end = rightward ? CollarEnd::PlusInf : CollarEnd::MinusInf;
    }
    return out;
}

} // namespace detail

inline IdealPoint forward_endpoint(const SurfaceModel& M, const UnitTangent& theta) {
    if (M.is_constant()) return {forward_endpoint_constant(theta), CollarEnd::None, 0.0};
    return detail::collar_endpoint(M.profile(), theta);
}

inline IdealPoint backward_endpoint(const SurfaceModel& M, const UnitTangent& theta) {
    if (M.is_constant()) return {backward_endpoint_constant(theta), CollarEnd::None, 0.0};
    return detail::collar_endpoint(M.profile(), reverse_tangent(theta));
}

/// Equality of ideal points: boundary coincidence on the constant model,
/// matching end data on the collar.
inline bool ideal_points_equal(const SurfaceModel& M, const IdealPoint& a,
                               const IdealPoint& b, double tol = 1e-9) {
    if (M.is_constant()) return boundary_separation(a.boundary, b.boundary) < tol;
    if (a.end != b.end) return false;
    if (a.end == CollarEnd::BandTrapped)
        return std::fabs(a.angular_momentum - b.angular_momentum) < tol;
    return true;
}

struct BusemannValue {
    double value = 0.0;
    double T_used = 0.0;
    double error_bound = 0.0;
};

/// Finite-T Busemann estimate d(x, gamma_theta(T)) - T with a Richardson
/// error bound from the half-horizon value.
inline BusemannValue busemann(const SurfaceModel& M, const UnitTangent& theta,
                              const ChartPoint& x, double T, double tol = 1e-10) {
    if (T <= 0.0) throw GeolabError("busemann: T must be positive");
    auto value_at = [&](double S) {
        ChartPoint g = geodesic_flow(M, theta, S, tol).base;
        return base_chart_distance(M, x, g) - S;
    };
    BusemannValue out;
    out.value = value_at(T);
    out.T_used = T;
    out.error_bound = std::fabs(out.value - value_at(T / 2.0));
    return out;
}

enum class Ternary { No, Yes, Indeterminate };

struct BiasymptoticResult {
    Ternary verdict = Ternary::Indeterminate;
    double sup_distance = 0.0;
    double threshold = 0.0;
};

/// Bounded-distance test over [-T, T]. Exact endpoint comparison on the
/// constant model; sampled matched distance against the bound C on the
/// collar, three-valued near the threshold.
inline BiasymptoticResult are_biasymptotic(const SurfaceModel& M, const UnitTangent& theta,
                                           const UnitTangent& eta, double T, double C) {
    if (!(T > 0.0) || !(C > 0.0))
        throw GeolabError("are_biasymptotic: T and C must be positive");
    BiasymptoticResult out;
    out.threshold = C;
    if (M.is_constant()) {
        bool fwd = ideal_points_equal(M, forward_endpoint(M, theta), forward_endpoint(M, eta));
        bool bwd = ideal_points_equal(M, backward_endpoint(M, theta), backward_endpoint(M, eta));
        out.verdict = (fwd && bwd) ? Ternary::Yes : Ternary::No;
        return out;
    }
    double dt = 0.1;
    Trajectory A = sample_trajectory(M, theta, -T, T, dt, 1e-10);
    Trajectory B = sample_trajectory(M, eta, -T, T, dt, 1e-10);
    MatchResult match = match_trajectories(M, A, B, 5.0);
    out.sup_distance = match.sup_dist;
    // per-window sup over dyadic |t| windows [0,T/4], (T/4,T/2], (T/2,T]
    double w1 = 0.0, w2 = 0.0, w3 = 0.0;
    for (size_t i = 0; i < A.samples.size(); ++i) {
        double at = std::fabs(A.samples[i].t);
        double d = match.dists[i];
        if (at <= T / 4.0) w1 = std::max(w1, d);
        else if (at <= T / 2.0) w2 = std::max(w2, d);
        else w3 = std::max(w3, d);
    }
    double slack = 0.02 * C;
    bool windows_ok = (w3 <= w2 + slack) && (w2 <= w1 + slack);
    if (out.sup_distance > 1.1 * C) {
        out.verdict = Ternary::No;
    } else if (out.sup_distance >= 0.9 * C) {
        out.verdict = Ternary::Indeterminate;
    } else {
        out.verdict = windows_ok ? Ternary::Yes : Ternary::No;
    }
    return out;
}

namespace detail {

/// Unit tangent of the geodesic from boundary point xi to zeta, based at
/// its closest point to p, with its time origin there.
inline UnitTangent geodesic_between(double xi, double zeta, const HPoint& p) {
    if (boundary_separation(xi, zeta) < 1e-12)
        throw GeolabError("geodesic_between: coincident endpoints");
    // Mobius map with 0 -> xi, inf -> zeta
    IsometryMatrix m;
    if (std::isinf(zeta)) {
        m = {1.0, xi, 0.0, 1.0};
    } else if (std::isinf(xi)) {
        m = {zeta, -1.0, 1.0, 0.0};
    } else {
        m = {zeta, xi, 1.0, 1.0};
        if (zeta < xi) {
            m.a = -m.a;
            m.c = -m.c;
        }
    }
    m = m.normalized();
    HPoint w = apply_isometry(m.inverse(), p);
    double h = std::hypot(w.x, w.y); // closest-point height on the vertical axis
    return apply_isometry_tangent(m, {{0.0, h}, kPi / 2.0});
}

} // namespace detail

/// Unit tangent of the geodesic from backward_endpoint(theta) to
/// forward_endpoint(eta), based at its closest point to theta's base.
/// Constant model only.
inline UnitTangent heteroclinic_connector(const SurfaceModel& M, const UnitTangent& theta,
                                          const UnitTangent& eta) {
    if (!M.is_constant())
        throw GeolabError("heteroclinic_connector: constant model only");
    double xi = backward_endpoint_constant(theta);
    double zeta = forward_endpoint_constant(eta);
    if (boundary_separation(xi, zeta) < 1e-12)
        throw GeolabError("heteroclinic_connector: coincident endpoints");
    return detail::geodesic_between(xi, zeta, theta.base.hp());
}

/// n unit tangents on the stable horocycle of theta (same forward
/// endpoint, Busemann level 0 through the base), spaced arc/n apart
/// starting at theta itself.
inline std::vector<UnitTangent> horocycle_sample(const SurfaceModel& M,
                                                 const UnitTangent& theta, double arc,
                                                 size_t n) {
    if (!M.is_constant())
        throw GeolabError("horocycle_sample: constant model only");
    if (n < 1) throw GeolabError("horocycle_sample: need n >= 1");
    IsometryMatrix F = frame_isometry(theta);
    // reference picture: theta at (0,1) pointing up; its stable horocycle
    // is the line y = 1 with vertical vectors, arc length = dx
    std::vector<UnitTangent> out;
    out.reserve(n);
    for (size_t j = 0; j < n; ++j) {
        double x = arc * static_cast<double>(j) / static_cast<double>(n);
        out.push_back(apply_isometry_tangent(F, {{x, 1.0}, kPi / 2.0}));
    }
    return out;
}

} // namespace geolab
