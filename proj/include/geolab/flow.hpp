#pragma once

// Geodesic flow for both models: exact Mobius conjugation on the
// constant-curvature model, adaptive ODE on the collar. Collar states
// use the (r, theta, beta) chart in which unit speed is automatic.

#include <vector>

#include "geolab/ode.hpp"
#include "geolab/surface.hpp"

namespace geolab {

struct Trajectory {
    struct Sample {
        double t;
        UnitTangent theta;
    };
    std::vector<Sample> samples;
    double tol = 1e-10;
};

/// Isometry carrying the reference tangent (base i, pointing up) to theta.
inline IsometryMatrix frame_isometry(const UnitTangent& theta) {
    double x = theta.base.u, y = theta.base.v;
    if (!(y > 0.0)) throw GeolabError("frame_isometry: base not in upper half-plane");
    double sy = std::sqrt(y);
    IsometryMatrix A{sy, x / sy, 0.0, 1.0 / sy};
    return A * rotation_about_i(theta.angle - kPi / 2.0);
}

/// Exact time-t geodesic flow on the hyperbolic plane.
inline UnitTangent flow_constant(const UnitTangent& theta, double t) {
    IsometryMatrix m = frame_isometry(theta);
    UnitTangent up{{0.0, std::exp(t)}, kPi / 2.0};
    return apply_isometry_tangent(m, up);
}

/// Ideal endpoints of the constant-model geodesic through theta,
/// as half-plane boundary coordinates (inf possible).
inline double forward_endpoint_constant(const UnitTangent& theta) {
    return apply_isometry_boundary(frame_isometry(theta), std::numeric_limits<double>::infinity());
}
inline double backward_endpoint_constant(const UnitTangent& theta) {
    return apply_isometry_boundary(frame_isometry(theta), 0.0);
}

inline OdeState<3> collar_state(const UnitTangent& theta) {
    return {theta.base.u, theta.base.v, theta.angle};
}
inline UnitTangent collar_tangent(const OdeState<3>& s) {
    return {{s[0], s[1]}, s[2]};
}

inline auto collar_rhs(const CollarProfile& prof) {
    return [prof](double, const OdeState<3>& s) -> OdeState<3> {
        double r = s[0], beta = s[2];
        double f = prof.f(r), fp = prof.fp(r);
        double sb = std::sin(beta), cb = std::cos(beta);
        return {cb, sb / f, -fp / f * sb};
    };
}

inline OdeOptions ode_options_for(double tol) {
    OdeOptions o;
    o.abs_tol = tol;
    o.rel_tol = tol;
    return o;
}

/// Time-t geodesic flow; exact on the constant model, RK5(4) on the collar.
inline UnitTangent geodesic_flow(const SurfaceModel& M, const UnitTangent& theta,
                                 double t, double tol = 1e-10) {
    if (tol <= 0.0) throw GeolabError("geodesic_flow: tol must be positive");
    if (M.is_constant()) return flow_constant(theta, t);
    auto s = integrate_ode<3>(collar_rhs(M.profile()), collar_state(theta), 0.0, t,
                              ode_options_for(tol));
    return collar_tangent(s);
}

/// Uniformly sampled trajectory over [t0, t1] with spacing dt > 0.
inline Trajectory sample_trajectory(const SurfaceModel& M, const UnitTangent& theta,
                                    double t0, double t1, double dt, double tol = 1e-10) {
    if (dt <= 0.0) throw GeolabError("sample_trajectory: dt must be positive");
    Trajectory traj;
    traj.tol = tol;
    long n = std::lround(std::floor((t1 - t0) / dt + 1e-9));
    traj.samples.reserve(n + 1);
    if (M.is_constant()) {
        for (long k = 0; k <= n; ++k) {
            double t = t0 + k * dt;
            traj.samples.push_back({t, flow_constant(theta, t)});
        }
        return traj;
    }
    auto rhs = collar_rhs(M.profile());
    auto opts = ode_options_for(tol);
    OdeState<3> s = collar_state(theta);
    double t = 0.0;
    // march to t0 first, then sample forward
    s = integrate_ode<3>(rhs, s, t, t0, opts);
    t = t0;
    traj.samples.push_back({t, collar_tangent(s)});
    for (long k = 1; k <= n; ++k) {
        double tn = t0 + k * dt;
        s = integrate_ode<3>(rhs, s, t, tn, opts);
        t = tn;
        traj.samples.push_back({t, collar_tangent(s)});
    }
    return traj;
}

/// Reverse a unit tangent in place (theta -> -theta).
inline UnitTangent reverse_tangent(const UnitTangent& theta) {
    return {theta.base, wrap_angle_2pi(theta.angle + kPi)};
}

} // namespace geolab
