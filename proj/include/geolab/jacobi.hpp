#pragma once

// Orthogonal Jacobi fields along geodesics, the Riccati construction of
// the unstable slope, Lyapunov exponents, and rank classification. On
// the constant model the scalar Jacobi equation J'' = J has the closed
// form cosh/sinh propagator; on the collar the Jacobi pair is integrated
// together with the base geodesic.

#include "geolab/flow.hpp"

namespace geolab {

struct JacobiState {
    double J = 0.0;
    double Jp = 0.0;

    double norm() const { return std::sqrt(J * J + Jp * Jp); }
};

/// Solve J'' + K(gamma(t)) J = 0 along the geodesic of theta.
inline JacobiState jacobi_evolve(const SurfaceModel& M, const UnitTangent& theta,
                                 double T, const JacobiState& init, double tol = 1e-10) {
    if (tol <= 0.0) throw GeolabError("jacobi_evolve: tol must be positive");
    if (M.is_constant()) {
        // K = -1: propagator [[cosh T, sinh T], [sinh T, cosh T]]
        double ch = std::cosh(T), sh = std::sinh(T);
        return {ch * init.J + sh * init.Jp, sh * init.J + ch * init.Jp};
    }
    CollarProfile prof = M.profile();
    auto rhs = [prof](double, const OdeState<5>& s) -> OdeState<5> {
        double r = s[0], beta = s[2];
        double f = prof.f(r), fp = prof.fp(r);
        double K = prof.curvature(r);
        double sb = std::sin(beta), cb = std::cos(beta);
        return {cb, sb / f, -fp / f * sb, s[4], -K * s[3]};
    };
    OdeState<5> s{theta.base.u, theta.base.v, theta.angle, init.J, init.Jp};
    s = integrate_ode<5>(rhs, s, 0.0, T, ode_options_for(tol));
    return {s[3], s[4]};
}

/// Slope u(0) = J'(0)/J(0) of the unstable Jacobi solution, from the
/// Riccati equation u' = -K - u^2 integrated forward from time -T_back
/// with initial slope init_slope (default 1, the curvature bound).
inline double unstable_slope(const SurfaceModel& M, const UnitTangent& theta,
                             double T_back, double tol = 1e-10,
                             double init_slope = 1.0) {
    if (T_back <= 0.0) throw GeolabError("unstable_slope: T_back must be positive");
    if (M.is_constant()) {
        // u' = 1 - u^2 from u(-T) = u0: u(0) = tanh(T + artanh u0)
        if (init_slope == 1.0) return 1.0;
        return std::tanh(T_back + std::atanh(init_slope));
    }
    CollarProfile prof = M.profile();
    auto rhs = [prof](double, const OdeState<4>& s) -> OdeState<4> {
        double r = s[0], beta = s[2], u = s[3];
        double f = prof.f(r), fp = prof.fp(r);
        double K = prof.curvature(r);
        double sb = std::sin(beta), cb = std::cos(beta);
        return {cb, sb / f, -fp / f * sb, -K - u * u};
    };
    double T = T_back;
    for (int attempt = 0; attempt < 4; ++attempt) {
        UnitTangent start = geodesic_flow(M, theta, -T, tol);
        OdeState<4> s{start.base.u, start.base.v, start.angle, init_slope};
        try {
            // step control on the base geodesic only, so the slope rides
            // along one fixed orbit whatever its initial value
            auto opt = ode_options_for(tol);
            opt.err_dims = 3;
            s = integrate_ode<4>(rhs, s, 0.0, T, opt);
            return s[3];
        } catch (const OdeFailure&) {
            T *= 2.0; // restart further back; the Riccati flow contracts
        }
    }
    throw GeolabError("unstable_slope: Riccati integration failed after restarts");
}

/// Norm growth of the unstable Jacobi solution over [0, T], normalized
/// to a unit initial vector (1, u0)/|(1, u0)|.
inline double dphi_growth(const SurfaceModel& M, const UnitTangent& theta, double T,
                          double tol = 1e-10, double T_back = 20.0) {
    if (T <= 0.0) throw GeolabError("dphi_growth: T must be positive");
    double u0 = unstable_slope(M, theta, T_back, tol);
    double n0 = std::sqrt(1.0 + u0 * u0);
    JacobiState out = jacobi_evolve(M, theta, T, {1.0 / n0, u0 / n0}, tol);
    return out.norm();
}

/// Finite-T forward Lyapunov exponent estimate (1/T) log growth. On a
/// flat band the Riccati slope decays like 1/T_back, so a long lookback
/// is needed to resolve a zero exponent.
inline double lyapunov_exponent(const SurfaceModel& M, const UnitTangent& theta,
                                double T, double tol = 1e-10, double T_back = 20.0) {
    return std::log(dphi_growth(M, theta, T, tol, T_back)) / T;
}

enum class RankLabel { RankOne, Higher };

struct RankClassification {
    RankLabel label = RankLabel::RankOne;
    double max_abs_curvature = 0.0; // along the sampled orbit window
    double lambda = 0.0;            // Lyapunov estimate attached as evidence
};

/// Higher rank iff the curvature vanishes along the sampled window
/// [-T, T] and the Lyapunov estimate vanishes; otherwise rank one.
/// Declared-flat band samples use a tighter curvature tolerance since
/// their zeros are exact by construction.
inline RankClassification rank_classify(const SurfaceModel& M, const UnitTangent& theta,
                                        double T, double tol = 1e-3) {
    if (T <= 0.0) throw GeolabError("rank_classify: T must be positive");
    RankClassification out;
    double flow_tol = 1e-10;
    double max_k = 0.0;
    bool all_in_band = !M.is_constant();
    auto traj = sample_trajectory(M, theta, -T, T, 0.05, flow_tol);
    for (const auto& s : traj.samples) {
        max_k = std::max(max_k, std::fabs(curvature_at(M, s.theta.base)));
        if (!M.is_constant() && std::fabs(s.theta.base.u) > M.profile().w / 2.0)
            all_in_band = false;
    }
    out.max_abs_curvature = max_k;
    // long Riccati lookback only where the window is flat; elsewhere the
    // backward orbit may escape toward the curvature -1 ends where the
    // warp factor overflows long integrations
    double T_back = all_in_band ? 4.0e4 : 20.0;
    out.lambda = lyapunov_exponent(M, theta, std::min(T, 20.0), flow_tol, T_back);
    double k_tol = all_in_band ? 1e-9 : 1e-6;
    out.label = (max_k < k_tol && std::fabs(out.lambda) < tol) ? RankLabel::Higher
                                                               : RankLabel::RankOne;
    return out;
}

} // namespace geolab
