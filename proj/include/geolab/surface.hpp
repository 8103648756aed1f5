#pragma once

// The two concrete surface models. ConstantNegative is the genus-2
// quotient of the half-plane (curvature -1). Collar is a complete
// warped-product cylinder dr^2 + f(r)^2 dtheta^2 whose profile is flat
// (f = c) on a central band and asymptotically curvature -1, with
// f'' >= 0 everywhere so the surface has no focal points.

#include <cmath>
#include <functional>
#include <memory>
#include <variant>

#include "geolab/fuchsian.hpp"
#include "geolab/hyperbolic.hpp"

namespace geolab {

/// Warped-product profile f(r) = c * cosh(m(r)) where m vanishes on the
/// band |r| <= w/2 and ramps smoothly to slope 1 over a scale s. Since
/// cosh is convex and increasing and m is C^2 with m', m'' >= 0 for
/// r >= 0, f'' >= 0 holds and K = -f''/f <= 0.
struct CollarProfile {
    double c = 1.0; // waist radius
    double w = 0.0; // flat-band width
    double s = 0.5; // ramp smoothing scale

    // m(r): 0 on [0, w/2], then a polynomial ramp over [w/2, w/2+s]
    // taking m' from 0 to 1, then linear. m is even. The ramp for m' is
    // the 7th-order smoothstep 35x^4 - 84x^5 + 70x^6 - 20x^7, so the
    // curvature is C^3 and high-order integrators keep their accuracy
    // across the ramp ends.
    double ramp_m(double r) const {
        double u = std::fabs(r) - w / 2.0;
        if (u <= 0.0) return 0.0;
        if (u >= s) {
            // integral of m' over the ramp is s/2 (ramp average 1/2)
            return (u - s) + s / 2.0;
        }
        double x = u / s;
        double x4 = x * x * x * x;
        return s * x4 * (7.0 * x - 14.0 * x * x + 10.0 * x * x * x - 2.5 * x4);
    }
    double ramp_mp(double r) const { // dm/dr (signed)
        double sign = (r >= 0.0) ? 1.0 : -1.0;
        double u = std::fabs(r) - w / 2.0;
        if (u <= 0.0) return 0.0;
        if (u >= s) return sign;
        double x = u / s;
        double x4 = x * x * x * x;
        return sign * x4 * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
    }
    double ramp_mpp(double r) const {
        double u = std::fabs(r) - w / 2.0;
        if (u <= 0.0 || u >= s) return 0.0;
        double x = u / s;
        double omx = 1.0 - x;
        return 140.0 * x * x * x * omx * omx * omx / s;
    }

    double f(double r) const { return c * std::cosh(ramp_m(r)); }
    double fp(double r) const { return c * std::sinh(ramp_m(r)) * ramp_mp(r); }
    double fpp(double r) const {
        double m = ramp_m(r), mp = ramp_mp(r), mpp = ramp_mpp(r);
        return c * (std::cosh(m) * mp * mp + std::sinh(m) * mpp);
    }
    double curvature(double r) const { return -fpp(r) / f(r); }
};

struct ConstantNegativeModel {
    std::shared_ptr<const FuchsianGroup> group;
};

struct CollarModel {
    CollarProfile profile;
};

struct SurfaceModel {
    std::variant<ConstantNegativeModel, CollarModel> kind;

    bool is_constant() const { return std::holds_alternative<ConstantNegativeModel>(kind); }
    const FuchsianGroup& group() const {
        return *std::get<ConstantNegativeModel>(kind).group;
    }
    const CollarProfile& profile() const { return std::get<CollarModel>(kind).profile; }
};

inline SurfaceModel make_constant_negative() {
    return {ConstantNegativeModel{std::make_shared<FuchsianGroup>()}};
}

inline SurfaceModel make_constant_negative(std::shared_ptr<const FuchsianGroup> g) {
    return {ConstantNegativeModel{std::move(g)}};
}

inline SurfaceModel build_collar(double c, double w, double s) {
    if (!(c > 0.0) || !(w >= 0.0) || !(s > 0.0))
        throw GeolabError("build_collar: require c > 0, w >= 0, s > 0");
    CollarProfile prof{c, w, s};
    // convexity check on a dense grid
    for (int i = 0; i <= 4000; ++i) {
        double r = -10.0 + 20.0 * i / 4000.0;
        if (prof.fpp(r) < -1e-10)
            throw GeolabError("build_collar: profile failed convexity check");
    }
    return {CollarModel{prof}};
}

/// Chart point of either model: half-plane (x,y) for ConstantNegative,
/// (r, theta) for Collar, stored in the same two slots.
struct ChartPoint {
    double u = 0.0; // x or r
    double v = 1.0; // y or theta

    HPoint hp() const { return {u, v}; }
};

/// Unit tangent vector: chart base point plus direction angle in the
/// orthonormal chart frame.
///  - ConstantNegative: frame (y d/dx, y d/dy); angle 0 along d/dx.
///  - Collar: frame (d/dr, (1/f) d/dtheta); angle 0 along d/dr.
struct UnitTangent {
    ChartPoint base;
    double angle = 0.0;
};

inline double curvature_at(const SurfaceModel& M, const ChartPoint& p) {
    if (M.is_constant()) return -1.0;
    return M.profile().curvature(p.u);
}

/// Distance between base points in the chart (universal cover for the
/// constant model; cylinder with periodic theta for the collar).
inline double base_chart_distance(const SurfaceModel& M, const ChartPoint& p,
                                  const ChartPoint& q) {
    if (M.is_constant()) return hyperbolic_distance(p.hp(), q.hp());
    // collar: bound the warped metric by the flat product metric locally;
    // use dr and the shorter angular arc scaled by f at the midpoint
    double dth = wrap_angle_signed(p.v - q.v);
    double fm = M.profile().f(0.5 * (p.u + q.u));
    double dr = p.u - q.u;
    return std::sqrt(dr * dr + fm * fm * dth * dth);
}

/// Sasaki-distance proxy: sqrt(base distance^2 + frame angle difference^2).
inline double sasaki_distance(const SurfaceModel& M, const UnitTangent& t1,
                              const UnitTangent& t2) {
    double db = base_chart_distance(M, t1.base, t2.base);
    double da = wrap_angle_signed(t1.angle - t2.angle);
    return std::sqrt(db * db + da * da);
}

/// Image of a unit tangent of the constant model under an isometry:
/// Mobius action on the base, derivative rotation on the angle.
inline UnitTangent apply_isometry_tangent(const IsometryMatrix& m, const UnitTangent& t) {
    std::complex<double> z = t.base.hp().z();
    std::complex<double> den = m.c * z + m.d;
    std::complex<double> z2 = (m.a * z + m.b) / den;
    // chart velocity is y * e^{i angle}; pushforward multiplies by 1/den^2
    std::complex<double> vel = t.base.v * std::polar(1.0, t.angle) / (den * den);
    double angle2 = std::arg(vel / z2.imag());
    return {{z2.real(), z2.imag()}, wrap_angle_2pi(angle2)};
}

/// Sasaki proxy on the quotient surface (constant model): minimum over
/// the neighbor transforms of the group. Both tangents should have base
/// points in or near the fundamental domain.
inline double surface_sasaki_distance(const SurfaceModel& M, const UnitTangent& t1,
                                      const UnitTangent& t2) {
    if (!M.is_constant()) return sasaki_distance(M, t1, t2);
    double best = sasaki_distance(M, t1, t2);
    for (const auto& g : M.group().neighbor_transforms()) {
        UnitTangent moved = apply_isometry_tangent(g, t2);
        best = std::min(best, sasaki_distance(M, t1, moved));
    }
    return best;
}

/// Reduce a constant-model unit tangent so its base lies in the
/// fundamental domain; collar tangents get theta wrapped to [0, 2pi).
inline UnitTangent reduce_tangent(const SurfaceModel& M, const UnitTangent& t) {
    if (!M.is_constant()) return {{t.base.u, wrap_angle_2pi(t.base.v)}, wrap_angle_2pi(t.angle)};
    auto [p, w] = M.group().reduce_to_fundamental_domain(t.base.hp());
    (void)p;
    IsometryMatrix m = M.group().evaluate(w).inverse();
    return apply_isometry_tangent(m, t);
}

} // namespace geolab
