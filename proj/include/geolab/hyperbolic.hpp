#pragma once

// Upper half-plane model of the hyperbolic plane: points, Mobius
// isometries as real 2x2 unit-determinant matrices, distances and
// translation lengths of hyperbolic elements.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace geolab {

struct GeolabError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Point of the upper half-plane chart, y > 0.
struct HPoint {
    double x = 0.0;
    double y = 1.0;

    bool valid() const { return y > 0.0 && std::isfinite(x) && std::isfinite(y); }
    std::complex<double> z() const { return {x, y}; }
};

inline HPoint to_hpoint(std::complex<double> z) { return {z.real(), z.imag()}; }

/// Real 2x2 matrix with determinant 1, acting on the half-plane by
/// Mobius transformations. The PSL(2,R) sign ambiguity is irrelevant
/// for the action.
struct IsometryMatrix {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    IsometryMatrix inverse() const { return {d, -b, -c, a}; }

    IsometryMatrix operator*(const IsometryMatrix& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    /// Rescale so det is exactly 1 again; long products drift.
    IsometryMatrix normalized() const {
        double dt = det();
        if (dt <= 0.0) throw GeolabError("isometry has non-positive determinant");
        double s = 1.0 / std::sqrt(dt);
        return {a * s, b * s, c * s, d * s};
    }

    bool unit_det(double tol = 1e-12) const { return std::fabs(det() - 1.0) <= tol; }
};

inline IsometryMatrix identity_isometry() { return {}; }

/// Hyperbolic translation of length ell along the vertical geodesic through i.
inline IsometryMatrix vertical_translation(double ell) {
    double e = std::exp(ell / 2.0);
    return {e, 0.0, 0.0, 1.0 / e};
}

/// Elliptic element fixing i, rotating tangent vectors at i by angle rho.
inline IsometryMatrix rotation_about_i(double rho) {
    double c = std::cos(rho / 2.0), s = std::sin(rho / 2.0);
    return {c, s, -s, c};
}

inline HPoint apply_isometry(const IsometryMatrix& m, const HPoint& p) {
    if (!p.valid()) throw GeolabError("apply_isometry: point outside upper half-plane");
    if (!m.unit_det(1e-9)) throw GeolabError("apply_isometry: non-unit determinant");
    std::complex<double> z = p.z();
    std::complex<double> w = (m.a * z + m.b) / (m.c * z + m.d);
    return to_hpoint(w);
}

/// Boundary action on R u {inf}; infinity encoded as NaN-free +inf.
inline double apply_isometry_boundary(const IsometryMatrix& m, double x) {
    if (std::isinf(x)) {
        if (m.c == 0.0) return std::numeric_limits<double>::infinity();
        return m.a / m.c;
    }
    double den = m.c * x + m.d;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return (m.a * x + m.b) / den;
}

inline double hyperbolic_distance(const HPoint& p, const HPoint& q) {
    if (!p.valid() || !q.valid()) throw GeolabError("hyperbolic_distance: invalid point");
    double dx = p.x - q.x, dy = p.y - q.y;
    // 2 asinh(|dz| / (2 sqrt(y1 y2))) == acosh(1 + |dz|^2/(2 y1 y2)),
    // but stays accurate for nearby points
    double u = std::sqrt(dx * dx + dy * dy) / (2.0 * std::sqrt(p.y * q.y));
    return 2.0 * std::asinh(u);
}

/// Translation length 2*arccosh(|tr|/2) of a hyperbolic element.
inline double translation_length(const IsometryMatrix& m) {
    double t = std::fabs(m.trace()) / std::sqrt(m.det());
    if (t <= 2.0) throw GeolabError("translation_length: element is not hyperbolic (|trace| <= 2)");
    return 2.0 * std::acosh(t / 2.0);
}

inline bool is_hyperbolic(const IsometryMatrix& m, double margin = 0.0) {
    return std::fabs(m.trace()) / std::sqrt(m.det()) > 2.0 + margin;
}

/// Repelling and attracting boundary fixed points of a hyperbolic element.
struct AxisEndpoints {
    double repelling;
    double attracting;
};

inline AxisEndpoints axis_endpoints(const IsometryMatrix& m) {
    if (!is_hyperbolic(m)) throw GeolabError("axis_endpoints: not hyperbolic");
    double tr = m.trace();
    double disc = std::sqrt(tr * tr - 4.0);
    double fp1, fp2;
    if (std::fabs(m.c) < 1e-300) {
        // fixed points: b/(d-a) and infinity
        fp1 = std::numeric_limits<double>::infinity();
        fp2 = (std::fabs(m.d - m.a) > 0.0) ? m.b / (m.d - m.a)
                                           : std::numeric_limits<double>::infinity();
    } else {
        fp1 = (m.a - m.d + disc) / (2.0 * m.c);
        fp2 = (m.a - m.d - disc) / (2.0 * m.c);
    }
    if (std::isinf(fp1) || std::isinf(fp2)) {
        double fin = std::isinf(fp1) ? fp2 : fp1;
        // c == 0 here; the multiplier at infinity is (a/d)^2
        double mult_inf = (m.a / m.d) * (m.a / m.d);
        if (mult_inf < 1.0) return {fin, std::numeric_limits<double>::infinity()};
        return {std::numeric_limits<double>::infinity(), fin};
    }
    // attracting fixed point has multiplier 1/(c x + d)^2 < 1
    auto den1 = m.c * fp1 + m.d;
    if (den1 * den1 > 1.0) return {fp2, fp1};
    return {fp1, fp2};
}

/// Cayley map to the Poincare disk, i -> 0.
inline std::complex<double> half_plane_to_disk(const HPoint& p) {
    std::complex<double> z = p.z();
    return (z - std::complex<double>(0, 1)) / (z + std::complex<double>(0, 1));
}

inline HPoint disk_to_half_plane(std::complex<double> w) {
    std::complex<double> i(0, 1);
    return to_hpoint(i * (1.0 + w) / (1.0 - w));
}

/// Boundary point of the half-plane (R u {inf}) as an angle on the disk
/// boundary circle. Numerically uniform; avoids the blow-up near infinity.
inline double boundary_to_disk_angle(double x) {
    if (std::isinf(x)) return std::arg(std::complex<double>(1.0, 0.0) * 1.0); // w = (x-i)/(x+i) -> 1
    std::complex<double> w = (std::complex<double>(x, 0) - std::complex<double>(0, 1)) /
                             (std::complex<double>(x, 0) + std::complex<double>(0, 1));
    return std::arg(w);
}

/// Distance between boundary points as angular separation on the disk circle.
inline double boundary_separation(double x1, double x2) {
    double d = std::fabs(boundary_to_disk_angle(x1) - boundary_to_disk_angle(x2));
    return std::min(d, 2.0 * kPi - d);
}

inline double wrap_angle_signed(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a > kPi) a -= 2.0 * kPi;
    if (a < -kPi) a += 2.0 * kPi;
    return a;
}

inline double wrap_angle_2pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    return a;
}

} // namespace geolab
