#pragma once

// Adaptive embedded Runge-Kutta pair of order 5(4), Dormand-Prince
// coefficients, with a fixed state dimension known at compile time.

#include <array>
#include <cmath>
#include <functional>
#include <type_traits>
#include <utility>

#include "geolab/hyperbolic.hpp"

namespace geolab {

template <size_t N>
using OdeState = std::array<double, N>;

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double h_init = 1e-2;
    double h_min = 1e-12;
    double h_max = 0.5;
    long max_steps = 2'000'000;
    // 0 = error-control all components; otherwise only the first err_dims
    // (passenger components then ride along without steering the step size)
    size_t err_dims = 0;
};

struct OdeFailure : GeolabError {
    using GeolabError::GeolabError;
};

/// Integrate y' = f(t, y) from t0 to t1 (either direction). Calls
/// observer(t, y) after every accepted step when provided.
template <size_t N, typename F,
          typename Obs = std::nullptr_t>
OdeState<N> integrate_ode(F&& f, OdeState<N> y, double t0, double t1,
                          const OdeOptions& opt = {}, Obs&& observer = nullptr) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double dir = (t1 >= t0) ? 1.0 : -1.0;
    double t = t0;
    double span = std::fabs(t1 - t0);
    if (span == 0.0) return y;
    double h = std::min(opt.h_init, span) * dir;

    auto axpy = [](OdeState<N>& out, const OdeState<N>& y0, double h,
                   std::initializer_list<std::pair<double, const OdeState<N>*>> terms) {
        for (size_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (auto& [c, k] : terms) s += c * (*k)[i];
            out[i] = y0[i] + h * s;
        }
    };

    OdeState<N> k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
    k1 = f(t, y);
    for (long step = 0; step < opt.max_steps; ++step) {
        if ((t - t1) * dir >= 0.0) return y;
        if (std::fabs(h) > opt.h_max) h = opt.h_max * dir;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;

        axpy(ytmp, y, h, {{a21, &k1}});
        k2 = f(t + c2 * h, ytmp);
        axpy(ytmp, y, h, {{a31, &k1}, {a32, &k2}});
        k3 = f(t + c3 * h, ytmp);
        axpy(ytmp, y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        k4 = f(t + c4 * h, ytmp);
        axpy(ytmp, y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        k5 = f(t + c5 * h, ytmp);
        axpy(ytmp, y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        k6 = f(t + h, ytmp);
        axpy(y5, y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        k7 = f(t + h, y5);

        double err = 0.0;
        size_t ne = (opt.err_dims > 0 && opt.err_dims < N) ? opt.err_dims : N;
        for (size_t i = 0; i < ne; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
            double sc = opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
            err = std::max(err, std::fabs(ei) / sc);
        }

        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7; // FSAL
            if constexpr (!std::is_same_v<std::decay_t<Obs>, std::nullptr_t>)
                observer(t, y);
        }
        double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        fac = std::min(5.0, std::max(0.2, fac));
        h *= fac;
        if (std::fabs(h) < opt.h_min)
            throw OdeFailure("integrate_ode: step size underflow");
    }
    throw OdeFailure("integrate_ode: step budget exceeded");
}

} // namespace geolab
