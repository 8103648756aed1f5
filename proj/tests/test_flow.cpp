#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geolab/flow.hpp"

using namespace geolab;

namespace {

UnitTangent random_tangent(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(-1.5, 1.5);
    std::uniform_real_distribution<double> uy(0.3, 3.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    return {{ux(rng), uy(rng)}, ua(rng)};
}

} // namespace

TEST_CASE("integrator sanity") {
    SECTION("exponential growth") {
        auto rhs = [](double, const OdeState<1>& y) -> OdeState<1> { return {y[0]}; };
        auto y = integrate_ode<1>(rhs, {1.0}, 0.0, 1.0, {});
        CHECK(y[0] == Catch::Approx(std::exp(1.0)).epsilon(1e-9));
    }
    SECTION("harmonic oscillator energy") {
        auto rhs = [](double, const OdeState<2>& y) -> OdeState<2> { return {y[1], -y[0]}; };
        auto y = integrate_ode<2>(rhs, {1.0, 0.0}, 0.0, 50.0, {});
        CHECK(y[0] * y[0] + y[1] * y[1] == Catch::Approx(1.0).margin(1e-7));
        CHECK(y[0] == Catch::Approx(std::cos(50.0)).margin(1e-7));
    }
    SECTION("backward integration") {
        auto rhs = [](double, const OdeState<1>& y) -> OdeState<1> { return {y[0]}; };
        auto y = integrate_ode<1>(rhs, {1.0}, 0.0, -2.0, {});
        CHECK(y[0] == Catch::Approx(std::exp(-2.0)).epsilon(1e-9));
    }
    SECTION("step underflow reported") {
        // right-hand side blows up in finite time: y' = y^2, y(0)=1 at t=1
        auto rhs = [](double, const OdeState<1>& y) -> OdeState<1> { return {y[0] * y[0]}; };
        CHECK_THROWS_AS(integrate_ode<1>(rhs, {1.0}, 0.0, 2.0, {}), OdeFailure);
    }
}

TEST_CASE("constant model flow is the exact vertical-geodesic conjugation") {
    SurfaceModel M = make_constant_negative();
    SECTION("vertical geodesic from i") {
        UnitTangent up{{0.0, 1.0}, kPi / 2.0};
        UnitTangent out = geodesic_flow(M, up, 1.0);
        CHECK(out.base.u == Catch::Approx(0.0).margin(1e-12));
        CHECK(out.base.v == Catch::Approx(std::exp(1.0)).epsilon(1e-12));
        CHECK(out.angle == Catch::Approx(kPi / 2.0).margin(1e-12));
    }
    SECTION("time zero is the identity") {
        std::mt19937_64 rng(3);
        for (int k = 0; k < 50; ++k) {
            UnitTangent t = random_tangent(rng);
            CHECK(sasaki_distance(M, geodesic_flow(M, t, 0.0), t) < 1e-12);
        }
    }
    SECTION("flow property") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> ut(-3.0, 3.0);
        for (int k = 0; k < 100; ++k) {
            UnitTangent t = random_tangent(rng);
            double a = ut(rng), b = ut(rng);
            UnitTangent one = geodesic_flow(M, t, a + b);
            UnitTangent two = geodesic_flow(M, geodesic_flow(M, t, b), a);
            CHECK(sasaki_distance(M, one, two) < 1e-9);
        }
    }
    SECTION("unit speed via finite differences") {
        std::mt19937_64 rng(7);
        for (int k = 0; k < 50; ++k) {
            UnitTangent t = random_tangent(rng);
            double h = 1e-6;
            UnitTangent p = geodesic_flow(M, t, h), m = geodesic_flow(M, t, -h);
            double dx = (p.base.u - m.base.u) / (2.0 * h);
            double dy = (p.base.v - m.base.v) / (2.0 * h);
            double speed = std::sqrt(dx * dx + dy * dy) / t.base.v;
            CHECK(speed == Catch::Approx(1.0).margin(1e-8));
            // the chart angle of the velocity matches the stored frame angle
            CHECK(wrap_angle_signed(std::atan2(dy, dx) - t.angle) ==
                  Catch::Approx(0.0).margin(1e-6));
        }
    }
    SECTION("reversal flows backward") {
        std::mt19937_64 rng(9);
        for (int k = 0; k < 50; ++k) {
            UnitTangent t = random_tangent(rng);
            UnitTangent a = reverse_tangent(geodesic_flow(M, reverse_tangent(t), 1.7));
            UnitTangent b = geodesic_flow(M, t, -1.7);
            CHECK(sasaki_distance(M, a, b) < 1e-10);
        }
    }
}

TEST_CASE("constant model ideal endpoints") {
    SurfaceModel M = make_constant_negative();
    SECTION("vertical directions") {
        UnitTangent up{{0.0, 1.0}, kPi / 2.0};
        UnitTangent down{{0.0, 1.0}, 3.0 * kPi / 2.0};
        double inf = std::numeric_limits<double>::infinity();
        CHECK(boundary_separation(forward_endpoint_constant(up), inf) < 1e-12);
        CHECK(backward_endpoint_constant(up) == Catch::Approx(0.0).margin(1e-12));
        CHECK(forward_endpoint_constant(down) == Catch::Approx(0.0).margin(1e-12));
        CHECK(boundary_separation(backward_endpoint_constant(down), inf) < 1e-12);
    }
    SECTION("horizontal direction at i runs along the unit half-circle") {
        UnitTangent right{{0.0, 1.0}, 0.0};
        CHECK(forward_endpoint_constant(right) == Catch::Approx(1.0).margin(1e-12));
        CHECK(backward_endpoint_constant(right) == Catch::Approx(-1.0).margin(1e-12));
    }
    SECTION("flow invariance of endpoints") {
        std::mt19937_64 rng(13);
        for (int k = 0; k < 100; ++k) {
            UnitTangent t = random_tangent(rng);
            UnitTangent moved = geodesic_flow(M, t, 5.0);
            CHECK(boundary_separation(forward_endpoint_constant(t),
                                      forward_endpoint_constant(moved)) < 1e-9);
            CHECK(boundary_separation(backward_endpoint_constant(t),
                                      backward_endpoint_constant(moved)) < 1e-9);
        }
    }
    SECTION("reversal swaps endpoints") {
        std::mt19937_64 rng(15);
        for (int k = 0; k < 50; ++k) {
            UnitTangent t = random_tangent(rng);
            UnitTangent r = reverse_tangent(t);
            CHECK(boundary_separation(forward_endpoint_constant(t),
                                      backward_endpoint_constant(r)) < 1e-10);
            CHECK(boundary_separation(backward_endpoint_constant(t),
                                      forward_endpoint_constant(r)) < 1e-10);
        }
    }
}

TEST_CASE("collar flow") {
    SurfaceModel M = build_collar(1.0, 0.5, 0.5);

    SECTION("band circle is a closed geodesic") {
        UnitTangent t{{0.0, 0.0}, kPi / 2.0}; // tangent to the circle r = 0
        auto traj = sample_trajectory(M, t, 0.0, 100.0, 1.0, 1e-10);
        for (const auto& s : traj.samples) {
            REQUIRE(std::fabs(s.theta.base.u) < 1e-8);
        }
        // circumference in the flat band is 2 pi f(0) = 2 pi
        UnitTangent around = geodesic_flow(M, t, 2.0 * kPi * M.profile().f(0.0));
        CHECK(std::fabs(around.base.u) < 1e-8);
        CHECK(std::fabs(wrap_angle_signed(around.base.v - t.base.v)) < 1e-7);
        CHECK(std::fabs(wrap_angle_signed(around.angle - t.angle)) < 1e-8);
    }
    SECTION("radial geodesic never turns") {
        UnitTangent t{{0.0, 1.0}, 0.0};
        UnitTangent out = geodesic_flow(M, t, 7.0, 1e-10);
        CHECK(out.base.u == Catch::Approx(7.0).margin(1e-8));
        CHECK(out.base.v == Catch::Approx(1.0).margin(1e-8));
        CHECK(std::fabs(wrap_angle_signed(out.angle)) < 1e-8);
    }
    SECTION("flow property under the ODE tolerance") {
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> ur(-1.5, 1.5);
        std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
        double tol = 1e-10;
        for (int k = 0; k < 20; ++k) {
            UnitTangent t{{ur(rng), ua(rng)}, ua(rng)};
            UnitTangent one = geodesic_flow(M, t, 3.0, tol);
            UnitTangent two = geodesic_flow(M, geodesic_flow(M, t, 1.3, tol), 1.7, tol);
            CHECK(sasaki_distance(M, one, two) < 1e-7);
        }
    }
    SECTION("angular momentum f sin(beta) is conserved") {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> ur(-1.0, 1.0);
        std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
        const auto& prof = M.profile();
        for (int k = 0; k < 20; ++k) {
            UnitTangent t{{ur(rng), ua(rng)}, ua(rng)};
            double mom = prof.f(t.base.u) * std::sin(t.angle);
            auto traj = sample_trajectory(M, t, 0.0, 10.0, 0.5, 1e-11);
            for (const auto& s : traj.samples) {
                REQUIRE(prof.f(s.theta.base.u) * std::sin(s.theta.angle) ==
                        Catch::Approx(mom).margin(1e-8));
            }
        }
    }
    SECTION("trajectory samples agree with single flows") {
        UnitTangent t{{0.3, 1.0}, 1.1};
        auto traj = sample_trajectory(M, t, -2.0, 2.0, 0.5, 1e-11);
        REQUIRE(traj.samples.size() == 9);
        double prev = traj.samples.front().t;
        for (size_t i = 1; i < traj.samples.size(); ++i) {
            CHECK(traj.samples[i].t > prev);
            prev = traj.samples[i].t;
        }
        for (const auto& s : traj.samples) {
            UnitTangent direct = geodesic_flow(M, t, s.t, 1e-11);
            CHECK(sasaki_distance(M, s.theta, direct) < 1e-8);
        }
    }
    SECTION("invalid arguments rejected") {
        UnitTangent t{{0.0, 0.0}, 0.0};
        CHECK_THROWS_AS(geodesic_flow(M, t, 1.0, 0.0), GeolabError);
        CHECK_THROWS_AS(sample_trajectory(M, t, 0.0, 1.0, -0.1), GeolabError);
    }
}
