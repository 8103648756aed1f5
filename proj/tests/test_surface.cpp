#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geolab/surface.hpp"

using namespace geolab;

TEST_CASE("collar profile construction") {
    SECTION("bad parameters rejected") {
        CHECK_THROWS_AS(build_collar(0.0, 0.5, 0.5), GeolabError);
        CHECK_THROWS_AS(build_collar(1.0, -0.1, 0.5), GeolabError);
        CHECK_THROWS_AS(build_collar(1.0, 0.5, 0.0), GeolabError);
    }
    SECTION("flat band and convexity") {
        SurfaceModel M = build_collar(1.0, 0.5, 0.5);
        const auto& prof = M.profile();
        // f constant on the band, f' vanishing at the band edge
        CHECK(prof.f(0.0) == 1.0);
        CHECK(prof.f(0.24) == 1.0);
        CHECK(prof.fp(0.25) == 0.0);
        CHECK(prof.fp(-0.25) == 0.0);
        // curvature zero on the band, strictly negative outside the ramp
        for (double r : {0.0, 0.1, -0.2, 0.25}) {
            CHECK(curvature_at(M, {r, 0.0}) == 0.0);
        }
        for (double r : {0.3, 0.5, -0.6, 1.0, 1.76, -2.0, 3.0}) {
            CHECK(curvature_at(M, {r, 0.0}) < 0.0);
        }
        // K <= 0 everywhere on a dense grid
        for (int i = 0; i <= 10000; ++i) {
            double r = -8.0 + 16.0 * i / 10000.0;
            REQUIRE(curvature_at(M, {r, 0.0}) <= 1e-12);
        }
    }
    SECTION("degenerate band w = 0") {
        SurfaceModel M = build_collar(1.0, 0.0, 0.5);
        CHECK(curvature_at(M, {0.0, 0.0}) == 0.0);
        for (double r : {0.05, -0.1, 0.4, 1.0}) {
            CHECK(curvature_at(M, {r, 0.0}) < 0.0);
        }
    }
    SECTION("asymptotic curvature -1") {
        SurfaceModel M = build_collar(0.8, 0.5, 0.4);
        for (double r : {6.0, -7.0, 9.0}) {
            CHECK(curvature_at(M, {r, 0.0}) == Catch::Approx(-1.0).margin(1e-3));
        }
        // oracle: curvature from finite differences of the profile itself
        const auto& prof = M.profile();
        double h = 1e-4;
        for (double r : {0.1, 0.45, 0.9, 2.0, 5.0, -3.3}) {
            double fpp_fd = (prof.f(r + h) - 2.0 * prof.f(r) + prof.f(r - h)) / (h * h);
            CHECK(curvature_at(M, {r, 0.0}) ==
                  Catch::Approx(-fpp_fd / prof.f(r)).margin(1e-5));
        }
    }
    SECTION("profile derivative consistency") {
        CollarProfile prof{1.3, 0.6, 0.7};
        double h = 1e-5;
        for (double r : {-2.0, -0.5, -0.31, 0.0, 0.2, 0.31, 0.64, 1.0, 4.0}) {
            double fp_fd = (prof.f(r + h) - prof.f(r - h)) / (2.0 * h);
            CHECK(prof.fp(r) == Catch::Approx(fp_fd).margin(1e-7));
        }
    }
}

TEST_CASE("constant model curvature") {
    SurfaceModel M = make_constant_negative();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        CHECK(curvature_at(M, {u(rng), std::exp(u(rng))}) == -1.0);
    }
}

TEST_CASE("Sasaki distance proxy") {
    SurfaceModel M = make_constant_negative();
    SECTION("coincident tangents") {
        UnitTangent t{{0.3, 1.2}, 0.7};
        CHECK(sasaki_distance(M, t, t) == 0.0);
    }
    SECTION("pure vertical displacement") {
        UnitTangent t1{{0.0, 1.0}, 0.0};
        UnitTangent t2{{0.0, 1.0}, kPi / 2.0};
        CHECK(sasaki_distance(M, t1, t2) == Catch::Approx(kPi / 2.0).margin(1e-12));
    }
    SECTION("symmetry on random pairs") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> ux(-2.0, 2.0);
        std::uniform_real_distribution<double> uy(0.2, 4.0);
        std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
        for (int k = 0; k < 1000; ++k) {
            UnitTangent a{{ux(rng), uy(rng)}, ua(rng)};
            UnitTangent b{{ux(rng), uy(rng)}, ua(rng)};
            double dab = sasaki_distance(M, a, b);
            CHECK(dab == Catch::Approx(sasaki_distance(M, b, a)).margin(1e-12));
            CHECK(dab >= 0.0);
        }
    }
    SECTION("collar distance uses the warped angular factor") {
        SurfaceModel C = build_collar(2.0, 1.0, 0.5);
        UnitTangent a{{0.0, 0.0}, 0.0};
        UnitTangent b{{0.0, 0.1}, 0.0};
        // on the flat band f = 2, so the arc between theta 0 and 0.1 is 0.2
        CHECK(sasaki_distance(C, a, b) == Catch::Approx(0.2).margin(1e-12));
    }
}

TEST_CASE("tangent pushforward") {
    SurfaceModel M = make_constant_negative();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(-1.5, 1.5);
    std::uniform_real_distribution<double> uy(0.3, 3.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);

    SECTION("base transforms by the Mobius action, inverse undoes") {
        for (int k = 0; k < 100; ++k) {
            UnitTangent t{{ux(rng), uy(rng)}, ua(rng)};
            const IsometryMatrix& g = M.group().generator(k % 4);
            UnitTangent moved = apply_isometry_tangent(g, t);
            HPoint expect = apply_isometry(g, t.base.hp());
            CHECK(moved.base.u == Catch::Approx(expect.x).margin(1e-12));
            CHECK(moved.base.v == Catch::Approx(expect.y).margin(1e-12));
            UnitTangent back = apply_isometry_tangent(g.inverse(), moved);
            CHECK(sasaki_distance(M, back, t) < 1e-10);
        }
    }
    SECTION("pushforward preserves the hyperbolic angle between tangents") {
        for (int k = 0; k < 100; ++k) {
            ChartPoint p{ux(rng), uy(rng)};
            UnitTangent t1{p, ua(rng)}, t2{p, ua(rng)};
            const IsometryMatrix& g = M.group().generator((k + 1) % 4);
            UnitTangent m1 = apply_isometry_tangent(g, t1);
            UnitTangent m2 = apply_isometry_tangent(g, t2);
            double before = wrap_angle_signed(t1.angle - t2.angle);
            double after = wrap_angle_signed(m1.angle - m2.angle);
            CHECK(after == Catch::Approx(before).margin(1e-10));
        }
    }
}

TEST_CASE("quotient Sasaki distance") {
    SurfaceModel M = make_constant_negative();
    const auto& G = M.group();
    SECTION("deck-translated copy is at distance zero") {
        UnitTangent t{{0.05, 1.1}, 0.9};
        for (int k = 0; k < 4; ++k) {
            UnitTangent moved = apply_isometry_tangent(G.generator(k), t);
            CHECK(surface_sasaki_distance(M, t, moved) < 1e-10);
        }
    }
    SECTION("reduce_tangent lands in the fundamental domain") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> ux(-3.0, 3.0);
        std::uniform_real_distribution<double> uy(0.05, 6.0);
        std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
        for (int k = 0; k < 200; ++k) {
            UnitTangent t{{ux(rng), uy(rng)}, ua(rng)};
            UnitTangent red = reduce_tangent(M, t);
            CHECK(G.in_fundamental_domain(red.base.hp(), 1e-9));
            // the reducing deck transformation carries red back to t
            auto [p, w] = G.reduce_to_fundamental_domain(t.base.hp());
            CHECK(hyperbolic_distance(p, red.base.hp()) < 1e-9);
            UnitTangent back = apply_isometry_tangent(G.evaluate(w), red);
            CHECK(sasaki_distance(M, back, t) < 1e-8);
        }
    }
}
