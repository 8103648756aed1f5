#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geolab/shadowing.hpp"

using namespace geolab;

namespace {

UnitTangent random_tangent(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    std::uniform_real_distribution<double> uy(0.5, 2.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    return {{ux(rng), uy(rng)}, ua(rng)};
}

/// Chain of n segments along the orbit of theta, with the start of each
/// later segment rotated by the signed jump sizes (sasaki jump = |size|).
std::vector<std::pair<UnitTangent, double>> perturbed_chain(const SurfaceModel& M,
                                                            const UnitTangent& theta,
                                                            const std::vector<double>& durations,
                                                            const std::vector<double>& jumps) {
    std::vector<std::pair<UnitTangent, double>> segs;
    UnitTangent cur = reduce_tangent(M, theta);
    for (size_t k = 0; k < durations.size(); ++k) {
        segs.push_back({cur, durations[k]});
        if (k + 1 < durations.size()) {
            UnitTangent end = geodesic_flow(M, cur, durations[k], 1e-11);
            end.angle = wrap_angle_2pi(end.angle + jumps[k]);
            cur = reduce_tangent(M, end);
        }
    }
    return segs;
}

} // namespace

TEST_CASE("pseudo-orbit validation") {
    SurfaceModel M = make_constant_negative();
    std::mt19937_64 rng(23);
    SECTION("a true orbit split into segments has near-zero jumps") {
        UnitTangent theta = reduce_tangent(M, random_tangent(rng));
        auto segs = perturbed_chain(M, theta, {1.0, 1.5, 1.25}, {0.0, 0.0});
        PseudoOrbit po = make_pseudo_orbit(M, segs, 1e-8);
        CHECK(po.delta_actual < 1e-10);
        CHECK(po.total_time() == Catch::Approx(3.75));
        CHECK(po.size() == 3);
    }
    SECTION("jump sizes are measured faithfully") {
        UnitTangent theta = reduce_tangent(M, random_tangent(rng));
        auto segs = perturbed_chain(M, theta, {1.0, 1.0}, {0.05});
        PseudoOrbit po = make_pseudo_orbit(M, segs, 0.06);
        CHECK(po.delta_actual == Catch::Approx(0.05).margin(1e-9));
        CHECK_THROWS_AS(make_pseudo_orbit(M, segs, 0.01), GeolabError);
    }
    SECTION("short segments are rejected") {
        UnitTangent theta = reduce_tangent(M, random_tangent(rng));
        auto segs = perturbed_chain(M, theta, {1.0, 1.0}, {0.0});
        segs[1].second = 0.1;
        CHECK_THROWS_AS(make_pseudo_orbit(M, segs, 1.0), GeolabError);
    }
}

TEST_CASE("shadowing of non-periodic chains") {
    SurfaceModel M = make_constant_negative();
    std::mt19937_64 rng(29);
    SECTION("an unperturbed chain is shadowed by its own orbit") {
        for (int k = 0; k < 5; ++k) {
            UnitTangent theta = reduce_tangent(M, random_tangent(rng));
            auto segs = perturbed_chain(M, theta, {1.0, 1.5, 1.0, 1.25}, {0.0, 0.0, 0.0});
            PseudoOrbit po = make_pseudo_orbit(M, segs, 1e-8);
            ShadowingResult res = shadow_search(M, po);
            CHECK(res.eps_achieved < 1e-6);
            CHECK(res.reparam_dev < 0.05 + 1e-9);
            // the tracing orbit starts where the chain starts
            CHECK(surface_sasaki_distance(M, res.orbit, segs[0].first) < 1e-6);
        }
    }
    SECTION("a single 0.05 jump is traced within a modest distance") {
        UnitTangent theta = reduce_tangent(M, random_tangent(rng));
        auto segs = perturbed_chain(M, theta, {1.5, 1.5}, {0.05});
        PseudoOrbit po = make_pseudo_orbit(M, segs, 0.06);
        ShadowingResult res = shadow_search(M, po);
        CHECK(res.eps_achieved > 1e-4); // genuinely broken chain
        CHECK(res.eps_achieved < 0.2);
        CHECK(res.reparam_dev < 0.1 + 1e-9);
    }
    SECTION("tracing distance decreases when the jumps are halved") {
        for (int k = 0; k < 10; ++k) {
            UnitTangent theta = reduce_tangent(M, random_tangent(rng));
            std::vector<double> durations{1.0, 1.25, 1.0, 1.5};
            std::vector<double> signs;
            std::uniform_int_distribution<int> coin(0, 1);
            for (int j = 0; j < 3; ++j) signs.push_back(coin(rng) ? 1.0 : -1.0);
            auto eps_for = [&](double delta) {
                std::vector<double> jumps;
                for (double s : signs) jumps.push_back(s * delta);
                auto segs = perturbed_chain(M, theta, durations, jumps);
                PseudoOrbit po = make_pseudo_orbit(M, segs, delta + 1e-9);
                return shadow_search(M, po).eps_achieved;
            };
            double e8 = eps_for(0.08), e4 = eps_for(0.04), e2 = eps_for(0.02);
            CHECK(e8 > e4);
            CHECK(e4 > e2);
        }
    }
    SECTION("periodic chains are rejected") {
        UnitTangent theta = reduce_tangent(M, random_tangent(rng));
        PseudoOrbit po;
        po.points = {theta};
        po.durations = {1.0};
        po.periodic = true;
        CHECK_THROWS_AS(shadow_search(M, po), GeolabError);
    }
}

TEST_CASE("closing periodic chains on the constant model") {
    SurfaceModel M = make_constant_negative();
    const FuchsianGroup& G = M.group();
    IsometryMatrix g1 = G.generator(0);
    double ell = translation_length(g1);
    AxisEndpoints ends = axis_endpoints(g1);
    UnitTangent ax = reduce_tangent(
        M, geolab::detail::geodesic_between(ends.repelling, ends.attracting, G.center()));
    SECTION("single-generator loop recovers the translation length") {
        PseudoOrbit po = make_pseudo_orbit(M, {{ax, ell}}, 1e-6, true);
        PeriodicOrbitRecord rec = close_periodic(M, po);
        CHECK(rec.period == Catch::Approx(ell).margin(1e-9));
        CHECK(rec.primitive);
        CHECK(canonical_cyclic(rec.word).size() == 1);
        CHECK(rec.eps_achieved < 1e-6);
        // the recovered orbit closes up under the flow
        UnitTangent back = reduce_tangent(M, geodesic_flow(M, rec.initial, rec.period));
        CHECK(surface_sasaki_distance(M, rec.initial, back) < 1e-6);
    }
    SECTION("small jumps do not change the holonomy class") {
        UnitTangent mid = reduce_tangent(M, geodesic_flow(M, ax, ell / 2.0));
        mid.angle = wrap_angle_2pi(mid.angle + 0.01);
        PseudoOrbit po = make_pseudo_orbit(M, {{ax, ell / 2.0}, {mid, ell / 2.0}}, 0.1, true);
        PeriodicOrbitRecord rec = close_periodic(M, po);
        CHECK(rec.period == Catch::Approx(ell).margin(1e-12));
        CHECK(rec.eps_achieved < 0.2);
        CHECK(std::fabs(rec.period - po.total_time()) <=
              (static_cast<double>(po.size()) + 1.0) * std::max(0.1, rec.eps_achieved));
    }
    SECTION("non-periodic chains are rejected") {
        PseudoOrbit po = make_pseudo_orbit(
            M, {{ax, 1.0}, {geodesic_flow(M, ax, 1.0), 1.0}}, 1e-6, false);
        CHECK_THROWS_AS(close_periodic(M, po), GeolabError);
    }
}

TEST_CASE("closing periodic chains on the collar") {
    SurfaceModel C = build_collar(1.0, 0.5, 0.5);
    double period_band = 2.0 * kPi * C.profile().c;
    SECTION("exact band circle chain") {
        UnitTangent a{{0.05, 0.0}, kPi / 2.0};
        UnitTangent b{{0.05, kPi}, kPi / 2.0};
        double half = period_band / 2.0;
        PseudoOrbit po = make_pseudo_orbit(C, {{a, half}, {b, half}}, 1e-7, true);
        PeriodicOrbitRecord rec = close_periodic(C, po);
        CHECK(rec.period == Catch::Approx(period_band).margin(1e-8));
        CHECK(rec.residual < 1e-8);
        // sample grids of chain and orbit are offset by up to dt/2
        CHECK(rec.eps_achieved < 0.03);
    }
    SECTION("perturbed band circle closes to the band period") {
        UnitTangent a{{0.02, 0.0}, kPi / 2.0 + 0.01};
        PseudoOrbit po = make_pseudo_orbit(C, {{a, period_band}}, 0.5, true);
        PeriodicOrbitRecord rec = close_periodic(C, po);
        CHECK(rec.period == Catch::Approx(period_band).margin(1e-6));
        CHECK(std::fabs(rec.initial.angle - kPi / 2.0) < 1e-5);
        CHECK(std::fabs(rec.initial.base.u) <= 0.25 + 1e-6);
    }
}

TEST_CASE("periodic orbit enumeration") {
    SurfaceModel M = make_constant_negative();
    SECTION("no closed orbits below the shortest length") {
        CHECK(enumerate_periodic_orbits(M, 2.0).empty());
    }
    SECTION("counts at 4 and 5, sorted, primitive, closing up") {
        auto p4 = enumerate_periodic_orbits(M, 4.0);
        auto p5 = enumerate_periodic_orbits(M, 5.0);
        CHECK(p4.size() == 12);
        CHECK(p5.size() == 24);
        CHECK(p4.size() <= p5.size());
        for (size_t i = 1; i < p5.size(); ++i)
            CHECK(p5[i - 1].period <= p5[i].period + 1e-12);
        for (const auto& rec : p4) {
            CHECK(rec.primitive);
            CHECK(rec.period >= M.group().systole() - 1e-9);
            UnitTangent back = reduce_tangent(M, geodesic_flow(M, rec.initial, rec.period));
            CHECK(surface_sasaki_distance(M, rec.initial, back) < 1e-6);
        }
    }
}
