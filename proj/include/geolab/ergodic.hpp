#pragma once

// Entropy estimation from separated sets, periodic-orbit growth rates,
// periodic-orbit measures with weak* convergence diagnostics against the
// Liouville average, a Ruelle-inequality check, and the spanning-count
// probe showing that strip classes carry no entropy.

#include <functional>
#include <map>
#include <string>

#include "geolab/jacobi.hpp"
#include "geolab/shadowing.hpp"

namespace geolab {

struct SeparationCount {
    double T = 0.0;
    double eps = 0.0;
    size_t count = 0;
    bool lower_bound_only = false; // budget ran out before the sampler did
    size_t checks = 0;
};

namespace detail {

/// Orbit of theta sampled at 0, dt, ..., steps*dt, reduced each step so
/// the quotient distance search stays valid.
inline std::vector<UnitTangent> reduced_orbit(const SurfaceModel& M, const UnitTangent& theta,
                                              size_t steps, double dt, double tol = 1e-9) {
    std::vector<UnitTangent> out;
    out.reserve(steps + 1);
    UnitTangent cur = reduce_tangent(M, theta);
    out.push_back(cur);
    for (size_t k = 0; k < steps; ++k) {
        cur = reduce_tangent(M, geodesic_flow(M, cur, dt, tol));
        out.push_back(cur);
    }
    return out;
}

} // namespace detail

/// Greedy separated-set packing: accept a sample when its orbit over
/// [0, T] leaves an eps-neighborhood of every accepted orbit at some
/// sampled time. The result is a lower bound on the true maximum.
inline SeparationCount count_separated(const SurfaceModel& M,
                                       const std::vector<UnitTangent>& samples, double T,
                                       double eps, double dt = 0.25,
                                       size_t budget_checks = 50'000'000) {
    if (!(T > 0.0) || !(eps > 0.0))
        throw GeolabError("count_separated: T and eps must be positive");
    SeparationCount out;
    out.T = T;
    out.eps = eps;
    size_t steps = static_cast<size_t>(std::lround(std::floor(T / dt + 1e-9)));
    std::vector<std::vector<UnitTangent>> orbits;
    orbits.reserve(samples.size());
    for (const auto& s : samples)
        orbits.push_back(detail::reduced_orbit(M, s, steps, dt));
    std::vector<size_t> accepted;
    for (size_t i = 0; i < orbits.size(); ++i) {
        bool keep = true;
        for (auto it = accepted.rbegin(); it != accepted.rend(); ++it) {
            if (out.checks >= budget_checks) {
                out.lower_bound_only = true;
                out.count = accepted.size();
                return out;
            }
            ++out.checks;
            bool separated = false;
            // late times separate first under an expanding flow
            for (size_t k = steps + 1; k-- > 0;) {
                if (surface_sasaki_distance(M, orbits[i][k], orbits[*it][k]) > eps) {
                    separated = true;
                    break;
                }
            }
            if (!separated) {
                keep = false;
                break;
            }
        }
        if (keep) accepted.push_back(i);
    }
    out.count = accepted.size();
    return out;
}

struct PerEpsSlope {
    double eps = 0.0;
    double slope = 0.0;
    double residual = 0.0; // rms of the log-count fit
    size_t n_T = 0;
};

struct EntropyEstimate {
    double h = 0.0;
    double h_eps = 0.0; // the resolution whose slope was adopted
    std::vector<PerEpsSlope> per_eps;
    bool degraded_fit = false;
    bool nonmonotone = false;
};

namespace detail {

struct LsqFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

inline LsqFit lsq(const std::vector<double>& xs, const std::vector<double>& ys) {
    size_t n = xs.size();
    if (n < 2) throw GeolabError("lsq: need at least two points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw GeolabError("lsq: degenerate abscissae");
    LsqFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

} // namespace detail

/// Per-resolution least-squares slopes of log count vs T; the adopted
/// estimate is the slope at the smallest resolution whose fit residual
/// stays under residual_tol.
inline EntropyEstimate entropy_estimate(const std::vector<SeparationCount>& counts,
                                        double residual_tol = 0.05) {
    std::map<double, std::vector<std::pair<double, size_t>>> by_eps;
    for (const auto& c : counts) by_eps[c.eps].push_back({c.T, c.count});
    if (by_eps.empty()) throw GeolabError("entropy_estimate: no counts");
    EntropyEstimate est;
    for (auto& [eps, rows] : by_eps) {
        std::sort(rows.begin(), rows.end());
        if (rows.size() < 3)
            throw GeolabError("entropy_estimate: need at least three horizons per resolution");
        std::vector<double> xs, ys;
        for (auto& [T, m] : rows) {
            if (m == 0) throw GeolabError("entropy_estimate: zero count");
            xs.push_back(T);
            ys.push_back(std::log(static_cast<double>(m)));
        }
        for (size_t i = 1; i < rows.size(); ++i)
            if (rows[i].second < rows[i - 1].second) est.nonmonotone = true;
        auto fit = detail::lsq(xs, ys);
        est.per_eps.push_back({eps, fit.slope, fit.residual, rows.size()});
    }
    // smallest resolution with an acceptable fit; fall back to the
    // smallest resolution outright when none qualifies
    bool found = false;
    for (const auto& p : est.per_eps) {
        if (p.residual < residual_tol) {
            est.h = p.slope;
            est.h_eps = p.eps;
            found = true;
            break;
        }
    }
    if (!found) {
        est.h = est.per_eps.front().slope;
        est.h_eps = est.per_eps.front().eps;
        est.degraded_fit = true;
    }
    if (est.nonmonotone) est.degraded_fit = true;
    return est;
}

/// Exponential growth rate of the closed-orbit count: least-squares
/// slope of log #Per(T) over the grid. Demands a table certified
/// complete past the largest horizon.
inline double growth_rate_per(const std::vector<PeriodicOrbitRecord>& records,
                              const std::vector<double>& T_grid, double certified_up_to) {
    if (T_grid.size() < 2) throw GeolabError("growth_rate_per: need at least two horizons");
    std::vector<double> xs, ys;
    for (double T : T_grid) {
        if (T > certified_up_to + 1e-12)
            throw GeolabError("growth_rate_per: table only certified up to " +
                              std::to_string(certified_up_to));
        size_t n = 0;
        for (const auto& r : records)
            if (r.period <= T + 1e-9) ++n;
        if (n == 0)
            throw GeolabError("growth_rate_per: no closed orbits below horizon " +
                              std::to_string(T));
        xs.push_back(T);
        ys.push_back(std::log(static_cast<double>(n)));
    }
    return detail::lsq(xs, ys).slope;
}

/// Diagnostic companion: slope of log(T * #Per(T)), which removes the
/// leading 1/T prefactor of the count asymptotics. Not contractual.
inline double growth_rate_per_corrected(const std::vector<PeriodicOrbitRecord>& records,
                                        const std::vector<double>& T_grid,
                                        double certified_up_to) {
    if (T_grid.size() < 2) throw GeolabError("growth_rate_per_corrected: need two horizons");
    std::vector<double> xs, ys;
    for (double T : T_grid) {
        if (T > certified_up_to + 1e-12)
            throw GeolabError("growth_rate_per_corrected: beyond certified horizon");
        size_t n = 0;
        for (const auto& r : records)
            if (r.period <= T + 1e-9) ++n;
        if (n == 0) throw GeolabError("growth_rate_per_corrected: empty horizon");
        xs.push_back(T);
        ys.push_back(std::log(T * static_cast<double>(n)));
    }
    return detail::lsq(xs, ys).slope;
}

struct OrbitMeasure {
    std::vector<std::pair<PeriodicOrbitRecord, double>> atoms; // record, weight
};

/// Uniform measure over all closed orbits with period at most T.
inline OrbitMeasure periodic_orbit_measure(const SurfaceModel& M, double T) {
    auto recs = enumerate_periodic_orbits(M, T);
    if (recs.empty()) throw GeolabError("periodic_orbit_measure: no orbits below horizon");
    OrbitMeasure mu;
    double w = 1.0 / static_cast<double>(recs.size());
    for (auto& r : recs) mu.atoms.push_back({std::move(r), w});
    return mu;
}

/// Uniform measure over closed orbits with period in (T - window, T].
inline OrbitMeasure periodic_orbit_measure_window(const SurfaceModel& M, double T,
                                                  double window = 0.5) {
    auto recs = enumerate_periodic_orbits(M, T);
    OrbitMeasure mu;
    std::vector<PeriodicOrbitRecord> kept;
    for (auto& r : recs)
        if (r.period > T - window) kept.push_back(std::move(r));
    if (kept.empty())
        throw GeolabError("periodic_orbit_measure_window: empty period window");
    double w = 1.0 / static_cast<double>(kept.size());
    for (auto& r : kept) mu.atoms.push_back({std::move(r), w});
    return mu;
}

struct Observable {
    std::string name;
    std::function<double(const UnitTangent&)> eval;
};

inline Observable observable_one() {
    return {"one", [](const UnitTangent&) { return 1.0; }};
}

inline Observable observable_curvature(const SurfaceModel& M) {
    return {"curvature", [M](const UnitTangent& t) { return curvature_at(M, t.base); }};
}

/// Smoothed indicator of the base-point ball around center: 1 inside
/// half the radius, smooth falloff to 0 at the radius.
inline Observable observable_ball(const SurfaceModel& M, ChartPoint center, double radius) {
    if (!(radius > 0.0)) throw GeolabError("observable_ball: radius must be positive");
    auto dist = [M, center](const ChartPoint& p) {
        if (!M.is_constant()) return base_chart_distance(M, p, center);
        double best = hyperbolic_distance(p.hp(), center.hp());
        for (const auto& g : M.group().neighbor_transforms())
            best = std::min(best, hyperbolic_distance(p.hp(), apply_isometry(g, center.hp())));
        return best;
    };
    std::string name = "ball_" + std::to_string(center.u) + "_" + std::to_string(center.v);
    return {name, [dist, radius](const UnitTangent& t) {
                double d = dist(t.base);
                if (d <= 0.5 * radius) return 1.0;
                if (d >= radius) return 0.0;
                double x = (d - 0.5 * radius) / (0.5 * radius);
                return 1.0 - x * x * (3.0 - 2.0 * x);
            }};
}

/// Distance-from-center coordinate: the disk-chart radius of the reduced
/// base point. Constant model only; inputs are expected reduced.
inline Observable observable_disk_radius(const SurfaceModel& M) {
    if (!M.is_constant())
        throw GeolabError("observable_disk_radius: constant model only");
    return {"disk_radius",
            [](const UnitTangent& t) { return std::abs(half_plane_to_disk(t.base.hp())); }};
}

/// Time average of f along one closed orbit, by uniform quadrature with
/// step at most dt. The orbit is marched in reduced coordinates.
inline double orbit_average(const SurfaceModel& M, const PeriodicOrbitRecord& rec,
                            const Observable& f, double dt = 0.05) {
    if (!(rec.period > 0.0)) throw GeolabError("orbit_average: nonpositive period");
    size_t n = std::max<size_t>(8, static_cast<size_t>(std::ceil(rec.period / dt)));
    double step = rec.period / static_cast<double>(n);
    UnitTangent cur = reduce_tangent(M, rec.initial);
    double sum = 0.0;
    for (size_t k = 0; k < n; ++k) {
        sum += f.eval(cur);
        cur = reduce_tangent(M, geodesic_flow(M, cur, step, 1e-10));
    }
    return sum / static_cast<double>(n);
}

inline double orbit_measure_integrate(const SurfaceModel& M, const OrbitMeasure& mu,
                                      const Observable& f, double dt = 0.05) {
    double wsum = 0.0, acc = 0.0;
    for (const auto& [rec, w] : mu.atoms) {
        acc += w * orbit_average(M, rec, f, dt);
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-9)
        throw GeolabError("orbit_measure_integrate: weights do not sum to 1");
    return acc;
}

/// Liouville average of f: midpoint quadrature over a disk-chart grid of
/// the fundamental octagon times a uniform angle grid, weighted by the
/// hyperbolic area element. Constant model only.
inline double liouville_average(const SurfaceModel& M, const Observable& f,
                                size_t grid_n = 240, size_t angle_n = 8) {
    if (!M.is_constant()) throw GeolabError("liouville_average: constant model only");
    const FuchsianGroup& G = M.group();
    double R = std::tanh(G.circumradius() / 2.0) + 0.01;
    double cell = 2.0 * R / static_cast<double>(grid_n);
    double wsum = 0.0, acc = 0.0;
    for (size_t i = 0; i < grid_n; ++i) {
        for (size_t j = 0; j < grid_n; ++j) {
            double wx = -R + (i + 0.5) * cell;
            double wy = -R + (j + 0.5) * cell;
            double rr = wx * wx + wy * wy;
            if (rr >= R * R) continue;
            HPoint p = disk_to_half_plane({wx, wy});
            if (!G.in_fundamental_domain(p)) continue;
            double weight = 4.0 / ((1.0 - rr) * (1.0 - rr));
            double fs = 0.0;
            for (size_t a = 0; a < angle_n; ++a) {
                double ang = 2.0 * kPi * (a + 0.5) / static_cast<double>(angle_n);
                fs += f.eval({{p.x, p.y}, ang});
            }
            wsum += weight;
            acc += weight * fs / static_cast<double>(angle_n);
        }
    }
    if (wsum == 0.0) throw GeolabError("liouville_average: empty quadrature");
    return acc / wsum;
}

struct MmeRow {
    std::string name;
    std::vector<double> values;  // integral against the T-measure, per grid entry
    std::vector<double> diffs;   // successive differences
    double liouville = 0.0;
    double final_gap = 0.0;      // |last value - liouville|
    double hat_value = 0.0;      // window-measure value at the largest horizon
    double hat_gap = 0.0;        // |hat_value - last value|
};

struct MmeReport {
    std::vector<double> T_grid;
    std::vector<MmeRow> rows;
};

/// Weak* convergence report: integrals of each observable against the
/// closed-orbit measures over the horizon grid, compared to the
/// Liouville average and to the period-window variant.
inline MmeReport mme_diagnostics(const SurfaceModel& M, const std::vector<double>& T_grid,
                                 const std::vector<Observable>& observables,
                                 double hat_window = 0.5, double dt = 0.05,
                                 size_t grid_n = 240, size_t angle_n = 8) {
    if (T_grid.empty()) throw GeolabError("mme_diagnostics: empty horizon grid");
    for (size_t i = 1; i < T_grid.size(); ++i)
        if (T_grid[i] <= T_grid[i - 1])
            throw GeolabError("mme_diagnostics: horizon grid must increase");
    double T_max = T_grid.back();
    auto recs = enumerate_periodic_orbits(M, T_max);
    if (recs.empty()) throw GeolabError("mme_diagnostics: no closed orbits below horizon");
    MmeReport rep;
    rep.T_grid = T_grid;
    // one quadrature pass per orbit and observable, reused across horizons
    std::vector<std::vector<double>> avg(observables.size(),
                                         std::vector<double>(recs.size(), 0.0));
    for (size_t r = 0; r < recs.size(); ++r)
        for (size_t o = 0; o < observables.size(); ++o)
            avg[o][r] = orbit_average(M, recs[r], observables[o], dt);
    for (size_t o = 0; o < observables.size(); ++o) {
        MmeRow row;
        row.name = observables[o].name;
        for (double T : T_grid) {
            double sum = 0.0;
            size_t n = 0;
            for (size_t r = 0; r < recs.size(); ++r) {
                if (recs[r].period <= T + 1e-9) {
                    sum += avg[o][r];
                    ++n;
                }
            }
            if (n == 0) throw GeolabError("mme_diagnostics: empty horizon in grid");
            row.values.push_back(sum / static_cast<double>(n));
        }
        for (size_t i = 1; i < row.values.size(); ++i)
            row.diffs.push_back(row.values[i] - row.values[i - 1]);
        row.liouville = liouville_average(M, observables[o], grid_n, angle_n);
        row.final_gap = std::fabs(row.values.back() - row.liouville);
        double hsum = 0.0;
        size_t hn = 0;
        for (size_t r = 0; r < recs.size(); ++r) {
            if (recs[r].period > T_max - hat_window && recs[r].period <= T_max + 1e-9) {
                hsum += avg[o][r];
                ++hn;
            }
        }
        if (hn == 0) throw GeolabError("mme_diagnostics: empty period window");
        row.hat_value = hsum / static_cast<double>(hn);
        row.hat_gap = std::fabs(row.hat_value - row.values.back());
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

struct RuelleResult {
    double h_surrogate = 0.0;
    double lambda_integral = 0.0;
    bool pass = false;
};

/// Entropy-vs-expansion check: the measure's entropy surrogate must not
/// exceed the weighted forward Lyapunov exponent. A single-orbit measure
/// has surrogate 0; multi-orbit measures need a caller-supplied estimate.
inline RuelleResult ruelle_check(const SurfaceModel& M, const OrbitMeasure& mu,
                                 double h_surrogate = -1.0, double tol = 0.05) {
    if (mu.atoms.empty()) throw GeolabError("ruelle_check: empty measure");
    RuelleResult out;
    for (const auto& [rec, w] : mu.atoms)
        out.lambda_integral += w * rank_classify(M, rec.initial, 8.0).lambda;
    if (mu.atoms.size() == 1) {
        out.h_surrogate = 0.0;
    } else {
        if (h_surrogate < 0.0)
            throw GeolabError("ruelle_check: multi-orbit measure needs an entropy surrogate");
        out.h_surrogate = h_surrogate;
    }
    out.pass = out.h_surrogate <= out.lambda_integral + tol;
    return out;
}

struct ClassEntropyResult {
    std::vector<size_t> counts;
    bool constant = false;
};

/// Spanning counts of a strip cross-section under the time-n sup metric,
/// over a grid of horizons. Strip orbits keep constant mutual distance,
/// so the counts must not grow: the class carries zero entropy.
inline ClassEntropyResult class_entropy_check(const SurfaceModel& M, const UnitTangent& theta,
                                              const std::vector<double>& n_grid, double eps,
                                              const StripScan& scan = {}, double dt = 0.25) {
    if (!(eps > 0.0)) throw GeolabError("class_entropy_check: eps must be positive");
    if (n_grid.empty()) throw GeolabError("class_entropy_check: empty horizon grid");
    Strip strip = detect_strip(M, theta, scan);
    double n_max = *std::max_element(n_grid.begin(), n_grid.end());
    size_t steps = static_cast<size_t>(std::lround(std::floor(n_max / dt + 1e-9)));
    std::vector<std::vector<UnitTangent>> orbits;
    orbits.reserve(strip.members.size());
    for (const auto& [o, m] : strip.members)
        orbits.push_back(detail::reduced_orbit(M, m, steps, dt));
    ClassEntropyResult out;
    for (double n : n_grid) {
        size_t ks = std::min<size_t>(
            steps, static_cast<size_t>(std::lround(std::floor(n / dt + 1e-9))));
        std::vector<size_t> centers;
        for (size_t i = 0; i < orbits.size(); ++i) {
            bool covered = false;
            for (size_t c : centers) {
                bool within = true;
                for (size_t k = 0; k <= ks; ++k) {
                    if (surface_sasaki_distance(M, orbits[i][k], orbits[c][k]) > eps) {
                        within = false;
                        break;
                    }
                }
                if (within) {
                    covered = true;
                    break;
                }
            }
            if (!covered) centers.push_back(i);
        }
        out.counts.push_back(centers.size());
    }
    out.constant = true;
    for (size_t c : out.counts)
        if (c != out.counts.front()) out.constant = false;
    return out;
}

} // namespace geolab
