// Command-line workbench: runs the library's experiments from flat
// config files and writes CSV/JSON artifacts plus a run manifest.
// Exit codes: 0 ok, 2 config error, 3 budget exhausted, 4 numeric failure.

#include <chrono>
#include <filesystem>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "geolab/ergodic.hpp"
#include "geolab/io.hpp"

using namespace geolab;
using nlohmann::json;

namespace {

struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Ctx {
    Config cfg;
    std::string out_dir = "out";
    uint64_t seed = 1;
    double budget_s = 600.0;
    std::string format = "csv";
    std::string subcommand;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::vector<std::string> outputs;
    bool partial = false;

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    void checkpoint() {
        if (elapsed() > budget_s) throw BudgetExhausted("budget exhausted");
    }
    void save(const std::string& name, const std::string& content) {
        std::filesystem::create_directories(out_dir);
        std::string path = out_dir + "/" + name;
        write_text_file(path, content);
        outputs.push_back(name);
    }
    void save_table(const std::string& stem, const CsvTable& t) {
        if (format == "json") {
            json rows = json::array();
            for (const auto& r : t.rows) {
                json row;
                for (size_t i = 0; i < t.header.size(); ++i) row[t.header[i]] = r[i];
                rows.push_back(row);
            }
            save(stem + ".json", rows.dump(2) + "\n");
        } else {
            save(stem + ".csv", t.serialize());
        }
    }
};

std::mt19937_64 rng_for(const Ctx& ctx, uint64_t stream) {
    return std::mt19937_64(ctx.seed * 1000003ull + stream);
}

UnitTangent random_tangent(const SurfaceModel& M, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    if (M.is_constant()) {
        std::uniform_real_distribution<double> ux(-1.0, 1.0);
        std::uniform_real_distribution<double> uy(0.5, 2.0);
        return reduce_tangent(M, {{ux(rng), uy(rng)}, ua(rng)});
    }
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    return {{ur(rng), ua(rng)}, ua(rng)};
}

std::string render_word(const GroupWord& w) {
    std::string s = word_to_string(w);
    return s.empty() ? "-" : s;
}

void run_flow(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    UnitTangent theta{{ctx.cfg.get_double("flow.u", 0.0),
                       ctx.cfg.get_double("flow.v", M.is_constant() ? 1.0 : 0.0)},
                      ctx.cfg.get_double("flow.angle", kPi / 2.0)};
    double t0 = ctx.cfg.get_double("flow.t0", 0.0);
    double t1 = ctx.cfg.get_double("flow.t1", 10.0);
    double dt = ctx.cfg.get_double("flow.dt", 0.1);
    Trajectory traj = sample_trajectory(M, theta, t0, t1, dt, 1e-10);
    CsvTable t;
    t.header = {"t", "u", "v", "angle"};
    for (const auto& s : traj.samples) {
        UnitTangent red = reduce_tangent(M, s.theta);
        t.add_row({render_double(s.t), render_double(red.base.u), render_double(red.base.v),
                   render_double(red.angle)});
    }
    ctx.save_table("flow", t);
}

void run_jacobi(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    long n = ctx.cfg.get_int("jacobi.samples", 20);
    double T = ctx.cfg.get_double("jacobi.T", 8.0);
    auto rng = rng_for(ctx, 2);
    CsvTable t;
    t.header = {"u", "v", "angle", "lambda", "rank", "max_abs_curvature"};
    for (long i = 0; i < n; ++i) {
        ctx.checkpoint();
        UnitTangent theta = random_tangent(M, rng);
        auto rc = rank_classify(M, theta, T);
        t.add_row({render_double(theta.base.u), render_double(theta.base.v),
                   render_double(theta.angle), render_double(rc.lambda),
                   rc.label == RankLabel::RankOne ? "rank_one" : "higher",
                   render_double(rc.max_abs_curvature)});
    }
    ctx.save_table("jacobi", t);
}

void run_busemann(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    if (!M.is_constant())
        throw GeolabError("config: busemann subcommand needs model.kind = constant");
    double T = ctx.cfg.get_double("busemann.T", 25.0);
    std::vector<double> ys = ctx.cfg.get_list("busemann.y_grid", {0.5, 1.0, 2.0, 4.0});
    UnitTangent up{{0.0, 1.0}, kPi / 2.0};
    CsvTable t;
    t.header = {"y", "T", "value", "closed_form", "abs_err", "error_bound"};
    for (double y : ys) {
        BusemannValue b = busemann(M, up, {0.0, y}, T);
        double cf = -std::log(y);
        t.add_row({render_double(y), render_double(T), render_double(b.value),
                   render_double(cf), render_double(std::fabs(b.value - cf)),
                   render_double(b.error_bound)});
    }
    ctx.save_table("busemann", t);
}

StripScan scan_from_config(const Config& cfg) {
    StripScan scan;
    scan.step = cfg.get_double("strips.step", 1e-3);
    scan.range = cfg.get_double("strips.range", 1.5);
    scan.T = cfg.get_double("strips.T", 16.0);
    scan.C = cfg.get_double("strips.C", 1.0);
    return scan;
}

void run_strips(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    long n = ctx.cfg.get_int("strips.samples", 50);
    StripScan scan = scan_from_config(ctx.cfg);
    auto rng = rng_for(ctx, 3);
    CsvTable t;
    t.header = {"u", "v", "angle", "width", "lo", "hi", "uncertainty", "trivial"};
    for (long i = 0; i < n; ++i) {
        ctx.checkpoint();
        UnitTangent theta = random_tangent(M, rng);
        Strip s = detect_strip(M, theta, scan);
        t.add_row({render_double(theta.base.u), render_double(theta.base.v),
                   render_double(theta.angle), render_double(s.width), render_double(s.lo),
                   render_double(s.hi), render_double(s.uncertainty),
                   s.trivial(scan.step) ? "1" : "0"});
    }
    ctx.save_table("strips", t);
}

void run_quotient(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    long n = ctx.cfg.get_int("quotient.samples", 30);
    double tflow = ctx.cfg.get_double("quotient.t", 1.3);
    double eps = ctx.cfg.get_double("quotient.eps", 0.2);
    double T = ctx.cfg.get_double("quotient.T", 8.0);
    StripScan scan = scan_from_config(ctx.cfg);
    scan.step = ctx.cfg.get_double("quotient.step", 0.01);
    auto rng = rng_for(ctx, 4);
    std::vector<UnitTangent> samples;
    CsvTable t;
    t.header = {"u", "v", "angle", "semiconjugate"};
    size_t ok = 0;
    for (long i = 0; i < n; ++i) {
        ctx.checkpoint();
        UnitTangent theta = random_tangent(M, rng);
        samples.push_back(theta);
        QuotientClass lhs = make_quotient_class(M, geodesic_flow(M, theta, tflow, 1e-10), scan);
        QuotientClass rhs = quotient_flow(M, make_quotient_class(M, theta, scan), tflow, scan);
        bool same = quotient_distance(M, lhs, rhs) < 2.0 * scan.step;
        if (same) ++ok;
        t.add_row({render_double(theta.base.u), render_double(theta.base.v),
                   render_double(theta.angle), same ? "1" : "0"});
    }
    ctx.save_table("quotient_semiconjugacy", t);
    ctx.checkpoint();
    auto orig = expansivity_probe(M, samples, false, eps, T, scan);
    auto quot = expansivity_probe(M, samples, true, eps, T, scan);
    json rep;
    rep["samples"] = n;
    rep["semiconjugate"] = ok;
    rep["expansivity_eps"] = eps;
    rep["violators_original"] = orig.violators.size();
    rep["violators_quotient"] = quot.violators.size();
    rep["partial"] = orig.partial || quot.partial;
    ctx.save("quotient_report.json", rep.dump(2) + "\n");
}

void run_shadow(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    if (!M.is_constant())
        throw GeolabError("config: shadow subcommand needs model.kind = constant");
    long skeletons = ctx.cfg.get_int("shadow.skeletons", 10);
    std::vector<double> deltas = ctx.cfg.get_list("shadow.deltas", {0.08, 0.04, 0.02});
    auto rng = rng_for(ctx, 5);
    CsvTable t;
    t.header = {"skeleton", "delta", "eps_achieved", "reparam_dev"};
    std::uniform_int_distribution<int> coin(0, 1);
    for (long k = 0; k < skeletons; ++k) {
        ctx.checkpoint();
        UnitTangent theta = random_tangent(M, rng);
        std::vector<double> durations{1.0, 1.25, 1.0, 1.5};
        std::vector<double> signs;
        for (size_t j = 0; j + 1 < durations.size(); ++j)
            signs.push_back(coin(rng) ? 1.0 : -1.0);
        for (double delta : deltas) {
            std::vector<std::pair<UnitTangent, double>> segs;
            UnitTangent cur = theta;
            for (size_t j = 0; j < durations.size(); ++j) {
                segs.push_back({cur, durations[j]});
                if (j + 1 < durations.size()) {
                    UnitTangent end = geodesic_flow(M, cur, durations[j], 1e-11);
                    end.angle = wrap_angle_2pi(end.angle + signs[j] * delta);
                    cur = reduce_tangent(M, end);
                }
            }
            PseudoOrbit po = make_pseudo_orbit(M, segs, delta + 1e-9);
            ShadowingResult res = shadow_search(M, po);
            t.add_row({std::to_string(k), render_double(delta),
                       render_double(res.eps_achieved), render_double(res.reparam_dev)});
        }
    }
    ctx.save_table("shadow", t);
}

void run_periodic(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    double T = ctx.cfg.get_double("periodic.T", 8.0);
    std::vector<double> grid = ctx.cfg.get_list("periodic.T_grid", {4.0, 5.0, 6.0, 7.0, 8.0});
    auto recs = enumerate_periodic_orbits(M, T);
    CsvTable t;
    t.header = {"word", "period"};
    for (const auto& r : recs) t.add_row({render_word(r.word), render_double(r.period)});
    ctx.save_table("periodic", t);
    ctx.checkpoint();
    json rep;
    rep["count"] = recs.size();
    rep["T"] = T;
    rep["slope"] = growth_rate_per(recs, grid, T);
    rep["slope_corrected"] = growth_rate_per_corrected(recs, grid, T);
    ctx.save("periodic_report.json", rep.dump(2) + "\n");
}

void run_entropy(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    if (!M.is_constant())
        throw GeolabError("config: entropy subcommand needs model.kind = constant");
    std::vector<double> T_grid = ctx.cfg.get_list("entropy.T_grid", {2.0, 4.0, 6.0});
    std::vector<double> eps_list = ctx.cfg.get_list("entropy.eps_list", {0.1});
    double arc = ctx.cfg.get_double("entropy.arc", 0.1);
    long n = ctx.cfg.get_int("entropy.samples", 600);
    auto rng = rng_for(ctx, 6);
    UnitTangent theta = random_tangent(M, rng);
    auto rev = horocycle_sample(M, reverse_tangent(theta), arc, static_cast<size_t>(n));
    std::vector<UnitTangent> samples;
    for (const auto& s : rev) samples.push_back(reduce_tangent(M, reverse_tangent(s)));
    std::vector<SeparationCount> counts;
    CsvTable t;
    t.header = {"T", "eps", "count", "lower_bound_only"};
    for (double eps : eps_list) {
        for (double T : T_grid) {
            ctx.checkpoint();
            SeparationCount c = count_separated(M, samples, T, eps);
            counts.push_back(c);
            t.add_row({render_double(T), render_double(eps), std::to_string(c.count),
                       c.lower_bound_only ? "1" : "0"});
        }
    }
    ctx.save_table("entropy_counts", t);
    EntropyEstimate est = entropy_estimate(counts, 0.5);
    json rep;
    rep["h_lower_bound"] = est.h;
    rep["h_eps"] = est.h_eps;
    rep["degraded_fit"] = est.degraded_fit;
    json per = json::array();
    for (const auto& p : est.per_eps)
        per.push_back({{"eps", p.eps}, {"slope", p.slope}, {"residual", p.residual}});
    rep["per_eps"] = per;
    ctx.save("entropy_report.json", rep.dump(2) + "\n");
}

void run_mme(Ctx& ctx) {
    SurfaceModel M = model_from_config(ctx.cfg);
    if (!M.is_constant())
        throw GeolabError("config: mme subcommand needs model.kind = constant");
    std::vector<double> T_grid = ctx.cfg.get_list("mme.T_grid", {4.0, 6.0, 8.0});
    double window = ctx.cfg.get_double("mme.window", 0.5);
    std::vector<Observable> obs{observable_one(), observable_ball(M, {0.0, 1.0}, 0.8),
                                observable_disk_radius(M)};
    MmeReport rep = mme_diagnostics(M, T_grid, obs, window);
    CsvTable t;
    t.header = {"T", "observable", "value", "successive_difference"};
    for (const auto& row : rep.rows) {
        for (size_t i = 0; i < row.values.size(); ++i) {
            t.add_row({render_double(T_grid[i]), row.name, render_double(row.values[i]),
                       i == 0 ? "" : render_double(row.diffs[i - 1])});
        }
    }
    ctx.save_table("mme_convergence", t);
    json jr;
    for (const auto& row : rep.rows) {
        jr[row.name] = {{"liouville", row.liouville},
                        {"final_gap", row.final_gap},
                        {"hat_value", row.hat_value},
                        {"hat_gap", row.hat_gap}};
    }
    ctx.save("mme_report.json", jr.dump(2) + "\n");
}

void run_checks(Ctx& ctx) {
    std::vector<std::pair<std::string, bool>> results;
    auto add = [&](const std::string& name, bool ok) { results.push_back({name, ok}); };

    SurfaceModel M = make_constant_negative();
    SurfaceModel C = build_collar(1.0, 0.5, 0.5);

    JacobiState j = jacobi_evolve(M, {{0.0, 1.0}, kPi / 2.0}, 1.0, {0.0, 1.0}, 1e-10);
    add("jacobi_propagator", std::fabs(j.J - std::sinh(1.0)) < 1e-8 &&
                                 std::fabs(j.Jp - std::cosh(1.0)) < 1e-8);
    add("lyapunov_anchor",
        std::fabs(lyapunov_exponent(M, {{0.3, 1.2}, 0.8}, 20.0) - 1.0) < 1e-3);
    BusemannValue b = busemann(M, {{0.0, 1.0}, kPi / 2.0}, {0.0, 2.0}, 25.0);
    add("busemann_closed_form", std::fabs(b.value + std::log(2.0)) < 1e-6);
    StripScan scan;
    scan.step = 0.01;
    Strip s = detect_strip(C, {{0.0, 0.2}, kPi / 2.0}, scan);
    add("collar_strip_width", std::fabs(s.width - 0.5) < scan.step + 1e-9);
    auto ce = class_entropy_check(C, {{0.0, 0.2}, kPi / 2.0}, {1.0, 5.0, 10.0}, 0.05, scan);
    add("class_entropy_constant", ce.constant);
    auto recs = enumerate_periodic_orbits(M, 4.0);
    OrbitMeasure single;
    single.atoms.push_back({recs[0], 1.0});
    add("ruelle_single_orbit", ruelle_check(M, single).pass);

    CsvTable t;
    t.header = {"check", "pass"};
    bool all = true;
    for (const auto& [name, ok] : results) {
        t.add_row({name, ok ? "1" : "0"});
        all = all && ok;
    }
    ctx.save_table("checks", t);
    if (!all) throw GeolabError("checks: at least one invariant check failed");
}

void write_manifest(Ctx& ctx) {
    json m;
    m["subcommand"] = ctx.subcommand;
    m["config_hash"] = config_hash(ctx.cfg);
    m["seed"] = ctx.seed;
    m["format"] = ctx.format;
    m["code_version"] = "1.0.0";
    m["wall_time_s"] = ctx.elapsed();
    m["outputs"] = ctx.outputs;
    m["partial"] = ctx.partial;
    std::filesystem::create_directories(ctx.out_dir);
    write_text_file(ctx.out_dir + "/manifest.json", m.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic flow workbench"};
    app.require_subcommand(1);
    Ctx ctx;
    std::string config_path;
    app.add_option("--config", config_path, "config file (flat dotted keys)");
    app.add_option("--out", ctx.out_dir, "output directory");
    app.add_option("--seed", ctx.seed, "random seed");
    app.add_option("--budget", ctx.budget_s, "wall-clock budget in seconds");
    app.add_option("--format", ctx.format, "table format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    std::map<std::string, void (*)(Ctx&)> cmds{
        {"flow", run_flow},         {"jacobi", run_jacobi},   {"busemann", run_busemann},
        {"strips", run_strips},     {"quotient", run_quotient}, {"shadow", run_shadow},
        {"periodic", run_periodic}, {"entropy", run_entropy}, {"mme", run_mme},
        {"checks", run_checks}};
    for (auto& [name, fn] : cmds) app.add_subcommand(name)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    ctx.subcommand = app.get_subcommands().front()->get_name();
    try {
        if (!config_path.empty()) ctx.cfg = parse_config_file(config_path);
        cmds.at(ctx.subcommand)(ctx);
        write_manifest(ctx);
        return 0;
    } catch (const BudgetExhausted&) {
        ctx.partial = true;
        write_manifest(ctx);
        std::fprintf(stderr, "budget exhausted; partial artifacts flagged in manifest\n");
        return 3;
    } catch (const GeolabError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        bool config_issue = std::string(e.what()).rfind("config", 0) == 0;
        return config_issue ? 2 : 4;
    }
}
