#include "dsf/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsf/analysis.hpp"
#include "dsf/domination.hpp"
#include "dsf/io.hpp"
#include "dsf/parallel.hpp"
#include "dsf/scaling.hpp"

namespace dsf {

namespace {

using nlohmann::json;

constexpr const char* kArtifactVersion = "1.0.0";
constexpr std::uint64_t kSeedPath = 0x9A78;

json config_to_json(const RunConfig& c) {
    return json{{"subcommand", c.subcommand},
                {"d", c.d},
                {"p", c.p},
                {"seed", c.seed},
                {"replicas", c.replicas},
                {"steps", c.steps},
                {"step_cap", c.step_cap},
                {"level_cap", c.level_cap},
                {"horizon", c.horizon},
                {"separation", c.separation},
                {"j_max", c.j_max},
                {"max_radius", c.max_radius},
                {"extent", c.extent},
                {"window_halfwidth", c.window_halfwidth},
                {"density_ts", c.density_ts},
                {"lyapunov_x1", c.lyapunov_x1},
                {"lyapunov_x2", c.lyapunov_x2},
                {"scale_n", c.scale_n},
                {"t", c.t},
                {"a", c.a},
                {"b", c.b},
                {"epsilons", c.epsilons},
                {"grid", c.grid},
                {"constants_replicas", c.constants_replicas},
                {"constants_j", c.constants_j},
                {"out_dir", c.out_dir}};
}

json constants_to_json(const ScalingConstants& c) {
    return json{{"gamma0", c.gamma0},     {"gamma0_se", c.gamma0_se},
                {"sigma0", c.sigma0},     {"sigma0_se", c.sigma0_se},
                {"p", c.p},               {"d", c.d},
                {"n_increments", c.n_increments}};
}

// Writes summary.json and manifest.json; the manifest checksums every data
// output so re-runs can be compared byte for byte (timestamps live only in
// the manifest itself).
void finalize_outputs(const RunConfig& config, const json& summary,
                      const std::vector<std::string>& data_files) {
    const std::filesystem::path dir(config.out_dir);
    const std::string summary_path = (dir / "summary.json").string();
    {
        std::ofstream out(summary_path, std::ios::binary);
        out << summary.dump(2) << "\n";
    }
    json outputs;
    for (const auto& f : data_files)
        outputs[std::filesystem::path(f).filename().string()] = file_checksum(f);
    outputs["summary.json"] = file_checksum(summary_path);

    json manifest{{"artifact_version", kArtifactVersion},
                  {"created_utc", utc_timestamp()},
                  {"config", config_to_json(config)},
                  {"outputs", outputs}};
    std::ofstream out((dir / "manifest.json").string(), std::ios::binary);
    out << manifest.dump(2) << "\n";
}

FieldParams base_params(const RunConfig& c) { return FieldParams(c.d, c.p, c.seed); }

Vertex origin(int d) {
    Vertex v;
    v.dim = static_cast<std::uint8_t>(d);
    return v;
}

Vertex offset_first(int d, std::int32_t x) {
    Vertex v = origin(d);
    v.c[0] = x;
    return v;
}

int run_path(const RunConfig& c) {
    const FieldParams params = base_params(c);
    std::vector<PathRecord> recs(c.replicas);
    parallel_for(c.replicas, c.workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedPath, std::uint64_t(r));
        recs[r] = iterate_path(pr, origin(c.d), c.steps, c.max_radius);
    });

    std::vector<std::string> header{"replica", "step", "radius"};
    for (int i = 1; i <= c.d; ++i) header.push_back("c" + std::to_string(i));
    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "path.csv").string();
    CsvWriter csv(csv_path, header);
    for (std::int64_t r = 0; r < c.replicas; ++r) {
        const auto& rec = recs[r];
        for (std::size_t k = 0; k < rec.steps.size(); ++k) {
            std::string coords;
            for (int i = 0; i < c.d; ++i)
                coords += (i ? "," : "") + std::to_string(rec.steps[k].c[i]);
            csv.row(r, k, k == 0 ? 0 : rec.step_radii[k - 1], coords);
        }
    }
    csv.close();

    double mean_radius = 0.0;
    std::int64_t n_steps = 0;
    for (const auto& rec : recs)
        for (int rad : rec.step_radii) {
            mean_radius += rad;
            ++n_steps;
        }
    if (n_steps > 0) mean_radius /= double(n_steps);

    finalize_outputs(c,
                     json{{"subcommand", "path"},
                          {"replicas", c.replicas},
                          {"steps", c.steps},
                          {"mean_jump_radius", mean_radius}},
                     {csv_path});
    return kExitOk;
}

int run_regen(const RunConfig& c) {
    const FieldParams params = base_params(c);
    std::vector<RegenerationRun> runs(c.replicas);
    parallel_for(c.replicas, c.workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedRegen, std::uint64_t(r));
        std::vector<Vertex> starts{origin(c.d)};
        if (c.separation > 0) starts.push_back(offset_first(c.d, c.separation));
        runs[r] = run_until_regenerations(pr, starts, c.j_max, c.step_cap, c.max_radius);
    });

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "regen.csv").string();
    CsvWriter csv(csv_path, {"replica", "j", "tau_steps", "T_time", "width"});
    std::int64_t exhausted = 0;
    std::vector<std::int64_t> tau1;
    for (std::int64_t r = 0; r < c.replicas; ++r) {
        for (const auto& rec : runs[r].records)
            csv.row(r, rec.j, rec.tau_steps, rec.T_time, rec.width);
        if (runs[r].budget_exhausted) ++exhausted;
        if (!runs[r].records.empty()) tau1.push_back(runs[r].records[0].tau_steps);
    }
    csv.close();

    json summary{{"subcommand", "regen"},
                 {"replicas", c.replicas},
                 {"separation", c.separation},
                 {"j_max", c.j_max},
                 {"budget_exhausted_replicas", exhausted}};
    if (tau1.size() >= 1000) {
        try {
            const TailFit fit = exp_tail_fit(tau1);
            summary["tau1_exp_fit"] = {{"slope", fit.slope}, {"r2", fit.r2}};
        } catch (const FitUndefinedError&) {
        }
    }
    finalize_outputs(c, summary, {csv_path});
    return exhausted > 0 ? kExitBudget : kExitOk;
}

int run_coalesce(const RunConfig& c) {
    const FieldParams params = base_params(c);
    const auto samples = coalescence_experiment(params, c.separation,
                                                int(c.replicas), c.level_cap, c.workers);

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "coalesce.csv").string();
    CsvWriter csv(csv_path, {"replica", "T_nu", "nu", "censored"});
    std::int64_t censored = 0;
    std::vector<double> values;
    std::vector<bool> flags;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const auto& s = samples[r];
        csv.row(r, s.T_nu, s.nu, s.censored ? 1 : 0);
        censored += s.censored ? 1 : 0;
        values.push_back(double(s.T_nu));
        flags.push_back(s.censored);
    }
    csv.close();

    json summary{{"subcommand", "coalesce"},
                 {"replicas", c.replicas},
                 {"separation", c.separation},
                 {"level_cap", c.level_cap},
                 {"censored_fraction", double(censored) / double(c.replicas)}};
    if (values.size() >= 1000 && c.level_cap >= 10000) {
        try {
            const TailFit fit =
                power_tail_fit(values, flags, 100.0, std::min<double>(10000.0, c.level_cap));
            summary["km_loglog_fit"] = {{"slope", fit.slope}, {"r2", fit.r2}};
        } catch (const FitUndefinedError&) {
        }
    }
    finalize_outputs(c, summary, {csv_path});
    return kExitOk;
}

int run_census(const RunConfig& c) {
    const FieldParams params = base_params(c);
    std::vector<int> extents(c.d - 1, 0);
    extents[0] = c.extent;
    const auto checkpoints = default_census_checkpoints(c.horizon);

    std::vector<ForestCensus> runs(c.replicas);
    parallel_for(c.replicas, c.workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedCensus, std::uint64_t(r));
        runs[r] = forest_census(pr, extents, c.horizon, checkpoints);
    });

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "census.csv").string();
    CsvWriter csv(csv_path, {"replica", "level", "components"});
    std::map<std::int64_t, std::int64_t> final_hist;
    for (std::int64_t r = 0; r < c.replicas; ++r) {
        for (std::size_t i = 0; i < runs[r].checkpoint_levels.size(); ++i)
            csv.row(r, runs[r].checkpoint_levels[i], runs[r].components[i]);
        final_hist[runs[r].components.back()] += 1;
    }
    csv.close();

    std::int64_t ones = final_hist.count(1) ? final_hist[1] : 0;
    json hist;
    for (const auto& [k, v] : final_hist) hist[std::to_string(k)] = v;
    finalize_outputs(c,
                     json{{"subcommand", "census"},
                          {"replicas", c.replicas},
                          {"extent", c.extent},
                          {"horizon", c.horizon},
                          {"final_components_histogram", hist},
                          {"fraction_single_component",
                           double(ones) / double(c.replicas)}},
                     {csv_path});
    return kExitOk;
}

int run_martingale(const RunConfig& c) {
    const FieldParams params = base_params(c);
    const auto incs = martingale_increments(params, c.separation, int(c.j_max),
                                            int(c.replicas), c.workers);

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "martingale.csv").string();
    CsvWriter csv(csv_path, {"replica", "j", "increment"});
    for (std::size_t r = 0; r < incs.size(); ++r)
        for (std::size_t j = 0; j < incs[r].size(); ++j)
            csv.row(r, j + 1, incs[r][j]);
    csv.close();

    json per_j = json::array();
    bool all_within = true;
    for (int j = 1; j <= c.j_max; ++j) {
        std::vector<double> xs;
        for (const auto& v : incs)
            if (int(v.size()) >= j) xs.push_back(v[j - 1]);
        const MeanSE ms = mean_se(xs);
        const bool ok = std::abs(ms.mean) < 3.0 * ms.se;
        all_within = all_within && ok;
        per_j.push_back(json{{"j", j},
                             {"mean", ms.mean},
                             {"se", ms.se},
                             {"n", ms.n},
                             {"within_3se", ok}});
    }
    finalize_outputs(c,
                     json{{"subcommand", "martingale"},
                          {"replicas", c.replicas},
                          {"separation", c.separation},
                          {"per_j", per_j},
                          {"all_within_3se", all_within}},
                     {csv_path});
    return kExitOk;
}

int run_lyapunov(const RunConfig& c) {
    const FieldParams params = base_params(c);
    const auto incs = lyapunov_increments(params, c.lyapunov_x1, c.lyapunov_x2,
                                          int(c.replicas), c.workers);

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "lyapunov.csv").string();
    CsvWriter csv(csv_path, {"replica", "increment"});
    for (std::size_t r = 0; r < incs.size(); ++r) csv.row(r, incs[r]);
    csv.close();

    const MeanSE ms = mean_se(incs);
    finalize_outputs(c,
                     json{{"subcommand", "lyapunov"},
                          {"replicas", c.replicas},
                          {"x1", c.lyapunov_x1},
                          {"x2", c.lyapunov_x2},
                          {"mean", ms.mean},
                          {"se", ms.se},
                          {"upper99", ms.mean + 2.326 * ms.se}},
                     {csv_path});
    return kExitOk;
}

int run_domination(const RunConfig& c) {
    const FieldParams params = base_params(c);
    const int l0 = minimal_l0(c.p);
    std::vector<DominationTrace> traces(c.replicas);
    parallel_for(c.replicas, c.workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedDomination, std::uint64_t(r));
        traces[r] = coupled_domination_run(pr, origin(c.d),
                                           offset_first(c.d, c.separation), c.steps, l0,
                                           c.max_radius);
    });

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "domination.csv").string();
    CsvWriter csv(csv_path, {"replica", "steps", "violations", "tau", "tau_M"});
    std::int64_t violations = 0;
    for (std::int64_t r = 0; r < c.replicas; ++r) {
        const auto& tr = traces[r];
        csv.row(r, c.steps, tr.violations, tr.tau, tr.tau_M);
        violations += tr.violations;
    }
    csv.close();

    finalize_outputs(c,
                     json{{"subcommand", "domination"},
                          {"replicas", c.replicas},
                          {"steps", c.steps},
                          {"l0", l0},
                          {"violations", violations}},
                     {csv_path});
    return kExitOk;
}

int run_scaling(const RunConfig& c) {
    const FieldParams params = base_params(c);
    const auto samples = regeneration_increments(params, int(c.constants_replicas),
                                                 c.constants_j, c.workers);
    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "scaling.csv").string();
    CsvWriter csv(csv_path, {"replica", "j", "dT", "dx"});
    for (const auto& s : samples) csv.row(s.replica, s.j, s.dT, s.dx);
    csv.close();

    const ScalingConstants consts =
        estimate_constants(params, int(c.constants_replicas), c.constants_j, c.workers);
    finalize_outputs(c,
                     json{{"subcommand", "scaling"},
                          {"constants", constants_to_json(consts)}},
                     {csv_path});
    return kExitOk;
}

int run_web_b1(const RunConfig& c) {
    const FieldParams params = base_params(c);
    const B1Result res = b1_diagnostic(params, c.scale_n, c.t, c.epsilons,
                                       int(c.replicas), c.grid, c.workers);

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "web_b1.csv").string();
    CsvWriter csv(csv_path, {"epsilon", "a", "t0", "hits", "replicas", "p_hat"});
    for (const auto& cell : res.cells)
        csv.row(cell.epsilon, cell.a, cell.t0, cell.hits, c.replicas, cell.p_hat);
    csv.close();

    json sups = json::array();
    for (const auto& s : res.sups)
        sups.push_back(json{{"epsilon", s.epsilon},
                            {"p_sup", s.p_sup},
                            {"se", s.se},
                            {"a_at", s.a_at},
                            {"t0_at", s.t0_at}});
    finalize_outputs(c,
                     json{{"subcommand", "web-b1"},
                          {"n", c.scale_n},
                          {"t", c.t},
                          {"grid", c.grid},
                          {"replicas", c.replicas},
                          {"snap", "query times snap to the nearest lattice level"},
                          {"constants", constants_to_json(res.constants)},
                          {"sup_table", sups}},
                     {csv_path});
    return kExitOk;
}

int run_web_e1(const RunConfig& c) {
    const FieldParams params = base_params(c);
    const E1Result res =
        e1_diagnostic(params, c.scale_n, c.t, c.a, c.b, int(c.replicas), c.workers);

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "web_e1.csv").string();
    CsvWriter csv(csv_path, {"replica", "eta_hat"});
    for (std::size_t r = 0; r < res.counts.size(); ++r) csv.row(r, res.counts[r]);
    csv.close();

    finalize_outputs(
        c,
        json{{"subcommand", "web-e1"},
             {"n", c.scale_n},
             {"t", c.t},
             {"a", c.a},
             {"b", c.b},
             {"replicas", c.replicas},
             {"mean_eta_hat", res.mean},
             {"se", res.se},
             {"target", res.target},
             {"relative_deviation", res.target != 0.0 ? (res.mean - res.target) / res.target : 0.0},
             {"snap", "query times snap to the nearest lattice level"},
             {"constants", constants_to_json(res.constants)}},
        {csv_path});
    return kExitOk;
}

int run_density(const RunConfig& c) {
    const FieldParams params = base_params(c);
    std::vector<DensityCurve> curves(c.replicas);
    parallel_for(c.replicas, c.workers, [&](std::int64_t r) {
        FieldParams pr = params;
        pr.seed = derive_seed(params.seed, kSeedDensity, std::uint64_t(r));
        curves[r] = point_density_curve(pr, c.window_halfwidth, c.density_ts);
    });

    const std::string csv_path =
        (std::filesystem::path(c.out_dir) / "density.csv").string();
    CsvWriter csv(csv_path, {"replica", "t", "occupied", "density"});
    for (std::int64_t r = 0; r < c.replicas; ++r)
        for (std::size_t i = 0; i < curves[r].t.size(); ++i)
            csv.row(r, curves[r].t[i], curves[r].occupied[i], curves[r].density[i]);
    csv.close();

    json scaled = json::array();
    for (std::size_t i = 0; i < curves[0].t.size(); ++i) {
        double mean = 0.0;
        for (std::int64_t r = 0; r < c.replicas; ++r) mean += curves[r].density[i];
        mean /= double(c.replicas);
        scaled.push_back(json{{"t", curves[0].t[i]},
                              {"mean_density", mean},
                              {"density_times_sqrt_t",
                               mean * std::sqrt(double(curves[0].t[i]))}});
    }
    finalize_outputs(c,
                     json{{"subcommand", "density"},
                          {"replicas", c.replicas},
                          {"window_halfwidth", c.window_halfwidth},
                          {"curve", scaled}},
                     {csv_path});
    return kExitOk;
}

}  // namespace

int run(const RunConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    if (config.subcommand == "path") return run_path(config);
    if (config.subcommand == "regen") return run_regen(config);
    if (config.subcommand == "coalesce") return run_coalesce(config);
    if (config.subcommand == "census") return run_census(config);
    if (config.subcommand == "martingale") return run_martingale(config);
    if (config.subcommand == "lyapunov") return run_lyapunov(config);
    if (config.subcommand == "domination") return run_domination(config);
    if (config.subcommand == "scaling") return run_scaling(config);
    if (config.subcommand == "web-b1") return run_web_b1(config);
    if (config.subcommand == "web-e1") return run_web_e1(config);
    if (config.subcommand == "density") return run_density(config);
    std::cerr << "unknown subcommand: " << config.subcommand << "\n";
    return kExitUsage;
}

int parse_and_run(int argc, char** argv) {
    CLI::App app{"drainage-network simulator and statistical verifier"};
    app.require_subcommand(1);

    RunConfig c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", c.d, "lattice dimension");
        sub->add_option("--p", c.p, "openness probability in (0,1)");
        sub->add_option("--seed", c.seed, "environment seed");
        sub->add_option("--replicas", c.replicas, "independent replicas");
        sub->add_option("--workers", c.workers, "worker threads (0: auto)");
        sub->add_option("--out", c.out_dir, "output directory");
        sub->add_option("--max-radius", c.max_radius, "successor search cap");
    };

    auto* path = app.add_subcommand("path", "iterate single paths");
    add_common(path);
    path->add_option("--steps", c.steps, "successor steps per path");

    auto* regen = app.add_subcommand("regen", "regeneration records");
    add_common(regen);
    regen->add_option("--sep", c.separation, "pair separation (0: single walker)");
    regen->add_option("--jmax", c.j_max, "regenerations per replica");
    regen->add_option("--step-cap", c.step_cap, "joint step budget");

    auto* coalesce = app.add_subcommand("coalesce", "pair coalescence times");
    add_common(coalesce);
    coalesce->add_option("--sep", c.separation, "start separation");
    coalesce->add_option("--cap", c.level_cap, "censoring level cap");

    auto* census = app.add_subcommand("census", "component census");
    add_common(census);
    census->add_option("--extent", c.extent, "half-extent of the start segment");
    census->add_option("--horizon", c.horizon, "census horizon level");

    auto* mart = app.add_subcommand("martingale", "regeneration increments drift");
    add_common(mart);
    mart->add_option("--sep", c.separation, "pair separation");
    mart->add_option("--jmax", c.j_max, "regenerations per replica");

    auto* lyap = app.add_subcommand("lyapunov", "d=3 Lyapunov drift");
    add_common(lyap);
    lyap->add_option("--x1", c.lyapunov_x1, "first separation coordinate");
    lyap->add_option("--x2", c.lyapunov_x2, "second separation coordinate");

    auto* dom = app.add_subcommand("domination", "history-height coupling check");
    add_common(dom);
    dom->add_option("--sep", c.separation, "pair separation");
    dom->add_option("--steps", c.steps, "joint steps per run");

    auto* scal = app.add_subcommand("scaling", "estimate diffusive constants");
    add_common(scal);
    scal->add_option("--constants-replicas", c.constants_replicas, "replicas");
    scal->add_option("--constants-j", c.constants_j, "regenerations per replica");

    auto* b1 = app.add_subcommand("web-b1", "crossing-count diagnostic");
    add_common(b1);
    b1->add_option("--n", c.scale_n, "diffusive scale");
    b1->add_option("--t", c.t, "time offset");
    b1->add_option("--eps", c.epsilons, "interval widths");
    b1->add_option("--grid", c.grid, "(a,t0) grid per axis");

    auto* e1 = app.add_subcommand("web-e1", "point-count diagnostic");
    add_common(e1);
    e1->add_option("--n", c.scale_n, "diffusive scale");
    e1->add_option("--t", c.t, "time offset");
    e1->add_option("--a", c.a, "interval left end");
    e1->add_option("--b", c.b, "interval right end");

    auto* dens = app.add_subcommand("density", "occupied-point density");
    add_common(dens);
    dens->add_option("--L", c.window_halfwidth, "window half-width");
    dens->add_option("--ts", c.density_ts, "checkpoint levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp"
                   ? kExitOk
                   : kExitUsage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();

    try {
        return run(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace dsf
