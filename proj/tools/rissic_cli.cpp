// rissic: command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 domain or validation error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rissic/rissic.hpp"

namespace fs = std::filesystem;
using namespace rissic;

namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

struct Options {
    std::string scene_path;
    std::uint64_t seed = 1;
    std::size_t buffer = GreedyParams{}.buffer_size;
    std::size_t stall = GreedyParams{}.stall_limit;
    std::size_t runs = 100;
    std::size_t horizon = 5000;
    std::size_t iterations = 0;
    std::size_t threads = 0;
    std::vector<double> bandwidths;
    std::size_t points = 0;
    double span_hz = 200e6;
    std::string config_path;
    std::string algorithm = "greedy";
    std::string out;
};

// Failure that is reported with its own prefix and exit status 2.
struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SceneParams load_scene(const Options& o) {
    if (!fs::exists(o.scene_path)) throw CliError("scene file not found: " + o.scene_path);
    try {
        return parse_scene(o.scene_path);
    } catch (const ParseError& e) {
        throw CliError(std::string("invalid scene: ") + e.what());
    }
}

// --bandwidth / --points override the scene's own grid when given.
SceneParams load_scene_with_grid(const Options& o) {
    SceneParams p = load_scene(o);
    if (o.bandwidths.size() > 1) throw CLI::ValidationError("--bandwidth", "given more than once");
    if (!o.bandwidths.empty()) {
        p.grid.bandwidth_hz = o.bandwidths.front();
        if (p.grid.bandwidth_hz == 0.0) p.grid.points = 1;
        else if (o.points == 0 && p.grid.points < 2) p.grid.points = 11;
    }
    if (o.points != 0 && p.grid.bandwidth_hz > 0.0) p.grid.points = o.points;
    // Re-validate through the schema so overrides get the same checks as files.
    return scene_params_from_json(to_json(p));
}

std::string scene_line(const SceneParams& p) { return to_json(p).dump(); }

fs::path companion(const std::string& out, const std::string& suffix) {
    fs::path p(out);
    p.replace_extension(suffix);
    return p;
}

void print_result(const std::string& label, const ConvergenceTrace& t) {
    std::printf("%s: best SI %s dB after %zu evaluations\n", label.c_str(),
                format_real(t.best_reading.magnitude_db()).c_str(), t.iterations_total);
}

int cmd_validate(const Options& o) {
    const SceneParams p = load_scene(o);
    const Scene scene = build_scene(p);
    std::printf("%s: ok\n", o.scene_path.c_str());
    std::printf("  surface %zu x %zu (N = %zu), pitch %s m\n", p.geometry.nx, p.geometry.ny, scene.element_count(),
                format_real(p.pitch_m()).c_str());
    std::printf("  grid %zu point(s), center %s Hz, bandwidth %s Hz\n", scene.grid().size(),
                format_real(p.grid.center_hz).c_str(), format_real(p.grid.bandwidth_hz).c_str());
    std::printf("  leakage at center %s dB\n",
                format_real(20.0 * std::log10(std::abs(scene.direct(scene.grid().center_index())))).c_str());
    std::printf("  scene hash %s\n", content_hash(to_json(p)).c_str());
    return 0;
}

int write_run(const Options& o, const SceneParams& p, const ConvergenceTrace& t, Meta params) {
    Json spec{{"scene", to_json(p)}, {"algorithm", t.algorithm}};
    for (const auto& [k, v] : params) spec[k] = v;
    params.emplace_back("scene", scene_line(p));
    const TraceFile f = make_trace_file(t, content_hash(spec), o.seed, std::move(params), utc_timestamp());
    write_trace(f, o.out);
    write_config(t.best_config, companion(o.out, ".config.txt"));
    return 0;
}

int cmd_optimize(const Options& o) {
    const SceneParams p = load_scene_with_grid(o);
    SimulatedBackend backend(build_scene(p));
    Rng rng(o.seed);
    const auto trace = greedy_optimize(backend, GreedyParams{o.buffer, o.stall}, rng);
    print_result("greedy", trace);
    return write_run(o, p, trace, {{"buffer_size", std::to_string(o.buffer)}, {"stall_limit", std::to_string(o.stall)}});
}

int cmd_random(const Options& o) {
    const SceneParams p = load_scene_with_grid(o);
    SimulatedBackend backend(build_scene(p));
    Rng rng(o.seed);
    const std::size_t iters = o.iterations ? o.iterations : o.horizon;
    const auto trace = random_search(backend, iters, rng);
    print_result("random", trace);
    return write_run(o, p, trace, {{"iterations", std::to_string(iters)}});
}

int cmd_oracle(const Options& o) {
    const SceneParams p = load_scene_with_grid(o);
    SimulatedBackend backend(build_scene(p));
    const auto r = exhaustive_search(backend);
    std::printf("exhaustive: best SI %s dB over %llu configurations\n",
                format_real(r.best_reading.magnitude_db()).c_str(), static_cast<unsigned long long>(r.evaluations));
    if (!o.out.empty()) {
        const std::string body = metadata_lines({{"scene_hash", content_hash(to_json(p))},
                                                 {"best_si_db", format_real(r.best_reading.magnitude_db())},
                                                 {"scene", scene_line(p)}}) +
                                 format_config(r.best_config);
        write_file_atomic(o.out, body);
    }
    return 0;
}

CampaignSpec campaign_spec(const Options& o, const SceneParams& p) {
    CampaignSpec s;
    s.scene = p;
    s.algorithm = algorithm_from_string(o.algorithm);
    s.greedy = GreedyParams{o.buffer, o.stall};
    s.random_iterations = o.iterations;
    s.runs = o.runs;
    s.horizon = o.horizon;
    s.master_seed = o.seed;
    s.threads = o.threads;
    return s;
}

Meta campaign_meta(const CampaignSpec& s) {
    return {{"spec_hash", spec_hash(s)}, {"master_seed", std::to_string(s.master_seed)},
            {"algorithm", to_string(s.algorithm)}, {"runs", std::to_string(s.runs)},
            {"spec", to_json(s).dump()}};
}

int cmd_campaign(const Options& o) {
    const CampaignSpec spec = campaign_spec(o, load_scene_with_grid(o));
    const auto result = run_campaign(spec);
    std::printf("%s campaign, %zu runs: median %s dB (q25 %s, q75 %s)\n", to_string(spec.algorithm).c_str(),
                spec.runs, format_real(result.final_si.median).c_str(), format_real(result.final_si.q25).c_str(),
                format_real(result.final_si.q75).c_str());
    write_file_atomic(o.out, format_campaign(summarize_campaign(result)));
    write_file_atomic(companion(o.out, ".curve.csv"), format_curve(result.mean_curve, campaign_meta(spec)));
    return 0;
}

int cmd_sweep(const Options& o) {
    if (o.bandwidths.empty()) throw CLI::ValidationError("--bandwidth", "at least one value is required");
    const CampaignSpec base = campaign_spec(o, load_scene(o));
    const auto rows = bandwidth_sweep(base, o.bandwidths, o.points ? o.points : 11);
    for (const auto& r : rows) {
        std::printf("bandwidth %s Hz (K = %zu): median %s dB\n", format_real(r.bandwidth_hz).c_str(), r.points,
                    format_real(r.converged_si.median).c_str());
    }
    Meta meta = campaign_meta(base);
    meta.insert(meta.begin() + 2, {"points", std::to_string(o.points ? o.points : 11)});
    write_file_atomic(o.out, format_sweep(rows, meta));
    return 0;
}

int cmd_snapshot(const Options& o) {
    const SceneParams p = load_scene(o);
    const Scene scene = build_scene(p);
    if (!fs::exists(o.config_path)) throw CliError("config file not found: " + o.config_path);
    const RisConfig config = read_config(o.config_path);
    if (config.dims() != scene.dims()) {
        throw CliError("config is " + std::to_string(config.dims().nx) + " x " + std::to_string(config.dims().ny) +
                       " but the scene surface is " + std::to_string(scene.dims().nx) + " x " +
                       std::to_string(scene.dims().ny));
    }
    const std::size_t points = o.points ? o.points : 401;
    const auto snap = transfer_snapshot(scene, config, o.span_hz, points);
    write_file_atomic(o.out, format_snapshot(snap, {{"scene_hash", content_hash(to_json(p))},
                                                    {"config", o.config_path},
                                                    {"span_hz", format_real(o.span_hz)},
                                                    {"scene", scene_line(p)}}));
    std::printf("snapshot: %zu points written to %s\n", snap.size(), o.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted self-interference cancellation: simulation and optimization"};
    app.require_subcommand(1);
    Options o;

    auto scene_opt = [&](CLI::App* c) {
        c->add_option("--scene", o.scene_path, "Scene file (JSON)")->required();
    };
    auto grid_opts = [&](CLI::App* c) {
        c->add_option("--bandwidth", o.bandwidths, "Override grid bandwidth in Hz (0: narrowband)");
        c->add_option("--points", o.points, "Override number of grid points")->check(CLI::PositiveNumber);
    };
    auto greedy_opts = [&](CLI::App* c) {
        c->add_option("--buffer", o.buffer, "Buffer size B")->capture_default_str();
        c->add_option("--stall", o.stall, "Stall limit t_e")->capture_default_str();
    };
    auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed")->capture_default_str(); };
    auto out_opt = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--out", o.out, "Output path");
        if (required) opt->required();
    };

    auto* validate = app.add_subcommand("validate", "Schema-check a scene file");
    scene_opt(validate);

    auto* optimize = app.add_subcommand("optimize", "One greedy run; writes a trace and a .config.txt grid");
    scene_opt(optimize);
    seed_opt(optimize);
    greedy_opts(optimize);
    grid_opts(optimize);
    out_opt(optimize, true);

    auto* random = app.add_subcommand("random", "Random-search baseline run");
    scene_opt(random);
    seed_opt(random);
    grid_opts(random);
    random->add_option("--iterations", o.iterations, "Evaluation budget (default: --horizon)");
    random->add_option("--horizon", o.horizon, "Evaluation budget when --iterations is absent")->capture_default_str();
    out_opt(random, true);

    auto* oracle = app.add_subcommand("oracle", "Exhaustive search (N <= 20 only)");
    scene_opt(oracle);
    grid_opts(oracle);
    out_opt(oracle, false);

    auto* campaign = app.add_subcommand("campaign", "Multi-run campaign; writes JSON summary and .curve.csv");
    scene_opt(campaign);
    seed_opt(campaign);
    greedy_opts(campaign);
    grid_opts(campaign);
    campaign->add_option("--algorithm", o.algorithm, "greedy or random")
        ->check(CLI::IsMember({"greedy", "random"}))
        ->capture_default_str();
    campaign->add_option("--runs", o.runs, "Independent runs")->capture_default_str();
    campaign->add_option("--horizon", o.horizon, "Reporting horizon in iterations")->capture_default_str();
    campaign->add_option("--iterations", o.iterations, "Random-search budget (default: --horizon)");
    campaign->add_option("--threads", o.threads, "Worker threads (0: all cores; results do not depend on it)");
    out_opt(campaign, true);

    auto* sweep = app.add_subcommand("sweep", "Bandwidth sweep table");
    scene_opt(sweep);
    seed_opt(sweep);
    greedy_opts(sweep);
    sweep->add_option("--bandwidth", o.bandwidths, "Bandwidth in Hz; repeat for each row (0: narrowband)")->required();
    sweep->add_option("--points", o.points, "Grid points per wideband row (default 11)")->check(CLI::PositiveNumber);
    sweep->add_option("--algorithm", o.algorithm, "greedy or random")
        ->check(CLI::IsMember({"greedy", "random"}))
        ->capture_default_str();
    sweep->add_option("--runs", o.runs, "Runs per bandwidth")->capture_default_str();
    sweep->add_option("--horizon", o.horizon, "Reporting horizon in iterations")->capture_default_str();
    sweep->add_option("--iterations", o.iterations, "Random-search budget (default: --horizon)");
    sweep->add_option("--threads", o.threads, "Worker threads");
    out_opt(sweep, true);

    auto* snapshot = app.add_subcommand("snapshot", "Dense frequency response of a saved config");
    scene_opt(snapshot);
    snapshot->add_option("--config", o.config_path, "Config grid file")->required();
    snapshot->add_option("--span", o.span_hz, "Frequency span in Hz")->capture_default_str();
    snapshot->add_option("--points", o.points, "Number of points (default 401)")->check(CLI::PositiveNumber);
    out_opt(snapshot, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*optimize) return cmd_optimize(o);
        if (*random) return cmd_random(o);
        if (*oracle) return cmd_oracle(o);
        if (*campaign) return cmd_campaign(o);
        if (*sweep) return cmd_sweep(o);
        if (*snapshot) return cmd_snapshot(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
