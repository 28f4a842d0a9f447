#pragma once

// Multi-run campaigns, averaged convergence curves, bandwidth sweeps and
// dense transfer-function snapshots.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rissic/backend.hpp"
#include "rissic/optimizer.hpp"
#include "rissic/rng.hpp"
#include "rissic/scene.hpp"
#include "rissic/serialize.hpp"

namespace rissic {

enum class Algorithm { greedy, random };

inline std::string to_string(Algorithm a) { return a == Algorithm::greedy ? "greedy" : "random"; }

inline Algorithm algorithm_from_string(const std::string& s) {
    if (s == "greedy") return Algorithm::greedy;
    if (s == "random") return Algorithm::random;
    throw ParseError("algorithm", "expected 'greedy' or 'random', got '" + s + "'");
}

struct CampaignSpec {
    SceneParams scene;
    Algorithm algorithm = Algorithm::greedy;
    GreedyParams greedy;
    std::size_t random_iterations = 0;  // 0: use the horizon
    std::size_t runs = 100;
    std::size_t horizon = 5000;
    std::uint64_t master_seed = 1;
    std::size_t threads = 0;  // 0: hardware concurrency; never affects results

    std::size_t random_budget() const { return random_iterations ? random_iterations : horizon; }

    void validate() const {
        if (runs < 1) throw DomainError("campaign: run count must be at least 1");
        if (horizon < 1) throw DomainError("campaign: reporting horizon must be at least 1");
        if (scene.grid.bandwidth_hz > 0.0 && scene.grid.points < 2) {
            throw DomainError("campaign: bandwidth variant requires at least 2 grid points");
        }
        if (algorithm == Algorithm::greedy) greedy.validate();
    }
};

inline Json to_json(const CampaignSpec& s) {
    return Json{
        {"scene", to_json(s.scene)},
        {"algorithm", to_string(s.algorithm)},
        {"buffer_size", s.greedy.buffer_size},
        {"stall_limit", s.greedy.stall_limit},
        {"random_iterations", s.random_iterations},
        {"runs", s.runs},
        {"horizon", s.horizon},
        {"master_seed", s.master_seed},
    };
}

inline CampaignSpec campaign_spec_from_json(const Json& j) {
    detail::ObjectReader r(j, "spec");
    CampaignSpec s;
    s.scene = scene_params_from_json(r.required("scene"));
    s.algorithm = algorithm_from_string(r.string("algorithm"));
    s.greedy.buffer_size = r.unsigned_integer("buffer_size");
    s.greedy.stall_limit = r.unsigned_integer("stall_limit");
    s.random_iterations = r.unsigned_integer("random_iterations");
    s.runs = r.unsigned_integer("runs");
    s.horizon = r.unsigned_integer("horizon");
    s.master_seed = r.unsigned_integer("master_seed");
    r.reject_unknown();
    return s;
}

/// Hash of everything that determines a campaign's results.
inline std::string spec_hash(const CampaignSpec& s) { return content_hash(to_json(s)); }

struct SummaryStats {
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;

    friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

/// Linear-interpolation quantile of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw StateError("quantile: empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline SummaryStats summarize(std::vector<double> values) {
    if (values.empty()) throw StateError("summarize: empty sample");
    std::sort(values.begin(), values.end());
    SummaryStats s;
    s.median = quantile_sorted(values, 0.5);
    s.q25 = quantile_sorted(values, 0.25);
    s.q75 = quantile_sorted(values, 0.75);
    s.min = values.front();
    s.max = values.back();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    return s;
}

/// Cumulative-best curve of `trace` on [0, horizon): truncated if longer,
/// padded with its final value if shorter.
inline std::vector<double> curve_on_horizon(const ConvergenceTrace& trace, std::size_t horizon) {
    std::vector<double> out(horizon);
    const auto& recs = trace.records;
    for (std::size_t t = 0; t < horizon; ++t) {
        out[t] = recs[std::min(t, recs.size() - 1)].cumulative_best_si_db;
    }
    return out;
}

/// Iteration-wise mean over runs, summed in run order.
inline std::vector<double> mean_curve(const std::vector<ConvergenceTrace>& traces, std::size_t horizon) {
    std::vector<double> sum(horizon, 0.0);
    for (const auto& trace : traces) {
        const auto curve = curve_on_horizon(trace, horizon);
        for (std::size_t t = 0; t < horizon; ++t) sum[t] += curve[t];
    }
    for (double& v : sum) v /= static_cast<double>(traces.size());
    return sum;
}

struct CampaignRun {
    std::uint64_t seed = 0;
    ConvergenceTrace trace;
};

struct CampaignResult {
    CampaignSpec spec;
    std::string spec_hash;
    std::vector<CampaignRun> runs;
    std::vector<double> mean_curve;  // length == spec.horizon
    SummaryStats final_si;           // over each run's final best SI
    std::string started_utc;
    std::string finished_utc;

    std::vector<double> final_values() const {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& r : runs) v.push_back(r.trace.best_reading.magnitude_db());
        return v;
    }
};

struct CampaignError : std::runtime_error {
    CampaignError(std::size_t run, std::uint64_t seed, const std::string& what)
        : std::runtime_error("campaign run " + std::to_string(run) + " (seed " + std::to_string(seed) +
                             ") failed: " + what),
          run(run), seed(seed) {}
    std::size_t run;
    std::uint64_t seed;
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline ConvergenceTrace run_single(const CampaignSpec& spec, std::shared_ptr<const Scene> scene, std::uint64_t seed) {
    SimulatedBackend backend(std::move(scene));
    Rng rng(seed);
    if (spec.algorithm == Algorithm::greedy) return greedy_optimize(backend, spec.greedy, rng);
    return random_search(backend, spec.random_budget(), rng);
}

/// R independent runs on one frozen scene. Run r uses
/// derive_stream_seed(master_seed, r); runs may execute in parallel but the
/// result is assembled in run order and does not depend on scheduling.
inline CampaignResult run_campaign(const CampaignSpec& spec, std::shared_ptr<const Scene> scene) {
    spec.validate();
    CampaignResult result;
    result.spec = spec;
    result.spec_hash = spec_hash(spec);
    result.started_utc = utc_timestamp();

    const std::size_t runs = spec.runs;
    std::vector<std::optional<ConvergenceTrace>> traces(runs);
    std::vector<std::exception_ptr> errors(runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < runs; r = next++) {
            try {
                traces[r] = run_single(spec, scene, derive_stream_seed(spec.master_seed, r));
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    std::size_t n_threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, runs);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }
    for (std::size_t r = 0; r < runs; ++r) {
        if (!errors[r]) continue;
        try {
            std::rethrow_exception(errors[r]);
        } catch (const std::exception& e) {
            throw CampaignError(r, derive_stream_seed(spec.master_seed, r), e.what());
        }
    }

    result.runs.reserve(runs);
    std::vector<ConvergenceTrace> plain;
    plain.reserve(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        plain.push_back(*traces[r]);
        result.runs.push_back({derive_stream_seed(spec.master_seed, r), std::move(*traces[r])});
    }
    result.mean_curve = mean_curve(plain, spec.horizon);
    result.final_si = summarize(result.final_values());
    result.finished_utc = utc_timestamp();
    return result;
}

inline CampaignResult run_campaign(const CampaignSpec& spec) {
    spec.validate();
    return run_campaign(spec, std::make_shared<const Scene>(build_scene(spec.scene)));
}

struct SweepRow {
    double bandwidth_hz = 0.0;  // 0: narrowband
    std::size_t points = 1;
    SummaryStats converged_si;
    CampaignResult campaign;
};

/// One campaign per bandwidth, all with the same master seed. Bandwidth 0 is
/// the single-point narrowband grid; others use K equidistant points.
inline std::vector<SweepRow> bandwidth_sweep(const CampaignSpec& base, const std::vector<double>& bandwidths_hz,
                                             std::size_t points) {
    if (bandwidths_hz.empty()) throw DomainError("bandwidth_sweep: no bandwidths given");
    for (std::size_t a = 0; a < bandwidths_hz.size(); ++a) {
        if (!(bandwidths_hz[a] >= 0.0)) throw DomainError("bandwidth_sweep: bandwidths must be non-negative");
        for (std::size_t b = a + 1; b < bandwidths_hz.size(); ++b) {
            if (bandwidths_hz[a] == bandwidths_hz[b]) throw DomainError("bandwidth_sweep: bandwidths must be distinct");
        }
    }
    if (points < 2) throw DomainError("bandwidth_sweep: wideband point count must be at least 2");

    std::vector<SweepRow> rows;
    for (double bw : bandwidths_hz) {
        CampaignSpec spec = base;
        spec.scene.grid.bandwidth_hz = bw;
        spec.scene.grid.points = bw == 0.0 ? 1 : points;
        SweepRow row;
        row.bandwidth_hz = bw;
        row.points = spec.scene.grid.points;
        row.campaign = run_campaign(spec);
        row.converged_si = row.campaign.final_si;
        rows.push_back(std::move(row));
    }
    return rows;
}

struct SnapshotPoint {
    double frequency_hz = 0.0;
    double si_db = 0.0;
};

/// Dense frequency response of the composite channel under a fixed config,
/// over `span_hz` centred on the scene's center frequency.
inline std::vector<SnapshotPoint> transfer_snapshot(const Scene& scene, const RisConfig& config, double span_hz,
                                                    std::size_t points) {
    if (points < 2) throw DomainError("transfer_snapshot: need at least 2 points");
    if (!scene.params()) throw ConfigurationError("transfer_snapshot: scene has no physical model to re-render");
    const Scene dense = rebuild_on_grid(scene, GridParams{scene.params()->grid.center_hz, span_hz, points});
    const SiReading reading = si_magnitude_db(dense, config);
    std::vector<SnapshotPoint> out;
    out.reserve(points);
    for (std::size_t k = 0; k < points; ++k) out.push_back({dense.grid()[k], reading.per_point_db()[k]});
    return out;
}

}  // namespace rissic
