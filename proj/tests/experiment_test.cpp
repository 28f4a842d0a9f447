#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "rissic/experiment.hpp"

using namespace rissic;

namespace {

CampaignSpec small_spec() {
    CampaignSpec s;
    s.scene.geometry.nx = s.scene.geometry.ny = 6;
    s.greedy = GreedyParams{20, 60};
    s.runs = 6;
    s.horizon = 400;
    s.master_seed = 11;
    return s;
}

ConvergenceTrace trace_of(const std::vector<double>& values) {
    TraceRecorder rec("test");
    const RisConfig c = RisConfig::filled({1, 1}, false);
    for (double v : values) rec.record(c, SiReading({v}));
    return std::move(rec).finish(std::chrono::steady_clock::now());
}

}  // namespace

TEST(Summary, QuantilesInterpolateLinearly) {
    const auto s = summarize({4.0, 1.0, 3.0, 2.0});
    EXPECT_DOUBLE_EQ(s.median, 2.5);
    EXPECT_DOUBLE_EQ(s.q25, 1.75);
    EXPECT_DOUBLE_EQ(s.q75, 3.25);
    EXPECT_EQ(s.min, 1.0);
    EXPECT_EQ(s.max, 4.0);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_EQ(summarize({-7.0}).median, -7.0);
    EXPECT_THROW(summarize({}), StateError);
}

TEST(Curves, HorizonTruncatesAndPads) {
    const ConvergenceTrace t = trace_of({-1.0, -3.0, -2.0});
    EXPECT_EQ(curve_on_horizon(t, 2), (std::vector<double>{-1.0, -3.0}));
    EXPECT_EQ(curve_on_horizon(t, 5), (std::vector<double>{-1.0, -3.0, -3.0, -3.0, -3.0}));
}

TEST(Curves, MeanOfMonotoneCurvesIsMonotone) {
    Rng rng(4);
    std::vector<ConvergenceTrace> traces;
    for (int r = 0; r < 9; ++r) {
        std::vector<double> values(1 + rng.next_u64() % 50);
        for (double& v : values) v = -10.0 * rng.uniform();
        traces.push_back(trace_of(values));
    }
    const auto mean = mean_curve(traces, 80);
    ASSERT_EQ(mean.size(), 80u);
    for (std::size_t k = 1; k < mean.size(); ++k) EXPECT_LE(mean[k], mean[k - 1] + 1e-12);
}

TEST(Campaign, SingleRunCurveIsThatRunsCurve) {
    CampaignSpec s = small_spec();
    s.runs = 1;
    const auto r = run_campaign(s);
    ASSERT_EQ(r.runs.size(), 1u);
    EXPECT_EQ(r.runs[0].seed, derive_stream_seed(s.master_seed, 0));
    EXPECT_EQ(r.mean_curve, curve_on_horizon(r.runs[0].trace, s.horizon));
    EXPECT_EQ(r.final_si.median, r.runs[0].trace.best_reading.magnitude_db());
}

TEST(Campaign, ReproducibleAndIndependentOfThreadCount) {
    CampaignSpec s = small_spec();
    s.threads = 1;
    const auto a = run_campaign(s);
    s.threads = 4;
    const auto b = run_campaign(s);
    EXPECT_EQ(a.spec_hash, b.spec_hash);
    EXPECT_EQ(a.mean_curve, b.mean_curve);
    EXPECT_EQ(a.final_si, b.final_si);
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
        EXPECT_EQ(a.runs[r].seed, b.runs[r].seed);
        EXPECT_EQ(a.runs[r].trace.records, b.runs[r].trace.records);
    }
}

TEST(Campaign, RunsUseDistinctSeeds) {
    const auto r = run_campaign(small_spec());
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        for (std::size_t j = i + 1; j < r.runs.size(); ++j) EXPECT_NE(r.runs[i].seed, r.runs[j].seed);
    }
}

TEST(Campaign, SpecHashCoversResultDeterminingFields) {
    CampaignSpec s = small_spec();
    const std::string h = spec_hash(s);
    s.threads = 3;
    EXPECT_EQ(spec_hash(s), h);
    s.master_seed += 1;
    EXPECT_NE(spec_hash(s), h);
    s = small_spec();
    s.scene.clutter.seed = 99;
    EXPECT_NE(spec_hash(s), h);
}

TEST(Campaign, RandomBudgetDefaultsToHorizon) {
    CampaignSpec s = small_spec();
    s.algorithm = Algorithm::random;
    const auto r = run_campaign(s);
    for (const auto& run : r.runs) EXPECT_EQ(run.trace.iterations_total, s.horizon);
    s.random_iterations = 50;
    for (const auto& run : run_campaign(s).runs) EXPECT_EQ(run.trace.iterations_total, 50u);
}

TEST(Campaign, RejectsInvalidSpecs) {
    CampaignSpec s = small_spec();
    s.runs = 0;
    EXPECT_THROW(run_campaign(s), DomainError);
    s = small_spec();
    s.scene.grid.bandwidth_hz = 5e6;
    s.scene.grid.points = 1;
    EXPECT_THROW(run_campaign(s), DomainError);
    EXPECT_THROW(algorithm_from_string("annealing"), ParseError);
}

TEST(Campaign, ErrorNamesRunAndSeed) {
    const CampaignError e(3, 12345, "boom");
    EXPECT_EQ(e.run, 3u);
    EXPECT_NE(std::string(e.what()).find("seed 12345"), std::string::npos);
}

TEST(Campaign, GreedyBeatsRandomOnDefaultCalibration) {
    CampaignSpec g = small_spec();
    CampaignSpec r = g;
    r.algorithm = Algorithm::random;
    EXPECT_LT(run_campaign(g).final_si.median, run_campaign(r).final_si.median);
}

TEST(Sweep, NarrowbandRowEqualsNarrowbandCampaign) {
    CampaignSpec s = small_spec();
    s.runs = 3;
    const auto rows = bandwidth_sweep(s, {0.0, 5e6}, 5);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].points, 1u);
    EXPECT_EQ(rows[1].points, 5u);
    const auto nb = run_campaign(s);
    EXPECT_EQ(rows[0].converged_si, nb.final_si);
    EXPECT_EQ(rows[0].campaign.mean_curve, nb.mean_curve);
    EXPECT_EQ(rows[0].campaign.spec.master_seed, rows[1].campaign.spec.master_seed);
}

TEST(Sweep, ReportedSiBoundsEveryInBandPoint) {
    CampaignSpec s = small_spec();
    s.runs = 3;
    const auto rows = bandwidth_sweep(s, {10e6}, 7);
    const Scene scene = build_scene(rows[0].campaign.spec.scene);
    ASSERT_EQ(scene.grid().size(), 7u);
    for (const auto& run : rows[0].campaign.runs) {
        const double reported = run.trace.best_reading.magnitude_db();
        const SiReading again = si_magnitude_db(scene, run.trace.best_config);
        EXPECT_EQ(again.magnitude_db(), reported);
        for (double v : again.per_point_db()) EXPECT_LE(v, reported + 1e-9);
    }
}

TEST(Sweep, ValidatesArguments) {
    const CampaignSpec s = small_spec();
    EXPECT_THROW(bandwidth_sweep(s, {}, 5), DomainError);
    EXPECT_THROW(bandwidth_sweep(s, {5e6, 5e6}, 5), DomainError);
    EXPECT_THROW(bandwidth_sweep(s, {-1.0}, 5), DomainError);
    EXPECT_THROW(bandwidth_sweep(s, {5e6}, 1), DomainError);
}

TEST(Snapshot, MatchesScenePointsAtSharedFrequencies) {
    SceneParams p;
    p.geometry.nx = p.geometry.ny = 4;
    p.grid.bandwidth_hz = 20e6;
    p.grid.points = 9;
    const Scene scene = build_scene(p);
    Rng rng(3);
    const RisConfig c = uniform_config(scene.dims(), rng);
    const auto snap = transfer_snapshot(scene, c, 20e6, 9);
    const SiReading direct = si_magnitude_db(scene, c);
    ASSERT_EQ(snap.size(), 9u);
    for (std::size_t k = 0; k < 9; ++k) {
        EXPECT_EQ(snap[k].frequency_hz, scene.grid()[k]);
        EXPECT_EQ(snap[k].si_db, direct.per_point_db()[k]);
    }
}

TEST(Snapshot, DarkSurfaceShowsOnlyLeakage) {
    // Zero OFF amplitude, no clutter: the all-OFF snapshot is the leakage path alone.
    SceneParams p;
    p.geometry.nx = p.geometry.ny = 4;
    p.cell.amplitude_off = 0.0;
    p.clutter.enabled = false;
    const Scene scene = build_scene(p);
    const auto snap = transfer_snapshot(scene, RisConfig::filled(scene.dims(), false), 100e6, 21);
    const Scene dense = rebuild_on_grid(scene, GridParams{p.grid.center_hz, 100e6, 21});
    for (std::size_t k = 0; k < snap.size(); ++k) {
        EXPECT_NEAR(snap[k].si_db, 20.0 * std::log10(std::abs(dense.direct(k))), 1e-12);
    }
    EXPECT_NEAR(snap[10].si_db, -p.calibration.alpha_iso_db, 1e-9);
}

TEST(Snapshot, NarrowbandOptimumNullsNearCenter) {
    // Default 16 x 16 scene; smaller surfaces cannot reach the leakage level.
    const SceneParams p;
    auto scene = std::make_shared<const Scene>(build_scene(p));
    SimulatedBackend backend(scene);
    Rng rng(2);
    const auto trace = greedy_optimize(backend, GreedyParams{}, rng);
    const double span = 200e6;
    const std::size_t points = 401;
    const auto snap = transfer_snapshot(*scene, trace.best_config, span, points);
    std::size_t argmin = 0;
    for (std::size_t k = 1; k < snap.size(); ++k) {
        if (snap[k].si_db < snap[argmin].si_db) argmin = k;
    }
    const double step = span / static_cast<double>(points - 1);
    EXPECT_LE(std::abs(snap[argmin].frequency_hz - p.grid.center_hz), step + 1e-3);
}

TEST(Snapshot, RequiresPhysicalScene) {
    const Scene raw = random_scene({2, 2}, 1);
    EXPECT_THROW(transfer_snapshot(raw, RisConfig::filled({2, 2}, false), 1e6, 5), ConfigurationError);
    SceneParams p;
    p.geometry.nx = p.geometry.ny = 2;
    EXPECT_THROW(transfer_snapshot(build_scene(p), RisConfig::filled({2, 2}, false), 1e6, 1), DomainError);
}
