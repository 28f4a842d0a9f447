#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rissic/io.hpp"

using namespace rissic;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / ("rissic_io_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

ConvergenceTrace trace_of(const std::vector<double>& values) {
    TraceRecorder rec("greedy");
    const RisConfig c = RisConfig::filled({1, 2}, true);
    for (double v : values) rec.record(c, SiReading({v}));
    return std::move(rec).finish(std::chrono::steady_clock::now());
}

std::string expect_parse_error(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e.what();
    }
    ADD_FAILURE() << "expected ParseError";
    return {};
}

}  // namespace

TEST(RealFormat, RoundTripsExactly) {
    for (double v : {0.0, -44.0, -101.31234567891234, 1e-300, kNegInf}) {
        EXPECT_EQ(parse_real(format_real(v), "x"), v);
    }
    EXPECT_EQ(format_real(kNegInf), "-inf");
    EXPECT_THROW(parse_real("12abc", "x"), ParseError);
    EXPECT_THROW(parse_unsigned("-3", "x"), ParseError);
}

TEST(SceneFile, RoundTripsDefaultsAndVariants) {
    SceneParams p;
    EXPECT_EQ(format_scene(parse_scene_text(format_scene(p), "mem")), format_scene(p));
    p.geometry.nx = 4;
    p.geometry.pitch_m = 0.02;
    p.calibration.noise_floor_db = -120.0;
    p.clutter.enabled = false;
    p.grid.bandwidth_hz = 10e6;
    p.grid.points = 11;
    const SceneParams q = parse_scene_text(format_scene(p), "mem");
    EXPECT_EQ(q.geometry.nx, 4u);
    EXPECT_EQ(q.geometry.pitch_m, 0.02);
    EXPECT_EQ(q.calibration.noise_floor_db, -120.0);
    EXPECT_FALSE(q.clutter.enabled);
    EXPECT_EQ(q.grid.points, 11u);
    EXPECT_EQ(build_scene(q), build_scene(p));
}

TEST(SceneFile, MissingKeyIsNamed) {
    Json j = to_json(SceneParams{});
    j["grid"].erase("center_hz");
    const std::string msg = expect_parse_error([&] { parse_scene_text(j.dump(), "scene.json"); });
    EXPECT_NE(msg.find("grid.center_hz"), std::string::npos) << msg;
    EXPECT_NE(msg.find("scene.json"), std::string::npos) << msg;
}

TEST(SceneFile, UnknownKeyIsNamed) {
    Json j = to_json(SceneParams{});
    j["geometry"]["spacing"] = 1.0;
    const std::string msg = expect_parse_error([&] { parse_scene_text(j.dump(), "s"); });
    EXPECT_NE(msg.find("geometry.spacing"), std::string::npos) << msg;
    EXPECT_NE(msg.find("unknown key"), std::string::npos) << msg;
}

TEST(SceneFile, SyntaxErrorReportsLineAndColumn) {
    const std::string text = "{\n  \"geometry\": {\n    \"nx\": 16,,\n";
    const std::string msg = expect_parse_error([&] { parse_scene_text(text, "bad.json"); });
    EXPECT_EQ(msg.rfind("bad.json:3:", 0), 0u) << msg;
}

TEST(SceneFile, RangeErrors) {
    for (auto mutate : std::vector<std::function<void(Json&)>>{
             [](Json& j) { j["geometry"]["nx"] = 0; },
             [](Json& j) { j["geometry"]["distance_m"] = -1.0; },
             [](Json& j) { j["cell"]["amplitude_on"] = 1.5; },
             [](Json& j) { j["cell"]["phase_difference_deg"] = 360.0; },
             [](Json& j) { j["grid"]["points"] = 3; },
             [](Json& j) { j["clutter"]["enabled"] = "yes"; },
         }) {
        Json j = to_json(SceneParams{});
        mutate(j);
        EXPECT_THROW(parse_scene_text(j.dump(), "s"), ParseError) << j.dump();
    }
}

TEST(SceneFile, MissingFileIsReported) {
    EXPECT_THROW(parse_scene("/nonexistent/scene.json"), std::runtime_error);
}

TEST(TraceFormat, GoldenOutput) {
    ConvergenceTrace t = trace_of({-40.0, -42.5, -41.0});
    t.wall_time_s = 0.25;
    const TraceFile f = make_trace_file(t, "00ff", 7, {{"buffer_size", "2"}}, "2026-01-01T00:00:00Z");
    EXPECT_EQ(format_trace(f),
              "# format: rissic-trace v1\n"
              "# algorithm: greedy\n"
              "# spec_hash: 00ff\n"
              "# seed: 7\n"
              "# buffer_size: 2\n"
              "# iterations_total: 3\n"
              "# best_si_db: -42.5\n"
              "# timestamp_utc: 2026-01-01T00:00:00Z\n"
              "# wall_time_s: 0.25\n"
              "iteration,evaluated_si_db,cumulative_best_si_db\n"
              "0,-40,-40\n"
              "1,-42.5,-42.5\n"
              "2,-41,-42.5\n");
}

TEST(TraceFormat, FileRoundTrip) {
    SimulatedBackend backend(random_scene({3, 3}, 9));
    Rng rng(9);
    const auto trace = greedy_optimize(backend, GreedyParams{6, 20}, rng);
    const TraceFile f = make_trace_file(trace, "abc", 9, {}, "t");
    const fs::path path = temp_dir() / "trace.csv";
    write_trace(f, path);
    EXPECT_EQ(read_trace(path), f);
    EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
}

TEST(TraceFormat, NonMonotoneCumulativeColumnIsFlagged) {
    std::string text = format_trace(make_trace_file(trace_of({-40.0, -42.5, -41.0}), "h", 1, {}, "t"));
    text.replace(text.find("2,-41,-42.5"), 11, "2,-41,-41");
    const std::string msg = expect_parse_error([&] { parse_trace(text, "t.csv"); });
    EXPECT_NE(msg.find("integrity"), std::string::npos) << msg;
    EXPECT_NE(msg.find("t.csv:12"), std::string::npos) << msg;
}

TEST(TraceFormat, RowCountMismatchIsFlagged) {
    std::string text = format_trace(make_trace_file(trace_of({-40.0, -42.5, -41.0}), "h", 1, {}, "t"));
    text.erase(text.find("2,-41,-42.5\n"));
    const std::string msg = expect_parse_error([&] { parse_trace(text, "t.csv"); });
    EXPECT_NE(msg.find("iterations_total"), std::string::npos) << msg;
}

TEST(TraceFormat, OutOfSequenceIndexIsFlagged) {
    std::string text = format_trace(make_trace_file(trace_of({-40.0, -42.5}), "h", 1, {}, "t"));
    text.replace(text.find("1,-42.5"), 1, "5");
    EXPECT_THROW(parse_trace(text, "t.csv"), ParseError);
}

TEST(ConfigFile, RoundTripAndLayout) {
    std::vector<bool> bits{true, false, false, true, true, true};
    const RisConfig c(Dims{2, 3}, bits);
    EXPECT_EQ(format_config(c), "100\n111\n");
    EXPECT_EQ(parse_config(format_config(c), "c"), c);
    const fs::path path = temp_dir() / "c.txt";
    write_config(c, path);
    EXPECT_EQ(read_config(path), c);
    EXPECT_THROW(parse_config("10\n1\n", "c"), ParseError);
    EXPECT_THROW(parse_config("1x\n", "c"), ParseError);
    EXPECT_THROW(parse_config("\n", "c"), ParseError);
}

TEST(CampaignFile, RoundTripAndReproduction) {
    CampaignSpec spec;
    spec.scene.geometry.nx = spec.scene.geometry.ny = 5;
    spec.greedy = GreedyParams{10, 30};
    spec.runs = 4;
    spec.horizon = 200;
    spec.master_seed = 5;
    const auto summary = summarize_campaign(run_campaign(spec));
    const fs::path path = temp_dir() / "campaign.json";
    write_file_atomic(path, format_campaign(summary));
    const CampaignSummary back = read_campaign(path);
    EXPECT_TRUE(back.same_results(summary));
    EXPECT_EQ(back.started_utc, summary.started_utc);

    // The stored spec alone reproduces the stored results.
    const auto rerun = summarize_campaign(run_campaign(back.spec));
    EXPECT_TRUE(rerun.same_results(back));
}

TEST(CampaignFile, TamperedSpecIsRejected) {
    CampaignSpec spec;
    spec.scene.geometry.nx = spec.scene.geometry.ny = 3;
    spec.greedy = GreedyParams{4, 5};
    spec.runs = 1;
    spec.horizon = 10;
    Json doc = Json::parse(format_campaign(summarize_campaign(run_campaign(spec))));
    doc["spec"]["master_seed"] = 2;
    const std::string msg = expect_parse_error([&] { parse_campaign(doc.dump(), "c.json"); });
    EXPECT_NE(msg.find("spec_hash"), std::string::npos) << msg;
}

TEST(CampaignFile, NonFiniteValuesSurvive) {
    CampaignSummary s;
    s.spec_hash = spec_hash(s.spec);
    s.runs.push_back({1, 10, kNegInf});
    s.mean_curve = {kNegInf};
    s.final_si = SummaryStats{kNegInf, kNegInf, kNegInf, kNegInf, kNegInf, kNegInf};
    EXPECT_TRUE(parse_campaign(format_campaign(s), "c").same_results(s));
}

TEST(Tables, GoldenCurve) {
    EXPECT_EQ(format_curve({-40.0, -41.5}, {{"spec_hash", "ab"}, {"master_seed", "3"}}),
              "# spec_hash: ab\n"
              "# master_seed: 3\n"
              "iteration,mean_cumulative_best_si_db\n"
              "0,-40\n"
              "1,-41.5\n");
}

TEST(Tables, GoldenSweep) {
    SweepRow row;
    row.bandwidth_hz = 5e6;
    row.points = 11;
    row.campaign.runs.assign(2, CampaignRun{1, trace_of({-70.0})});
    row.converged_si = SummaryStats{-70.0, -72.0, -68.0, -75.0, -65.0, -70.0};
    EXPECT_EQ(format_sweep({row}, {{"seed", "1"}}),
              "# seed: 1\n"
              "bandwidth_hz,points,runs,median_si_db,q25_si_db,q75_si_db,min_si_db,max_si_db\n"
              "5000000,11,2,-70,-72,-68,-75,-65\n");
}

TEST(Tables, GoldenSnapshot) {
    EXPECT_EQ(format_snapshot({{5.385e9, -90.25}, {5.3855e9, kNegInf}}, {}),
              "frequency_hz,si_db\n"
              "5385000000,-90.25\n"
              "5385500000,-inf\n");
}
