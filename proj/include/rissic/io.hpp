#pragma once

// File formats.
//
// Trace (.csv): '#'-prefixed "key: value" header lines, then the column row
//   iteration,evaluated_si_db,cumulative_best_si_db
// and one comma-separated row per evaluation. Reals use %.17g.
//
// Config grid: nx lines of ny characters '0'/'1'; line x, column y is
// element (x, y).
//
// Scene and campaign documents are JSON; see docs/scene_schema.md.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "rissic/experiment.hpp"
#include "rissic/optimizer.hpp"
#include "rissic/serialize.hpp"

namespace rissic {

inline constexpr const char* kTraceFormat = "rissic-trace v1";
inline constexpr const char* kCampaignFormat = "rissic-campaign v1";
inline constexpr const char* kTraceColumns = "iteration,evaluated_si_db,cumulative_best_si_db";

inline std::string format_real(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_real(const std::string& text, const std::string& where) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || std::isnan(v)) throw ParseError(where, "not a number: '" + text + "'");
    return v;
}

inline std::uint64_t parse_unsigned(const std::string& text, const std::string& where) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError(where, "not a non-negative integer: '" + text + "'");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
    if (errno == ERANGE) throw ParseError(where, "integer out of range: '" + text + "'");
    return v;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to "<path>.tmp" and renames over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

// ---------------------------------------------------------------- scenes

inline SceneParams parse_scene_text(const std::string& text, const std::string& source) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
    }
    try {
        return scene_params_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(source + ": " + e.where, e.message);
    }
}

inline SceneParams parse_scene(const std::filesystem::path& path) {
    return parse_scene_text(read_text_file(path), path.string());
}

inline std::string format_scene(const SceneParams& p) { return to_json(p).dump(2) + "\n"; }

// ---------------------------------------------------------------- traces

struct TraceFile {
    std::vector<std::pair<std::string, std::string>> header;  // in file order
    std::vector<TraceRecord> records;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : header) {
            if (k == key) return &v;
        }
        return nullptr;
    }
    friend bool operator==(const TraceFile&, const TraceFile&) = default;
};

/// Header for a single optimizer run. Everything except the timestamp and
/// wall time is a pure function of (scene, parameters, seed).
inline TraceFile make_trace_file(const ConvergenceTrace& trace, const std::string& spec_hash, std::uint64_t seed,
                                 std::vector<std::pair<std::string, std::string>> parameters,
                                 const std::string& timestamp_utc) {
    TraceFile f;
    f.header.emplace_back("format", kTraceFormat);
    f.header.emplace_back("algorithm", trace.algorithm);
    f.header.emplace_back("spec_hash", spec_hash);
    f.header.emplace_back("seed", std::to_string(seed));
    for (auto& kv : parameters) f.header.push_back(std::move(kv));
    f.header.emplace_back("iterations_total", std::to_string(trace.iterations_total));
    f.header.emplace_back("best_si_db", format_real(trace.best_reading.magnitude_db()));
    f.header.emplace_back("timestamp_utc", timestamp_utc);
    f.header.emplace_back("wall_time_s", format_real(trace.wall_time_s));
    f.records = trace.records;
    return f;
}

inline std::string format_trace(const TraceFile& f) {
    std::string out;
    for (const auto& [k, v] : f.header) out += "# " + k + ": " + v + "\n";
    out += kTraceColumns;
    out += "\n";
    for (const auto& r : f.records) {
        out += std::to_string(r.iteration) + "," + format_real(r.evaluated_si_db) + "," +
               format_real(r.cumulative_best_si_db) + "\n";
    }
    return out;
}

/// Parses and checks integrity: row count matches iterations_total, indices
/// are consecutive, and the cumulative column is the running minimum.
inline TraceFile parse_trace(const std::string& text, const std::string& source) {
    TraceFile f;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool columns_seen = false;
    auto where = [&] { return source + ":" + std::to_string(lineno); };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!columns_seen) {
            if (line.rfind("# ", 0) == 0) {
                const auto colon = line.find(": ", 2);
                if (colon == std::string::npos) throw ParseError(where(), "header line without 'key: value'");
                f.header.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
                continue;
            }
            if (line != kTraceColumns) throw ParseError(where(), "expected column row '" + std::string(kTraceColumns) + "'");
            columns_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 3) throw ParseError(where(), "expected 3 columns, got " + std::to_string(cells.size()));
        TraceRecord r;
        r.iteration = parse_unsigned(cells[0], where() + " iteration");
        r.evaluated_si_db = parse_real(cells[1], where() + " evaluated_si_db");
        r.cumulative_best_si_db = parse_real(cells[2], where() + " cumulative_best_si_db");
        if (r.iteration != f.records.size()) throw ParseError(where(), "iteration index out of sequence");
        const double expected =
            f.records.empty() ? r.evaluated_si_db : std::min(f.records.back().cumulative_best_si_db, r.evaluated_si_db);
        if (r.cumulative_best_si_db != expected) {
            throw ParseError(where(), "integrity violation: cumulative_best_si_db is not the running minimum");
        }
        f.records.push_back(r);
    }
    if (!columns_seen) throw ParseError(source, "missing column row");
    if (const auto* fmt = f.find("format"); !fmt || *fmt != kTraceFormat) {
        throw ParseError(source, "missing or unsupported format header");
    }
    const auto* total = f.find("iterations_total");
    if (!total) throw ParseError(source, "missing iterations_total header");
    if (parse_unsigned(*total, source + " iterations_total") != f.records.size()) {
        throw ParseError(source, "integrity violation: row count " + std::to_string(f.records.size()) +
                                     " differs from iterations_total " + *total);
    }
    return f;
}

inline void write_trace(const TraceFile& f, const std::filesystem::path& path) {
    write_file_atomic(path, format_trace(f));
}

inline TraceFile read_trace(const std::filesystem::path& path) { return parse_trace(read_text_file(path), path.string()); }

// ---------------------------------------------------------------- config grids

inline std::string format_config(const RisConfig& c) {
    std::string out;
    for (std::size_t x = 0; x < c.dims().nx; ++x) {
        for (std::size_t y = 0; y < c.dims().ny; ++y) out += c.at(x, y) ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline RisConfig parse_config(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::vector<bool> states;
    std::size_t nx = 0, ny = 0, lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.find_first_not_of("01") != std::string::npos) {
            throw ParseError(source + ":" + std::to_string(lineno), "config rows may only contain '0' and '1'");
        }
        if (nx == 0) ny = line.size();
        if (line.size() != ny) throw ParseError(source + ":" + std::to_string(lineno), "ragged config row");
        for (char ch : line) states.push_back(ch == '1');
        ++nx;
    }
    if (nx == 0) throw ParseError(source, "empty config");
    return RisConfig(Dims{nx, ny}, std::move(states));
}

inline void write_config(const RisConfig& c, const std::filesystem::path& path) { write_file_atomic(path, format_config(c)); }

inline RisConfig read_config(const std::filesystem::path& path) { return parse_config(read_text_file(path), path.string()); }

// ---------------------------------------------------------------- campaigns

namespace detail {

inline Json real_to_json(double v) { return std::isfinite(v) ? Json(v) : Json(format_real(v)); }

inline double real_from_json(const Json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_real(j.get<std::string>(), where);
    throw ParseError(where, "expected a number");
}

inline Json stats_to_json(const SummaryStats& s) {
    return Json{{"median_si_db", real_to_json(s.median)}, {"q25_si_db", real_to_json(s.q25)},
                {"q75_si_db", real_to_json(s.q75)},       {"min_si_db", real_to_json(s.min)},
                {"max_si_db", real_to_json(s.max)},       {"mean_si_db", real_to_json(s.mean)}};
}

inline SummaryStats stats_from_json(const Json& j) {
    ObjectReader r(j, "final_si");
    SummaryStats s;
    s.median = real_from_json(r.required("median_si_db"), "final_si.median_si_db");
    s.q25 = real_from_json(r.required("q25_si_db"), "final_si.q25_si_db");
    s.q75 = real_from_json(r.required("q75_si_db"), "final_si.q75_si_db");
    s.min = real_from_json(r.required("min_si_db"), "final_si.min_si_db");
    s.max = real_from_json(r.required("max_si_db"), "final_si.max_si_db");
    s.mean = real_from_json(r.required("mean_si_db"), "final_si.mean_si_db");
    r.reject_unknown();
    return s;
}

}  // namespace detail

/// Persisted view of a campaign: everything but the per-iteration traces.
struct CampaignSummary {
    struct Run {
        std::uint64_t seed = 0;
        std::size_t iterations_total = 0;
        double final_si_db = 0.0;
        friend bool operator==(const Run&, const Run&) = default;
    };

    CampaignSpec spec;
    std::string spec_hash;
    std::vector<Run> runs;
    std::vector<double> mean_curve;
    SummaryStats final_si;
    std::string started_utc;
    std::string finished_utc;

    /// Equality of everything that is a function of the spec.
    bool same_results(const CampaignSummary& o) const {
        return spec_hash == o.spec_hash && runs == o.runs && mean_curve == o.mean_curve && final_si == o.final_si;
    }
};

inline CampaignSummary summarize_campaign(const CampaignResult& r) {
    CampaignSummary s;
    s.spec = r.spec;
    s.spec_hash = r.spec_hash;
    for (const auto& run : r.runs) {
        s.runs.push_back({run.seed, run.trace.iterations_total, run.trace.best_reading.magnitude_db()});
    }
    s.mean_curve = r.mean_curve;
    s.final_si = r.final_si;
    s.started_utc = r.started_utc;
    s.finished_utc = r.finished_utc;
    return s;
}

inline std::string format_campaign(const CampaignSummary& s) {
    Json runs = Json::array();
    for (const auto& r : s.runs) {
        runs.push_back({{"seed", r.seed}, {"iterations_total", r.iterations_total},
                        {"final_si_db", detail::real_to_json(r.final_si_db)}});
    }
    Json curve = Json::array();
    for (double v : s.mean_curve) curve.push_back(detail::real_to_json(v));
    Json doc{{"format", kCampaignFormat},
             {"spec", to_json(s.spec)},
             {"spec_hash", s.spec_hash},
             {"runs", runs},
             {"mean_curve_si_db", curve},
             {"final_si", detail::stats_to_json(s.final_si)},
             {"started_utc", s.started_utc},
             {"finished_utc", s.finished_utc}};
    return doc.dump(2) + "\n";
}

inline CampaignSummary parse_campaign(const std::string& text, const std::string& source) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(source, std::string("malformed JSON: ") + e.what());
    }
    detail::ObjectReader r(doc, "");
    if (r.string("format") != kCampaignFormat) throw ParseError(source + ": format", "unsupported campaign format");
    CampaignSummary s;
    s.spec = campaign_spec_from_json(r.required("spec"));
    s.spec_hash = r.string("spec_hash");
    for (const auto& run : r.required("runs")) {
        detail::ObjectReader rr(run, "runs[]");
        CampaignSummary::Run out;
        out.seed = rr.unsigned_integer("seed");
        out.iterations_total = rr.unsigned_integer("iterations_total");
        out.final_si_db = detail::real_from_json(rr.required("final_si_db"), "runs[].final_si_db");
        rr.reject_unknown();
        s.runs.push_back(out);
    }
    for (const auto& v : r.required("mean_curve_si_db")) s.mean_curve.push_back(detail::real_from_json(v, "mean_curve_si_db"));
    s.final_si = detail::stats_from_json(r.required("final_si"));
    s.started_utc = r.string("started_utc");
    s.finished_utc = r.string("finished_utc");
    r.reject_unknown();
    if (spec_hash(s.spec) != s.spec_hash) throw ParseError(source + ": spec_hash", "does not match the embedded spec");
    return s;
}

inline CampaignSummary read_campaign(const std::filesystem::path& path) {
    return parse_campaign(read_text_file(path), path.string());
}

// ---------------------------------------------------------------- tables

inline constexpr const char* kCurveColumns = "iteration,mean_cumulative_best_si_db";
inline constexpr const char* kSweepColumns =
    "bandwidth_hz,points,runs,median_si_db,q25_si_db,q75_si_db,min_si_db,max_si_db";
inline constexpr const char* kSnapshotColumns = "frequency_hz,si_db";

inline std::string metadata_lines(const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string out;
    for (const auto& [k, v] : meta) out += "# " + k + ": " + v + "\n";
    return out;
}

inline std::string format_curve(const std::vector<double>& curve,
                                const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string out = metadata_lines(meta) + kCurveColumns + "\n";
    for (std::size_t t = 0; t < curve.size(); ++t) out += std::to_string(t) + "," + format_real(curve[t]) + "\n";
    return out;
}

inline std::string format_sweep(const std::vector<SweepRow>& rows,
                                const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string out = metadata_lines(meta) + kSweepColumns + "\n";
    for (const auto& r : rows) {
        const auto& s = r.converged_si;
        out += format_real(r.bandwidth_hz) + "," + std::to_string(r.points) + "," +
               std::to_string(r.campaign.runs.size()) + "," + format_real(s.median) + "," + format_real(s.q25) + "," +
               format_real(s.q75) + "," + format_real(s.min) + "," + format_real(s.max) + "\n";
    }
    return out;
}

inline std::string format_snapshot(const std::vector<SnapshotPoint>& pts,
                                   const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string out = metadata_lines(meta) + kSnapshotColumns + "\n";
    for (const auto& p : pts) out += format_real(p.frequency_hz) + "," + format_real(p.si_db) + "\n";
    return out;
}

}  // namespace rissic
