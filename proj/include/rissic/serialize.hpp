#pragma once

// JSON mapping for scene and campaign parameters. Keys carry their units.
// Parsing is strict: unknown keys are rejected with their dotted path.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rissic/scene.hpp"

namespace rissic {

using Json = nlohmann::json;

/// Malformed or schema-violating document; `where` names the key or line.
struct ParseError : std::runtime_error {
    ParseError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where(where), message(what) {}
    std::string where;
    std::string message;
};

namespace detail {

class ObjectReader {
public:
    ObjectReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ParseError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    const Json& required(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end()) throw ParseError(qualify(key), "missing required key");
        return *it;
    }

    const Json* optional(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) return nullptr;
        return &*it;
    }

    double number(const std::string& key) { return as_number(required(key), key); }

    std::optional<double> optional_number(const std::string& key) {
        const Json* v = optional(key);
        if (!v) return std::nullopt;
        return as_number(*v, key);
    }

    std::uint64_t unsigned_integer(const std::string& key) {
        const Json& v = required(key);
        if (!v.is_number_unsigned()) {
            if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
            throw ParseError(qualify(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key) {
        const Json& v = required(key);
        if (!v.is_boolean()) throw ParseError(qualify(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const Json& v = required(key);
        if (!v.is_string()) throw ParseError(qualify(key), "expected a string");
        return v.get<std::string>();
    }

    ObjectReader section(const std::string& key) { return ObjectReader(required(key), qualify(key)); }

    void reject_unknown() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) throw ParseError(qualify(it.key()), "unknown key");
        }
    }

    std::string qualify(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    double as_number(const Json& v, const std::string& key) const {
        if (!v.is_number()) throw ParseError(qualify(key), "expected a number");
        return v.get<double>();
    }

    const Json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const SceneParams& p) {
    Json j;
    j["geometry"] = {
        {"nx", p.geometry.nx},
        {"ny", p.geometry.ny},
        {"pitch_m", detail::optional_to_json(p.geometry.pitch_m)},
        {"distance_m", p.geometry.distance_m},
        {"antenna_spacing_m", p.geometry.antenna_spacing_m},
        {"tx_gain_dbi", p.geometry.tx_gain_dbi},
        {"rx_gain_dbi", p.geometry.rx_gain_dbi},
        {"element_gain_dbi", detail::optional_to_json(p.geometry.element_gain_dbi)},
    };
    j["cell"] = {
        {"amplitude_on", p.cell.amplitude_on},
        {"amplitude_off", p.cell.amplitude_off},
        {"phase_difference_deg", p.cell.phase_difference_deg},
        {"quality_factor", p.cell.quality_factor},
    };
    j["calibration"] = {
        {"alpha_iso_db", p.calibration.alpha_iso_db},
        {"p_tx_dbm", p.calibration.p_tx_dbm},
        {"leakage_delay_s", p.calibration.leakage_delay_s},
        {"noise_floor_db", detail::optional_to_json(p.calibration.noise_floor_db)},
    };
    j["clutter"] = {
        {"enabled", p.clutter.enabled},
        {"relative_power_db", p.clutter.relative_power_db},
        {"seed", p.clutter.seed},
    };
    j["grid"] = {
        {"center_hz", p.grid.center_hz},
        {"bandwidth_hz", p.grid.bandwidth_hz},
        {"points", p.grid.points},
    };
    return j;
}

/// Strict parse; also validates value ranges so a scene that parses will build.
inline SceneParams scene_params_from_json(const Json& j) {
    SceneParams p;
    detail::ObjectReader root(j, "");

    auto geo = root.section("geometry");
    p.geometry.nx = geo.unsigned_integer("nx");
    p.geometry.ny = geo.unsigned_integer("ny");
    p.geometry.pitch_m = geo.optional_number("pitch_m");
    p.geometry.distance_m = geo.number("distance_m");
    p.geometry.antenna_spacing_m = geo.number("antenna_spacing_m");
    p.geometry.tx_gain_dbi = geo.number("tx_gain_dbi");
    p.geometry.rx_gain_dbi = geo.number("rx_gain_dbi");
    p.geometry.element_gain_dbi = geo.optional_number("element_gain_dbi");
    geo.reject_unknown();
    if (p.geometry.nx < 1) throw ParseError("geometry.nx", "must be at least 1");
    if (p.geometry.ny < 1) throw ParseError("geometry.ny", "must be at least 1");
    if (p.geometry.pitch_m && !(*p.geometry.pitch_m > 0.0)) throw ParseError("geometry.pitch_m", "must be positive");
    if (!(p.geometry.distance_m > 0.0)) throw ParseError("geometry.distance_m", "must be positive");
    if (!(p.geometry.antenna_spacing_m > 0.0)) throw ParseError("geometry.antenna_spacing_m", "must be positive");

    auto cell = root.section("cell");
    p.cell.amplitude_on = cell.number("amplitude_on");
    p.cell.amplitude_off = cell.number("amplitude_off");
    p.cell.phase_difference_deg = cell.number("phase_difference_deg");
    p.cell.quality_factor = cell.number("quality_factor");
    cell.reject_unknown();
    for (auto [key, v] : {std::pair{"amplitude_on", p.cell.amplitude_on}, std::pair{"amplitude_off", p.cell.amplitude_off}}) {
        if (!(v >= 0.0 && v <= 1.0)) throw ParseError(std::string("cell.") + key, "must lie in [0, 1]");
    }
    if (!(p.cell.phase_difference_deg > 0.0 && p.cell.phase_difference_deg < 360.0)) {
        throw ParseError("cell.phase_difference_deg", "must lie in (0, 360)");
    }
    if (!(p.cell.quality_factor > 0.0)) throw ParseError("cell.quality_factor", "must be positive");

    auto cal = root.section("calibration");
    p.calibration.alpha_iso_db = cal.number("alpha_iso_db");
    p.calibration.p_tx_dbm = cal.number("p_tx_dbm");
    p.calibration.leakage_delay_s = cal.number("leakage_delay_s");
    p.calibration.noise_floor_db = cal.optional_number("noise_floor_db");
    cal.reject_unknown();
    if (!(p.calibration.leakage_delay_s >= 0.0)) throw ParseError("calibration.leakage_delay_s", "must be non-negative");

    auto clut = root.section("clutter");
    p.clutter.enabled = clut.boolean("enabled");
    p.clutter.relative_power_db = clut.number("relative_power_db");
    p.clutter.seed = clut.unsigned_integer("seed");
    clut.reject_unknown();

    auto grid = root.section("grid");
    p.grid.center_hz = grid.number("center_hz");
    p.grid.bandwidth_hz = grid.number("bandwidth_hz");
    p.grid.points = grid.unsigned_integer("points");
    grid.reject_unknown();
    if (!(p.grid.center_hz > 0.0)) throw ParseError("grid.center_hz", "must be positive");
    if (p.grid.bandwidth_hz == 0.0) {
        if (p.grid.points != 1) throw ParseError("grid.points", "narrowband grid (bandwidth_hz = 0) needs exactly 1 point");
    } else {
        if (!(p.grid.bandwidth_hz > 0.0)) throw ParseError("grid.bandwidth_hz", "must be non-negative");
        if (p.grid.points < 2) throw ParseError("grid.points", "wideband grid needs at least 2 points");
    }

    root.reject_unknown();
    return p;
}

/// FNV-1a over a canonical JSON dump (object keys are sorted).
inline std::string content_hash(const Json& j) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace rissic
