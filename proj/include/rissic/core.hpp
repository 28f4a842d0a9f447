#pragma once

// Shared domain types: configurations, frequency grids, SI readings and the
// dB/linear unit helpers used across the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rissic {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultCenterHz = 5.385e9;

/// Invalid numeric input (negative magnitude, non-positive distance, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Structural mismatch between objects (config vs. scene dimensions, ...).
struct ConfigurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operation invoked on an object in an unusable state (e.g. empty buffer).
struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Amplitude convention: 20*log10.
inline double db_to_linear(double db) { return std::pow(10.0, db / 20.0); }

inline double linear_to_db(double ratio) {
    if (std::isnan(ratio) || ratio < 0.0) {
        throw DomainError("linear_to_db: magnitude must be non-negative, got " +
                          std::to_string(ratio));
    }
    if (ratio == 0.0) return kNegInf;
    return 20.0 * std::log10(ratio);
}

struct Dims {
    std::size_t nx = 0;
    std::size_t ny = 0;

    std::size_t count() const { return nx * ny; }
    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Binary ON/OFF state of every surface element. Element (x, y) lives at flat
/// index x * ny + y.
class RisConfig {
public:
    RisConfig(Dims dims, std::vector<bool> states) : dims_(dims), states_(std::move(states)) {
        if (dims_.nx < 1 || dims_.ny < 1) {
            throw ConfigurationError("RisConfig: dimensions must be at least 1x1");
        }
        if (states_.size() != dims_.count()) {
            throw ConfigurationError("RisConfig: expected " + std::to_string(dims_.count()) +
                                     " states, got " + std::to_string(states_.size()));
        }
    }

    static RisConfig filled(Dims dims, bool on) {
        return RisConfig(dims, std::vector<bool>(dims.count(), on));
    }

    Dims dims() const { return dims_; }
    std::size_t size() const { return states_.size(); }

    bool operator[](std::size_t flat) const { return states_[flat]; }
    bool at(std::size_t x, std::size_t y) const {
        if (x >= dims_.nx || y >= dims_.ny) throw ConfigurationError("RisConfig: index out of range");
        return states_[x * dims_.ny + y];
    }
    const std::vector<bool>& states() const { return states_; }
    std::size_t count_on() const {
        return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), true));
    }

    friend bool operator==(const RisConfig&, const RisConfig&) = default;

private:
    Dims dims_;
    std::vector<bool> states_;
};

struct RisConfigHash {
    std::size_t operator()(const RisConfig& c) const noexcept {
        return std::hash<std::vector<bool>>{}(c.states()) ^ (c.dims().nx * 0x9E3779B97F4A7C15ull);
    }
};

/// Ordered frequency points in Hz. One point (the test tone) for narrowband,
/// K >= 2 equidistant points symmetric about the center otherwise.
class FrequencyGrid {
public:
    static FrequencyGrid narrowband(double center_hz) {
        if (!(center_hz > 0.0)) throw DomainError("FrequencyGrid: center frequency must be positive");
        return FrequencyGrid(center_hz, 0.0, {center_hz});
    }

    static FrequencyGrid wideband(double center_hz, double bandwidth_hz, std::size_t points) {
        if (!(center_hz > 0.0)) throw DomainError("FrequencyGrid: center frequency must be positive");
        if (points < 2) throw DomainError("FrequencyGrid: wideband grid needs at least 2 points");
        if (!(bandwidth_hz > 0.0) || bandwidth_hz >= 2.0 * center_hz) {
            throw DomainError("FrequencyGrid: bandwidth must be positive and below twice the center");
        }
        std::vector<double> pts(points);
        const auto span = static_cast<double>(2 * (points - 1));
        for (std::size_t k = 0; k < points; ++k) {
            // Integer numerator keeps offsets exactly antisymmetric about the center.
            const double steps = static_cast<double>(2 * static_cast<long long>(k)) -
                                 static_cast<double>(points - 1);
            pts[k] = center_hz + steps * bandwidth_hz / span;
        }
        return FrequencyGrid(center_hz, bandwidth_hz, std::move(pts));
    }

    /// Narrowband when bandwidth is zero, wideband otherwise.
    static FrequencyGrid make(double center_hz, double bandwidth_hz, std::size_t points) {
        if (bandwidth_hz == 0.0) {
            if (points != 1) throw DomainError("FrequencyGrid: narrowband grid has exactly 1 point");
            return narrowband(center_hz);
        }
        return wideband(center_hz, bandwidth_hz, points);
    }

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t k) const { return points_[k]; }
    double center() const { return center_; }
    double bandwidth() const { return bandwidth_; }
    bool is_narrowband() const { return points_.size() == 1; }

    /// Index of the point closest to the center frequency.
    std::size_t center_index() const {
        std::size_t best = 0;
        for (std::size_t k = 1; k < points_.size(); ++k) {
            if (std::abs(points_[k] - center_) < std::abs(points_[best] - center_)) best = k;
        }
        return best;
    }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
    FrequencyGrid(double center, double bandwidth, std::vector<double> pts)
        : center_(center), bandwidth_(bandwidth), points_(std::move(pts)) {}

    double center_;
    double bandwidth_;
    std::vector<double> points_;
};

/// SI magnitude of one evaluated configuration, in dB relative to the
/// transmit signal. magnitude_db is the worst (largest) grid point.
class SiReading {
public:
    explicit SiReading(std::vector<double> per_point_db) : per_point_db_(std::move(per_point_db)) {
        if (per_point_db_.empty()) throw StateError("SiReading: no grid points");
        magnitude_db_ = *std::max_element(per_point_db_.begin(), per_point_db_.end());
    }

    double magnitude_db() const { return magnitude_db_; }
    const std::vector<double>& per_point_db() const& { return per_point_db_; }
    std::vector<double> per_point_db() && { return std::move(per_point_db_); }

    /// Transfer function was exactly zero at every point.
    bool is_perfect_null() const { return magnitude_db_ == kNegInf; }

    /// Received SI power for a given transmit power.
    double power_dbm(double p_tx_dbm) const { return p_tx_dbm + magnitude_db_; }

    friend bool operator==(const SiReading&, const SiReading&) = default;

private:
    std::vector<double> per_point_db_;
    double magnitude_db_ = kNegInf;
};

struct LinkBudget {
    double p_tx_dbm = 10.0;
    double alpha_iso_db = 44.0;
    double p_ris_dbm = 0.0;
    double d_m = 1.0;
    double f_hz = kDefaultCenterHz;
    double g_t_dbi = 0.0;
    double g_r_dbi = 0.0;
    static constexpr double c0_m_per_s = kSpeedOfLight;

    void validate() const {
        if (!(d_m > 0.0)) throw DomainError("LinkBudget: distance must be positive");
        if (!(f_hz > 0.0)) throw DomainError("LinkBudget: frequency must be positive");
    }
};

}  // namespace rissic
