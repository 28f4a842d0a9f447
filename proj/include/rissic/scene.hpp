#pragma once

// Frequency-domain SI channel: direct antenna leakage plus one reflected path
// per surface element,
//
//   H(f) = direct(f) + sum_i h_i(f) * Gamma_i(state_i, f) * g_i(f).
//
// Everything is a complex transfer function relative to a unit-amplitude
// transmit signal; dB only appears when a reading is produced.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rissic/core.hpp"
#include "rissic/link_budget.hpp"
#include "rissic/rng.hpp"
#include "rissic/unit_cell.hpp"

namespace rissic {

using Complex = std::complex<double>;
using Point3 = std::array<double, 3>;

struct GeometryParams {
    std::size_t nx = 16;
    std::size_t ny = 16;
    std::optional<double> pitch_m;           // default: half wavelength at the grid center
    double distance_m = 1.0;                 // antenna pair to surface plane
    double antenna_spacing_m = 0.025;        // tx at -s/2, rx at +s/2 along x
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    std::optional<double> element_gain_dbi;  // default: aperture gain 4*pi*pitch^2/lambda^2
};

struct CalibrationParams {
    double alpha_iso_db = 44.0;
    double p_tx_dbm = 10.0;
    // Excess group delay of the leakage path beyond the line-of-sight antenna
    // separation (cabling, internal coupling, close scatterers).
    double leakage_delay_s = 5.0e-9;
    // Optional additive evaluation floor in dB; disabled when empty.
    std::optional<double> noise_floor_db;
};

struct ClutterParams {
    bool enabled = true;
    double relative_power_db = -20.0;
    std::uint64_t seed = 1;
};

struct GridParams {
    double center_hz = kDefaultCenterHz;
    double bandwidth_hz = 0.0;
    std::size_t points = 1;

    FrequencyGrid make() const { return FrequencyGrid::make(center_hz, bandwidth_hz, points); }
};

struct SceneParams {
    GeometryParams geometry;
    UnitCellModel::Params cell;
    CalibrationParams calibration;
    ClutterParams clutter;
    GridParams grid;

    double wavelength_m() const { return kSpeedOfLight / grid.center_hz; }
    double pitch_m() const { return geometry.pitch_m.value_or(wavelength_m() / 2.0); }
    double element_gain_dbi() const {
        if (geometry.element_gain_dbi) return *geometry.element_gain_dbi;
        const double lambda = wavelength_m();
        const double pitch = pitch_m();
        return 10.0 * std::log10(4.0 * kPi * pitch * pitch / (lambda * lambda));
    }
};

struct SceneGeometry {
    std::vector<Point3> elements;
    Point3 tx{};
    Point3 rx{};
    double pitch_m = 0.0;
};

/// Frozen channel description. Coefficient arrays are indexed
/// [point * N + element].
class Scene {
public:
    Scene(Dims dims, FrequencyGrid grid, std::vector<Complex> direct, std::vector<Complex> h,
          std::vector<Complex> g, UnitCellModel cell)
        : dims_(dims), grid_(std::move(grid)), direct_(std::move(direct)), h_(std::move(h)),
          g_(std::move(g)), cell_(std::move(cell)) {
        const std::size_t k = grid_.size();
        const std::size_t n = dims_.count();
        if (n == 0) throw ConfigurationError("Scene: surface must have at least one element");
        if (direct_.size() != k || h_.size() != k * n || g_.size() != k * n) {
            throw ConfigurationError("Scene: channel arrays do not match grid and surface size");
        }
        gamma_on_.reserve(k);
        gamma_off_.reserve(k);
        for (double f : grid_.points()) {
            gamma_on_.push_back(cell_.reflection(true, f));
            gamma_off_.push_back(cell_.reflection(false, f));
        }
    }

    Dims dims() const { return dims_; }
    std::size_t element_count() const { return dims_.count(); }
    const FrequencyGrid& grid() const { return grid_; }
    const UnitCellModel& cell() const { return cell_; }

    Complex direct(std::size_t point) const { return direct_.at(point); }
    Complex h(std::size_t point, std::size_t element) const { return h_.at(point * dims_.count() + element); }
    Complex g(std::size_t point, std::size_t element) const { return g_.at(point * dims_.count() + element); }
    Complex gamma(bool on, std::size_t point) const { return on ? gamma_on_.at(point) : gamma_off_.at(point); }

    const std::optional<SceneParams>& params() const { return params_; }
    const std::optional<SceneGeometry>& geometry() const { return geometry_; }
    std::optional<double> noise_floor_db() const { return noise_floor_db_; }

    // Set by build_scene; raw-channel scenes carry no provenance.
    void attach_origin(SceneParams params, SceneGeometry geometry) {
        noise_floor_db_ = params.calibration.noise_floor_db;
        params_ = std::move(params);
        geometry_ = std::move(geometry);
    }

    friend bool operator==(const Scene& a, const Scene& b) {
        return a.dims_ == b.dims_ && a.grid_ == b.grid_ && a.direct_ == b.direct_ && a.h_ == b.h_ &&
               a.g_ == b.g_ && a.gamma_on_ == b.gamma_on_ && a.gamma_off_ == b.gamma_off_;
    }

private:
    Dims dims_;
    FrequencyGrid grid_;
    std::vector<Complex> direct_;
    std::vector<Complex> h_;
    std::vector<Complex> g_;
    UnitCellModel cell_;
    std::vector<Complex> gamma_on_;
    std::vector<Complex> gamma_off_;
    std::optional<SceneParams> params_;
    std::optional<SceneGeometry> geometry_;
    std::optional<double> noise_floor_db_;
};

inline Complex composite_transfer(const Scene& scene, const RisConfig& config, std::size_t point) {
    if (config.dims() != scene.dims()) {
        throw ConfigurationError("composite_transfer: config is " + std::to_string(config.dims().nx) + "x" +
                                 std::to_string(config.dims().ny) + " but scene surface is " +
                                 std::to_string(scene.dims().nx) + "x" + std::to_string(scene.dims().ny));
    }
    if (point >= scene.grid().size()) throw ConfigurationError("composite_transfer: grid point out of range");
    const Complex on = scene.gamma(true, point);
    const Complex off = scene.gamma(false, point);
    Complex total = scene.direct(point);
    for (std::size_t i = 0; i < scene.element_count(); ++i) {
        total += scene.h(point, i) * (config[i] ? on : off) * scene.g(point, i);
    }
    return total;
}

inline SiReading si_magnitude_db(const Scene& scene, const RisConfig& config) {
    std::vector<double> per_point;
    per_point.reserve(scene.grid().size());
    const auto floor = scene.noise_floor_db();
    for (std::size_t k = 0; k < scene.grid().size(); ++k) {
        double mag = std::abs(composite_transfer(scene, config, k));
        if (floor) mag = std::hypot(mag, db_to_linear(*floor));
        per_point.push_back(linear_to_db(mag));
    }
    return SiReading(std::move(per_point));
}

namespace detail {

inline double distance(const Point3& a, const Point3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                     (a[2] - b[2]) * (a[2] - b[2]));
}

// Free-space amplitude and propagation phase over `dist` at `f_hz`.
inline Complex free_space(double dist, double f_hz, double g1_dbi, double g2_dbi, double extra_delay_s = 0.0) {
    const double amp = db_to_linear(-fspl_db(dist, f_hz, g1_dbi, g2_dbi));
    const double phase = -2.0 * kPi * f_hz * (dist / kSpeedOfLight + extra_delay_s);
    return std::polar(amp, phase);
}

inline constexpr double kMinSeparation_m = 1e-9;

}  // namespace detail

/// Surface in the z = 0 plane centred on the origin, antennas at
/// (-+spacing/2, 0, distance). Per-element distances are exact (no far-field
/// approximation). Clutter is a frozen complex Gaussian perturbation per path,
/// drawn in the order direct, h_0..h_{N-1}, g_0..g_{N-1}, so the same seed
/// yields the same channel on any frequency grid.
inline Scene build_scene(const SceneParams& params) {
    const auto& geo = params.geometry;
    if (geo.nx < 1 || geo.ny < 1) throw ConfigurationError("build_scene: surface must be at least 1x1");
    if (!(geo.distance_m > 0.0)) throw DomainError("build_scene: antenna-surface distance must be positive");
    if (!(geo.antenna_spacing_m > 0.0)) throw DomainError("build_scene: antenna spacing must be positive");
    if (!(params.calibration.leakage_delay_s >= 0.0)) {
        throw DomainError("build_scene: leakage delay must be non-negative");
    }
    const double pitch = params.pitch_m();
    if (!(pitch > 0.0)) throw DomainError("build_scene: element pitch must be positive");

    const FrequencyGrid grid = params.grid.make();
    const UnitCellModel cell(params.cell, params.grid.center_hz);
    const Dims dims{geo.nx, geo.ny};
    const std::size_t n = dims.count();
    const std::size_t k_points = grid.size();

    SceneGeometry layout;
    layout.pitch_m = pitch;
    layout.tx = {-geo.antenna_spacing_m / 2.0, 0.0, geo.distance_m};
    layout.rx = {geo.antenna_spacing_m / 2.0, 0.0, geo.distance_m};
    layout.elements.reserve(n);
    for (std::size_t x = 0; x < geo.nx; ++x) {
        for (std::size_t y = 0; y < geo.ny; ++y) {
            layout.elements.push_back({(static_cast<double>(x) - (static_cast<double>(geo.nx) - 1.0) / 2.0) * pitch,
                                       (static_cast<double>(y) - (static_cast<double>(geo.ny) - 1.0) / 2.0) * pitch,
                                       0.0});
        }
    }

    std::vector<double> d_tx(n), d_rx(n);
    for (std::size_t i = 0; i < n; ++i) {
        d_tx[i] = detail::distance(layout.tx, layout.elements[i]);
        d_rx[i] = detail::distance(layout.rx, layout.elements[i]);
        if (d_tx[i] < detail::kMinSeparation_m || d_rx[i] < detail::kMinSeparation_m) {
            throw ConfigurationError("build_scene: antenna coincides with surface element " + std::to_string(i));
        }
    }
    const double d_direct = detail::distance(layout.tx, layout.rx);

    // Clutter draws: one multiplicative factor (1 + c z) per path.
    std::vector<Complex> clutter(2 * n + 1, Complex(1.0, 0.0));
    if (params.clutter.enabled) {
        Rng rng(params.clutter.seed);
        const double c = db_to_linear(params.clutter.relative_power_db);
        for (auto& factor : clutter) factor = 1.0 + c * rng.complex_normal();
    }

    const double g_elem = params.element_gain_dbi();
    const double leak_delay = params.calibration.leakage_delay_s;
    auto direct_at = [&](double f) {
        return detail::free_space(d_direct, f, geo.tx_gain_dbi, geo.rx_gain_dbi, leak_delay) * clutter[0];
    };

    // Calibrate the leakage magnitude at the center frequency only.
    const double raw_center = std::abs(direct_at(params.grid.center_hz));
    if (raw_center == 0.0) throw ConfigurationError("build_scene: direct leakage vanishes at the center frequency");
    const double scale = db_to_linear(-params.calibration.alpha_iso_db) / raw_center;

    std::vector<Complex> direct(k_points), h(k_points * n), g(k_points * n);
    for (std::size_t k = 0; k < k_points; ++k) {
        const double f = grid[k];
        direct[k] = direct_at(f) * scale;
        for (std::size_t i = 0; i < n; ++i) {
            h[k * n + i] = detail::free_space(d_tx[i], f, geo.tx_gain_dbi, g_elem) * clutter[1 + i];
            g[k * n + i] = detail::free_space(d_rx[i], f, g_elem, geo.rx_gain_dbi) * clutter[1 + n + i];
        }
    }

    Scene scene(dims, grid, std::move(direct), std::move(h), std::move(g), cell);
    scene.attach_origin(params, std::move(layout));
    return scene;
}

/// Same physical scene rendered on a different frequency grid.
inline Scene rebuild_on_grid(const Scene& scene, const GridParams& grid) {
    if (!scene.params()) {
        throw ConfigurationError("rebuild_on_grid: scene was built from raw channels and cannot be re-rendered");
    }
    SceneParams params = *scene.params();
    params.grid.bandwidth_hz = grid.bandwidth_hz;
    params.grid.points = grid.points;
    // The unit cell and calibration stay anchored at the original center.
    if (grid.center_hz != params.grid.center_hz) {
        throw ConfigurationError("rebuild_on_grid: center frequency must match the scene");
    }
    return build_scene(params);
}

/// Random test scene with Gaussian channels: direct ~ CN(0, N/4), h_i, g_i ~ CN(0, 1).
/// Used for oracle comparisons on small surfaces.
inline Scene random_scene(Dims dims, std::uint64_t seed, const UnitCellModel& cell = UnitCellModel(),
                          const FrequencyGrid& grid = FrequencyGrid::narrowband(kDefaultCenterHz)) {
    Rng rng(seed);
    const std::size_t n = dims.count();
    const std::size_t k_points = grid.size();
    const double direct_scale = std::sqrt(static_cast<double>(n)) / 2.0;
    std::vector<Complex> direct(k_points), h(k_points * n), g(k_points * n);
    const Complex d0 = direct_scale * rng.complex_normal();
    std::vector<Complex> h0(n), g0(n);
    for (auto& v : h0) v = rng.complex_normal();
    for (auto& v : g0) v = rng.complex_normal();
    for (std::size_t k = 0; k < k_points; ++k) {
        direct[k] = d0;
        for (std::size_t i = 0; i < n; ++i) {
            h[k * n + i] = h0[i];
            g[k * n + i] = g0[i];
        }
    }
    return Scene(dims, grid, std::move(direct), std::move(h), std::move(g), cell);
}

}  // namespace rissic
