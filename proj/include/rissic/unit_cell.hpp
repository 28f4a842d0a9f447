#pragma once

#include <cmath>
#include <complex>

#include "rissic/core.hpp"

namespace rissic {

/// Two-state reflection coefficient of one surface element.
///
/// Each state is a single-pole resonator with all-pass phase response
///   Gamma(f) = a * (1 - jQ delta) / (1 + jQ delta),  delta = f/f_r - f_r/f,
/// so |Gamma| = a everywhere and the phase sweeps through zero at the
/// resonance f_r. Switching the diode moves the resonance; the ON resonance
/// sits above the center frequency and the OFF resonance below it, placed
/// symmetrically (in ratio) so that arg Gamma_on - arg Gamma_off equals the
/// requested phase difference exactly at the center frequency.
class UnitCellModel {
public:
    struct Params {
        double amplitude_on = 0.8;
        double amplitude_off = 0.8;
        double phase_difference_deg = 180.0;
        double quality_factor = 5.0;
    };

    UnitCellModel(const Params& p, double center_hz) : params_(p), center_hz_(center_hz) {
        auto in_unit = [](double a) { return a >= 0.0 && a <= 1.0; };
        if (!in_unit(p.amplitude_on) || !in_unit(p.amplitude_off)) {
            throw DomainError("UnitCellModel: reflection amplitudes must lie in [0, 1]");
        }
        if (!(p.quality_factor > 0.0)) throw DomainError("UnitCellModel: quality factor must be positive");
        if (!(p.phase_difference_deg > 0.0 && p.phase_difference_deg < 360.0)) {
            throw DomainError("UnitCellModel: phase difference must lie in (0, 360) degrees");
        }
        if (!(center_hz > 0.0)) throw DomainError("UnitCellModel: center frequency must be positive");

        // With f_on = fc * r and f_off = fc / r the phase difference at fc is
        // 4 * atan(Q * (r - 1/r)); solve Q r^2 - t r - Q = 0 for r > 1.
        const double t = std::tan(p.phase_difference_deg * kPi / 180.0 / 4.0);
        const double q = p.quality_factor;
        const double ratio = (t + std::sqrt(t * t + 4.0 * q * q)) / (2.0 * q);
        resonance_on_hz_ = center_hz * ratio;
        resonance_off_hz_ = center_hz / ratio;
    }

    explicit UnitCellModel(double center_hz = kDefaultCenterHz) : UnitCellModel(Params{}, center_hz) {}

    std::complex<double> reflection(bool on, double f_hz) const {
        const double fr = on ? resonance_on_hz_ : resonance_off_hz_;
        const double a = on ? params_.amplitude_on : params_.amplitude_off;
        const double qd = params_.quality_factor * (f_hz / fr - fr / f_hz);
        return a * std::complex<double>(1.0, -qd) / std::complex<double>(1.0, qd);
    }

    const Params& params() const { return params_; }
    double center_hz() const { return center_hz_; }
    double resonance_on_hz() const { return resonance_on_hz_; }
    double resonance_off_hz() const { return resonance_off_hz_; }

private:
    Params params_;
    double center_hz_;
    double resonance_on_hz_ = 0.0;
    double resonance_off_hz_ = 0.0;
};

inline std::complex<double> element_reflection(bool state, double f_hz, const UnitCellModel& cell) {
    return cell.reflection(state, f_hz);
}

}  // namespace rissic
