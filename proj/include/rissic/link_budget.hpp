#pragma once

// Link-budget identities in dB / dBm. These are reporting helpers; the
// simulator's ground truth for cancellation is the complex channel sum.

#include <cmath>

#include "rissic/core.hpp"

namespace rissic {

/// Free-space path loss in dB (positive = loss), net of antenna gains.
inline double fspl_db(double d_m, double f_hz, double g_t_dbi = 0.0, double g_r_dbi = 0.0) {
    if (!(d_m > 0.0)) throw DomainError("fspl_db: distance must be positive");
    if (!(f_hz > 0.0)) throw DomainError("fspl_db: frequency must be positive");
    return 20.0 * std::log10(d_m) + 20.0 * std::log10(f_hz) +
           20.0 * std::log10(4.0 * kPi / kSpeedOfLight) - g_t_dbi - g_r_dbi;
}

inline double fspl_db(const LinkBudget& b) {
    b.validate();
    return fspl_db(b.d_m, b.f_hz, b.g_t_dbi, b.g_r_dbi);
}

/// Received power from a distant node: P_tx minus free-space loss.
inline double received_power_dbm(const LinkBudget& b) { return b.p_tx_dbm - fspl_db(b); }

/// SI power leaking through the antenna isolation.
inline double leaked_power_dbm(double p_tx_dbm, double alpha_iso_db) {
    return p_tx_dbm - alpha_iso_db;
}

/// Idealized residual SI when the surface contributes P_RIS of cancellation.
inline double residual_si_dbm(double p_tx_dbm, double alpha_iso_db, double p_ris_dbm) {
    return p_tx_dbm - alpha_iso_db - p_ris_dbm;
}

inline double residual_si_dbm(const LinkBudget& b) {
    return residual_si_dbm(b.p_tx_dbm, b.alpha_iso_db, b.p_ris_dbm);
}

}  // namespace rissic
