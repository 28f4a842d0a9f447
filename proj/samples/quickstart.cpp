// Build the default scene, run one greedy optimization and print the result.

#include <cstdio>

#include "rissic/rissic.hpp"

int main() {
    using namespace rissic;

    const SceneParams params;  // 16 x 16 surface, 1 m, 5.385 GHz, -44 dB leakage
    SimulatedBackend backend(build_scene(params));

    Rng rng(7);
    const ConvergenceTrace trace = greedy_optimize(backend, GreedyParams{}, rng);

    std::printf("leakage before: %.2f dB\n", -params.calibration.alpha_iso_db);
    std::printf("best SI:        %.2f dB after %zu evaluations\n", trace.best_reading.magnitude_db(),
                trace.iterations_total);
    std::printf("residual power: %.2f dBm at %.0f dBm transmit\n",
                trace.best_reading.power_dbm(params.calibration.p_tx_dbm), params.calibration.p_tx_dbm);
    std::fputs(format_config(trace.best_config).c_str(), stdout);
}
