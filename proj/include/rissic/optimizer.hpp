#pragma once

// Configuration search: the buffer-weighted greedy optimizer, a uniform
// random baseline and an exhaustive oracle for small surfaces.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rissic/backend.hpp"
#include "rissic/core.hpp"
#include "rissic/rng.hpp"

namespace rissic {

/// Per-element ON probability, flat index x * ny + y.
struct ProbabilityMatrix {
    Dims dims;
    std::vector<double> values;

    double at(std::size_t x, std::size_t y) const { return values.at(x * dims.ny + y); }
    static ProbabilityMatrix uniform(Dims dims, double p) { return {dims, std::vector<double>(dims.count(), p)}; }
};

struct TraceRecord {
    std::size_t iteration = 0;
    double evaluated_si_db = 0.0;
    double cumulative_best_si_db = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ConvergenceTrace {
    std::string algorithm;
    std::vector<TraceRecord> records;
    RisConfig best_config;
    SiReading best_reading;
    std::size_t iterations_total = 0;
    double wall_time_s = 0.0;

    std::vector<double> cumulative_best() const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.cumulative_best_si_db);
        return out;
    }
};

/// Appends evaluations and maintains the running minimum and its config.
class TraceRecorder {
public:
    explicit TraceRecorder(std::string algorithm) : algorithm_(std::move(algorithm)) {}

    void record(const RisConfig& config, const SiReading& reading) {
        const double value = reading.magnitude_db();
        if (!best_reading_ || value < best_reading_->magnitude_db()) {
            best_config_ = config;
            best_reading_ = reading;
        }
        records_.push_back({records_.size(), value, best_reading_->magnitude_db()});
    }

    std::size_t size() const { return records_.size(); }

    ConvergenceTrace finish(std::chrono::steady_clock::time_point started) && {
        if (!best_reading_) throw StateError("TraceRecorder: no evaluations recorded");
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        const std::size_t total = records_.size();
        return ConvergenceTrace{std::move(algorithm_), std::move(records_), std::move(*best_config_),
                                std::move(*best_reading_), total, elapsed};
    }

private:
    std::string algorithm_;
    std::vector<TraceRecord> records_;
    std::optional<RisConfig> best_config_;
    std::optional<SiReading> best_reading_;
};

namespace detail {

template <EvaluationBackend Backend>
SiReading evaluate_at(Backend& backend, const RisConfig& config, std::size_t iteration) {
    try {
        return backend.evaluate(config);
    } catch (const BackendError&) {
        throw;
    } catch (const std::exception& e) {
        throw BackendError(iteration, e.what());
    }
}

}  // namespace detail

/// Rank-weighted ON frequency of a best-first sorted buffer. Rank k of B gets
/// weight B - k, and the weighted sum is normalised by B(B+1)/2 so every entry
/// lies in [0, 1].
inline ProbabilityMatrix weighted_activation_ratio(std::span<const RisConfig> sorted_configs) {
    if (sorted_configs.empty()) throw StateError("weighted_activation_ratio: empty buffer");
    const Dims dims = sorted_configs.front().dims();
    const std::uint64_t b = sorted_configs.size();
    std::vector<std::uint64_t> weighted(dims.count(), 0);
    for (std::uint64_t k = 0; k < b; ++k) {
        const RisConfig& cfg = sorted_configs[k];
        if (cfg.dims() != dims) throw ConfigurationError("weighted_activation_ratio: mixed surface dimensions");
        const std::uint64_t w = b - k;
        for (std::size_t i = 0; i < dims.count(); ++i) {
            if (cfg[i]) weighted[i] += w;
        }
    }
    const auto norm = static_cast<double>((b * b + b) / 2);
    ProbabilityMatrix p{dims, std::vector<double>(dims.count())};
    for (std::size_t i = 0; i < dims.count(); ++i) p.values[i] = static_cast<double>(weighted[i]) / norm;
    return p;
}

/// Independent Bernoulli draw per element.
inline RisConfig sample_config(const ProbabilityMatrix& p, Rng& rng) {
    if (p.values.size() != p.dims.count()) throw ConfigurationError("sample_config: matrix size mismatch");
    std::vector<bool> states(p.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const double pi = p.values[i];
        if (!(pi >= 0.0 && pi <= 1.0)) {
            throw DomainError("sample_config: probability " + std::to_string(pi) + " at element " +
                              std::to_string(i) + " outside [0, 1]");
        }
        states[i] = rng.bernoulli(pi);
    }
    return RisConfig(p.dims, std::move(states));
}

inline RisConfig uniform_config(Dims dims, Rng& rng) { return sample_config(ProbabilityMatrix::uniform(dims, 0.5), rng); }

struct GreedyParams {
    std::size_t buffer_size = 100;  // B
    std::size_t stall_limit = 500;  // t_e

    void validate() const {
        if (buffer_size < 2) throw DomainError("greedy: buffer size must be at least 2");
        if (stall_limit < 1) throw DomainError("greedy: termination threshold must be at least 1");
    }
};

/// Sorted elite buffers plus termination bookkeeping.
struct OptimizerState {
    std::vector<double> readings;    // ascending
    std::vector<RisConfig> configs;  // aligned with readings
    std::size_t stall_counter = 0;   // t_c
    std::size_t stall_limit = 0;     // t_e
    std::size_t buffer_size = 0;     // B
    std::size_t iteration = 0;       // evaluations so far, initialization included

    double best() const { return readings.front(); }
    double worst() const { return readings.back(); }
    bool done() const { return stall_counter >= stall_limit; }
};

struct StepOutcome {
    RisConfig candidate;
    SiReading reading;
    bool stalled = false;   // candidate did not strictly beat the buffer best
    bool inserted = false;  // candidate replaced the buffer's worst entry
};

namespace detail {

// Stable re-sort of both buffers by reading.
inline void sort_buffers(OptimizerState& s) {
    std::vector<std::size_t> order(s.readings.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.readings[a] < s.readings[b]; });
    std::vector<double> readings;
    std::vector<RisConfig> configs;
    readings.reserve(order.size());
    configs.reserve(order.size());
    for (std::size_t idx : order) {
        readings.push_back(s.readings[idx]);
        configs.push_back(std::move(s.configs[idx]));
    }
    s.readings = std::move(readings);
    s.configs = std::move(configs);
}

}  // namespace detail

/// Fills the buffer with B configurations drawn with P(ON) = 1/2 and sorts it.
template <EvaluationBackend Backend>
OptimizerState initialize_greedy(Backend& backend, const GreedyParams& params, Rng& rng,
                                 TraceRecorder* recorder = nullptr) {
    params.validate();
    OptimizerState s;
    s.stall_limit = params.stall_limit;
    s.buffer_size = params.buffer_size;
    s.readings.reserve(params.buffer_size);
    s.configs.reserve(params.buffer_size);
    const Dims dims = backend.dims();
    for (std::size_t q = 0; q < params.buffer_size; ++q) {
        RisConfig cfg = uniform_config(dims, rng);
        SiReading reading = detail::evaluate_at(backend, cfg, s.iteration);
        if (recorder) recorder->record(cfg, reading);
        s.readings.push_back(reading.magnitude_db());
        s.configs.push_back(std::move(cfg));
        ++s.iteration;
    }
    detail::sort_buffers(s);
    return s;
}

/// One main-loop iteration: sample a candidate from the weighted buffer,
/// update the stall counter, and replace the worst entry if beaten.
///
/// Only a strict improvement on the buffer best resets the counter; a tie
/// counts as a stall. A candidate equal to the worst entry is not inserted.
template <EvaluationBackend Backend>
StepOutcome greedy_step(OptimizerState& s, Backend& backend, Rng& rng) {
    if (s.readings.empty()) throw StateError("greedy_step: buffer not initialized");
    const ProbabilityMatrix p = weighted_activation_ratio(s.configs);
    RisConfig candidate = sample_config(p, rng);
    SiReading reading = detail::evaluate_at(backend, candidate, s.iteration);
    ++s.iteration;
    const double value = reading.magnitude_db();

    StepOutcome out{candidate, reading, false, false};
    if (value < s.best()) {
        s.stall_counter = 0;
    } else {
        ++s.stall_counter;
        out.stalled = true;
    }
    if (value < s.worst()) {
        s.readings.back() = value;
        s.configs.back() = std::move(candidate);
        detail::sort_buffers(s);
        out.inserted = true;
    }
    return out;
}

template <EvaluationBackend Backend>
ConvergenceTrace greedy_optimize(Backend& backend, const GreedyParams& params, Rng& rng) {
    const auto started = std::chrono::steady_clock::now();
    TraceRecorder recorder("greedy");
    OptimizerState state = initialize_greedy(backend, params, rng, &recorder);
    while (!state.done()) {
        StepOutcome step = greedy_step(state, backend, rng);
        recorder.record(step.candidate, step.reading);
    }
    return std::move(recorder).finish(started);
}

template <EvaluationBackend Backend>
ConvergenceTrace random_search(Backend& backend, std::size_t iterations, Rng& rng) {
    if (iterations < 1) throw DomainError("random_search: need at least one iteration");
    const auto started = std::chrono::steady_clock::now();
    TraceRecorder recorder("random");
    const Dims dims = backend.dims();
    for (std::size_t it = 0; it < iterations; ++it) {
        RisConfig cfg = uniform_config(dims, rng);
        SiReading reading = detail::evaluate_at(backend, cfg, it);
        recorder.record(cfg, reading);
    }
    return std::move(recorder).finish(started);
}

inline constexpr std::size_t kExhaustiveLimit = 20;

struct ExhaustiveResult {
    RisConfig best_config;
    SiReading best_reading;
    std::size_t evaluations = 0;
};

/// Config number m in lexicographic order: element i (flat index) is bit
/// N-1-i of m, so element 0 is the most significant.
inline RisConfig config_from_index(Dims dims, std::uint64_t m) {
    const std::size_t n = dims.count();
    std::vector<bool> states(n);
    for (std::size_t i = 0; i < n; ++i) states[i] = ((m >> (n - 1 - i)) & 1u) != 0;
    return RisConfig(dims, std::move(states));
}

/// Global minimum over all 2^N configurations; ties go to the lexicographically
/// smallest configuration.
template <EvaluationBackend Backend>
ExhaustiveResult exhaustive_search(Backend& backend) {
    const Dims dims = backend.dims();
    const std::size_t n = dims.count();
    if (n > kExhaustiveLimit) {
        throw DomainError("exhaustive search is limited to N <= " + std::to_string(kExhaustiveLimit) +
                          " elements; surface has N = " + std::to_string(n));
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    std::optional<ExhaustiveResult> best;
    for (std::uint64_t m = 0; m < total; ++m) {
        RisConfig cfg = config_from_index(dims, m);
        SiReading reading = detail::evaluate_at(backend, cfg, static_cast<std::size_t>(m));
        if (!best || reading.magnitude_db() < best->best_reading.magnitude_db()) {
            best = ExhaustiveResult{std::move(cfg), std::move(reading), 0};
        }
    }
    best->evaluations = static_cast<std::size_t>(total);
    return std::move(*best);
}

}  // namespace rissic
