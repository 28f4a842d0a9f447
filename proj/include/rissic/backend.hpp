#pragma once

#include <concepts>
#include <memory>
#include <stdexcept>
#include <utility>

#include "rissic/core.hpp"
#include "rissic/scene.hpp"

namespace rissic {

/// Anything that can apply a configuration and report the resulting SI.
/// A simulated backend is deterministic; a hardware backend may be noisy.
template <class B>
concept EvaluationBackend = requires(B& backend, const RisConfig& config) {
    { backend.evaluate(config) } -> std::convertible_to<SiReading>;
    { backend.dims() } -> std::convertible_to<Dims>;
    { backend.grid() } -> std::convertible_to<const FrequencyGrid&>;
};

/// Evaluation failure surfaced by an optimizer, tagged with the iteration.
struct BackendError : std::runtime_error {
    BackendError(std::size_t iteration, const std::string& what)
        : std::runtime_error("evaluation failed at iteration " + std::to_string(iteration) + ": " + what),
          iteration(iteration) {}
    std::size_t iteration;
};

class SimulatedBackend {
public:
    explicit SimulatedBackend(std::shared_ptr<const Scene> scene) : scene_(std::move(scene)) {
        if (!scene_) throw StateError("SimulatedBackend: null scene");
    }
    explicit SimulatedBackend(Scene scene) : SimulatedBackend(std::make_shared<const Scene>(std::move(scene))) {}

    SiReading evaluate(const RisConfig& config) {
        ++evaluations_;
        return si_magnitude_db(*scene_, config);
    }
    Dims dims() const { return scene_->dims(); }
    const FrequencyGrid& grid() const { return scene_->grid(); }
    const Scene& scene() const { return *scene_; }
    std::size_t evaluations() const { return evaluations_; }

private:
    std::shared_ptr<const Scene> scene_;
    std::size_t evaluations_ = 0;
};

static_assert(EvaluationBackend<SimulatedBackend>);

}  // namespace rissic
