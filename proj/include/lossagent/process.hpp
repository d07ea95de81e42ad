#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lossagent/image.hpp"
#include "lossagent/loss_repository.hpp"
#include "lossagent/weights.hpp"

namespace lossagent {

// Snapshot of the trainable process at a stage boundary. Stage transitions
// return fresh values; a state is never mutated in place.
struct ProcessState {
    std::vector<double> parameters;
    int stage_index = 0;
    std::uint64_t rng_state = 0;
    std::int64_t iteration_count = 0;

    bool operator==(const ProcessState& other) const = default;
};

struct StageReport {
    double mean_composed_loss = 0.0;
    LossVector mean_per_term_loss;
    int steps_taken = 0;
};

// Differentiable surrogate used by the discouraged objective-as-loss mode:
// the named objective is folded straight into the training loss.
struct ObjectiveAsLoss {
    std::string objective;  // sharpness | smoothness | psnr | neg_l1
    double weight = 1.0;
};

struct TrainOptions {
    double learning_rate = 1e-4;
    std::optional<ObjectiveAsLoss> objective_as_loss;
};

// A single zero-padded k x k convolution, no bias, no nonlinearity, trained
// by full-batch SGD over a fixed pool. Small enough that every gradient is
// hand-derivable, yet the fidelity / structure / smoothness trade-off the
// weights control is real.
class ToyRestorer {
  public:
    ToyRestorer(int kernel_size, LossRepository repository, TrainOptions options);

    // Identity kernel (centre tap 1), stage 0.
    ProcessState initial_state(std::uint64_t seed) const;

    // Runs `iterations` full-batch SGD steps minimizing
    // compose(weights, losses(conv(pool_degraded), pool_clean)).
    // Throws TrainingDivergedError when the composed loss stops being finite.
    std::pair<ProcessState, StageReport> train_stage(const ProcessState& state,
                                                     const LossWeights& weights, int iterations,
                                                     const ImageBatch& pool_degraded,
                                                     const ImageBatch& pool_clean) const;

    ImageBatch infer(const ProcessState& state, const ImageBatch& degraded) const;

    int kernel_size() const { return kernel_size_; }
    const LossRepository& repository() const { return repository_; }

  private:
    int kernel_size_;
    LossRepository repository_;
    TrainOptions options_;
};

// Analytic score-as-function-of-weights process: training is a no-op state
// bump and feedback comes from a concave surface, so policies can be checked
// against exact brute-force search.
class ResponseSurface {
  public:
    explicit ResponseSurface(std::vector<double> optimum);

    ProcessState initial_state(std::uint64_t seed) const;
    std::pair<ProcessState, StageReport> advance_stage(const ProcessState& state) const;

    // 1 - ||w_last - w*||^2 for the latest weights in the history.
    double surface_feedback(const std::vector<LossWeights>& history) const;
    double score_at(const LossWeights& weights) const;

    const std::vector<double>& optimum() const { return optimum_; }
    int dimensions() const { return static_cast<int>(optimum_.size()); }

  private:
    std::vector<double> optimum_;
};

// Differentiable objective surrogates for the objective-as-loss mode.
// Exposed for gradient testing.
double objective_surrogate_loss(const std::string& objective, const ImageBatch& prediction,
                                const ImageBatch& target);
ImageBatch objective_surrogate_gradient(const std::string& objective, const ImageBatch& prediction,
                                        const ImageBatch& target);

}  // namespace lossagent
