#include "lossagent/process.hpp"

#include <algorithm>
#include <cmath>

#include "lossagent/errors.hpp"
#include "lossagent/kernels.hpp"
#include "lossagent/rng.hpp"
#include "stencil_common.hpp"

namespace lossagent {

namespace {

// loss = -mean_n var(laplacian(pred_n)); pushing it down sharpens outputs.
double neg_lap_var_loss(const ImageBatch& p) {
    if (p.count == 0) return 0.0;
    double total = 0.0;
    for (int n = 0; n < p.count; ++n) {
        total += detail::variance(detail::laplacian_interior(p.image(n), p.height, p.width));
    }
    return -total / static_cast<double>(p.count);
}

void neg_lap_var_grad(const ImageBatch& p, ImageBatch& g) {
    if (p.count == 0 || p.height < 3 || p.width < 3) return;
    const int h = p.height;
    const int w = p.width;
    const std::size_t m = static_cast<std::size_t>(h - 2) * (w - 2);
    if (m < 2) return;
    for (int n = 0; n < p.count; ++n) {
        const std::vector<double> lap = detail::laplacian_interior(p.image(n), h, w);
        const double mean =
            kernels::reduce_sum(lap.data(), lap.size()) / static_cast<double>(lap.size());
        double* grad = g.image(n);
        // d(-var)/d lap_k = -2 (lap_k - mean) / m, then transpose of the
        // Laplacian stencil scatters it back onto the pixels.
        const double scale = -2.0 / (static_cast<double>(m) * p.count);
        for (int i = 1; i + 1 < h; ++i) {
            for (int j = 1; j + 1 < w; ++j) {
                const double gy =
                    scale * (lap[static_cast<std::size_t>(i - 1) * (w - 2) + (j - 1)] - mean);
                const std::size_t idx = static_cast<std::size_t>(i) * w + j;
                grad[idx - w] += gy;
                grad[idx + w] += gy;
                grad[idx - 1] += gy;
                grad[idx + 1] += gy;
                grad[idx] -= 4.0 * gy;
            }
        }
    }
}

// Objectives whose surrogate is an existing repository term.
const char* surrogate_term_id(const std::string& objective) {
    if (objective == "smoothness") return "tv";
    if (objective == "psnr") return "mse";
    if (objective == "neg_l1") return "l1";
    return nullptr;
}

}  // namespace

double objective_surrogate_loss(const std::string& objective, const ImageBatch& prediction,
                                const ImageBatch& target) {
    if (objective == "sharpness") return neg_lap_var_loss(prediction);
    if (const char* term = surrogate_term_id(objective)) {
        return LossRepository::from_ids({term}).evaluate(prediction, target)[0];
    }
    throw LookupError("no differentiable surrogate for objective: " + objective);
}

ImageBatch objective_surrogate_gradient(const std::string& objective, const ImageBatch& prediction,
                                        const ImageBatch& target) {
    if (objective == "sharpness") {
        ImageBatch g(prediction.count, prediction.height, prediction.width);
        neg_lap_var_grad(prediction, g);
        return g;
    }
    if (const char* term = surrogate_term_id(objective)) {
        return LossRepository::from_ids({term}).gradient(term, prediction, target);
    }
    throw LookupError("no differentiable surrogate for objective: " + objective);
}

ToyRestorer::ToyRestorer(int kernel_size, LossRepository repository, TrainOptions options)
    : kernel_size_(kernel_size), repository_(std::move(repository)), options_(options) {
    if (kernel_size < 1 || kernel_size % 2 == 0) {
        throw ConfigError("convolution kernel size must be an odd integer >= 1");
    }
}

ProcessState ToyRestorer::initial_state(std::uint64_t seed) const {
    ProcessState state;
    state.parameters.assign(static_cast<std::size_t>(kernel_size_) * kernel_size_, 0.0);
    const int c = kernel_size_ / 2;
    state.parameters[static_cast<std::size_t>(c) * kernel_size_ + c] = 1.0;
    state.rng_state = derive_seed(seed, "process");
    return state;
}

ImageBatch ToyRestorer::infer(const ProcessState& state, const ImageBatch& degraded) const {
    for (double v : state.parameters) {
        if (!std::isfinite(v)) throw NumericError("process parameters are not finite");
    }
    ImageBatch out(degraded.count, degraded.height, degraded.width);
    for (int n = 0; n < degraded.count; ++n) {
        kernels::conv2d_same(degraded.image(n), degraded.height, degraded.width,
                             state.parameters.data(), kernel_size_, out.image(n));
    }
    return out;
}

std::pair<ProcessState, StageReport> ToyRestorer::train_stage(const ProcessState& state,
                                                              const LossWeights& weights,
                                                              int iterations,
                                                              const ImageBatch& pool_degraded,
                                                              const ImageBatch& pool_clean) const {
    if (iterations < 0) throw ConfigError("iterations must be >= 0");
    if (!pool_degraded.same_shape(pool_clean)) {
        throw DimensionError("training pool degraded/clean shapes differ");
    }
    if (weights.size() != repository_.size()) {
        throw DimensionError("weight vector does not match the loss repository");
    }

    ProcessState next = state;
    StageReport report;
    report.mean_per_term_loss.values.assign(static_cast<std::size_t>(repository_.size()), 0.0);

    const std::size_t kparams = next.parameters.size();
    std::vector<double> kernel_grad(kparams);

    const int evals = std::max(iterations, 1);
    for (int step = 0; step < evals; ++step) {
        const ImageBatch pred = infer(next, pool_degraded);
        const LossVector losses = repository_.evaluate(pred, pool_clean);
        double total = compose(weights, losses);
        if (options_.objective_as_loss) {
            total += options_.objective_as_loss->weight *
                     objective_surrogate_loss(options_.objective_as_loss->objective, pred,
                                              pool_clean);
        }
        if (!std::isfinite(total)) {
            throw TrainingDivergedError(state.stage_index, step,
                                        "training diverged: non-finite composed loss at stage " +
                                            std::to_string(state.stage_index) + ", step " +
                                            std::to_string(step));
        }

        report.mean_composed_loss += total;
        for (int m = 0; m < repository_.size(); ++m) {
            report.mean_per_term_loss.values[static_cast<std::size_t>(m)] += losses[m];
        }

        if (iterations == 0) break;  // report-only evaluation, no step

        ImageBatch out_grad = repository_.weighted_gradient(weights, pred, pool_clean);
        if (options_.objective_as_loss) {
            const ImageBatch extra = objective_surrogate_gradient(
                options_.objective_as_loss->objective, pred, pool_clean);
            kernels::axpy(options_.objective_as_loss->weight, extra.data.data(),
                          out_grad.data.data(), out_grad.size());
        }

        std::fill(kernel_grad.begin(), kernel_grad.end(), 0.0);
        for (int n = 0; n < pool_degraded.count; ++n) {
            kernels::conv2d_kernel_grad(pool_degraded.image(n), pool_degraded.height,
                                        pool_degraded.width, out_grad.image(n), kernel_size_,
                                        kernel_grad.data());
        }
        kernels::axpy(-options_.learning_rate, kernel_grad.data(), next.parameters.data(),
                      kparams);
    }

    const double denom = static_cast<double>(iterations == 0 ? 1 : iterations);
    report.mean_composed_loss /= denom;
    for (double& v : report.mean_per_term_loss.values) v /= denom;
    report.steps_taken = iterations;

    next.stage_index = state.stage_index + 1;
    next.iteration_count = state.iteration_count + iterations;
    return {std::move(next), std::move(report)};
}

ResponseSurface::ResponseSurface(std::vector<double> optimum) : optimum_(std::move(optimum)) {
    if (optimum_.empty()) throw ConfigError("response surface needs a non-empty optimum");
}

ProcessState ResponseSurface::initial_state(std::uint64_t seed) const {
    ProcessState state;
    state.rng_state = derive_seed(seed, "process");
    return state;
}

std::pair<ProcessState, StageReport> ResponseSurface::advance_stage(
    const ProcessState& state) const {
    ProcessState next = state;
    next.stage_index = state.stage_index + 1;
    StageReport report;
    return {std::move(next), std::move(report)};
}

double ResponseSurface::score_at(const LossWeights& weights) const {
    if (weights.size() != dimensions()) {
        throw DimensionError("surface expects " + std::to_string(dimensions()) +
                             " weights, got " + std::to_string(weights.size()));
    }
    double dist_sq = 0.0;
    for (int m = 0; m < dimensions(); ++m) {
        const double d = weights[m] - optimum_[static_cast<std::size_t>(m)];
        dist_sq += d * d;
    }
    return 1.0 - dist_sq;
}

double ResponseSurface::surface_feedback(const std::vector<LossWeights>& history) const {
    if (history.empty()) throw ConfigError("surface feedback needs a non-empty weight history");
    return score_at(history.back());
}

}  // namespace lossagent
