#pragma once

#include <string>
#include <vector>

#include "lossagent/image.hpp"
#include "lossagent/weights.hpp"

namespace lossagent {

// The ordered set of M differentiable loss terms whose weighted sum trains
// the process.
//
// Built-in terms (all reduced by mean over batch and pixels, or over the
// batch's difference elements for the stencil terms):
//   l1          mean |pred - target|
//   mse         mean (pred - target)^2
//   edge        mean |d(pred) - d(target)| over first-order forward
//               differences in x and y; structure proxy
//   tv          total variation of the prediction; smoothness proxy,
//               needs no reference
//   tv_diff     total variation of (pred - target); vanishes at zero residual
//   ssim_proxy  1 - SSIM from per-image global statistics
class LossRepository {
  public:
    // Every id the framework knows how to evaluate and differentiate.
    static const std::vector<LossTerm>& known_terms();

    // Default three-term repository: {l1, edge, tv}.
    static std::vector<std::string> default_term_ids();
    // Extended five-term repository: {l1, mse, edge, tv, ssim_proxy}.
    static std::vector<std::string> extended_term_ids();

    // Throws LookupError on an unknown id, ConfigError on duplicates.
    static LossRepository from_ids(const std::vector<std::string>& ids);

    const std::vector<LossTerm>& terms() const { return terms_; }
    int size() const { return static_cast<int>(terms_.size()); }
    std::vector<std::string> term_ids() const;
    bool any_requires_reference() const;

    // One value per term for this batch; deterministic for fixed inputs.
    LossVector evaluate(const ImageBatch& prediction, const ImageBatch& target) const;

    // d(term loss)/d(prediction), same shape as the prediction.
    ImageBatch gradient(const std::string& term_id, const ImageBatch& prediction,
                        const ImageBatch& target) const;

    // sum_m w_m * d(L_m)/d(prediction); what the trainer backpropagates.
    ImageBatch weighted_gradient(const LossWeights& weights, const ImageBatch& prediction,
                                 const ImageBatch& target) const;

  private:
    std::vector<LossTerm> terms_;
};

}  // namespace lossagent
