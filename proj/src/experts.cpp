#include "lossagent/experts.hpp"

#include <cmath>

#include "lossagent/errors.hpp"
#include "lossagent/format.hpp"
#include "lossagent/kernels.hpp"
#include "stencil_common.hpp"

namespace lossagent {

FeedbackKind feedback_kind_from_string(const std::string& s) {
    if (s == "score") return FeedbackKind::score;
    if (s == "textual") return FeedbackKind::textual;
    throw ConfigError("unknown feedback kind: " + s);
}

std::string feedback_kind_to_string(FeedbackKind k) {
    return k == FeedbackKind::score ? "score" : "textual";
}

Direction direction_from_string(const std::string& s) {
    if (s == "higher_better") return Direction::higher_better;
    if (s == "lower_better") return Direction::lower_better;
    throw ConfigError("unknown direction: " + s);
}

std::string direction_to_string(Direction d) {
    return d == Direction::higher_better ? "higher_better" : "lower_better";
}

namespace {

constexpr double kPsnrCap = 100.0;

double image_mse(const double* out, const double* ref, std::size_t n) {
    return kernels::reduce_sq_diff(out, ref, n) / static_cast<double>(n);
}

double image_psnr(const double* out, const double* ref, std::size_t n) {
    const double mse = image_mse(out, ref, n);
    if (mse <= 0.0) return kPsnrCap;
    const double psnr = 10.0 * std::log10(1.0 / mse);  // MAX = 1 on the [0,1] scale
    return psnr > kPsnrCap ? kPsnrCap : psnr;
}

double image_neg_l1(const double* out, const double* ref, std::size_t n) {
    return -kernels::reduce_abs_diff(out, ref, n) / static_cast<double>(n);
}

double image_sharpness(const double* out, int h, int w) {
    return detail::variance(detail::laplacian_interior(out, h, w));
}

double image_neg_tv(const double* out, int h, int w) {
    const std::size_t hh = h;
    const std::size_t ww = w;
    const std::size_t count = hh * (ww - 1) + (hh - 1) * ww;
    if (count == 0) return 0.0;
    double total = 0.0;
    for (int i = 0; i < h; ++i) {
        const double* row = out + static_cast<std::size_t>(i) * w;
        for (int j = 0; j + 1 < w; ++j) total += std::fabs(row[j + 1] - row[j]);
        if (i + 1 < h) total += kernels::reduce_abs_diff(row + w, row, ww);
    }
    return -total / static_cast<double>(count);
}

struct ScoreExpert {
    const char* id;
    bool needs_reference;
};

constexpr ScoreExpert kScoreExperts[] = {
    {"psnr", true},
    {"neg_l1", true},
    {"sharpness", false},
    {"smoothness", false},
};

const ScoreExpert* find_score_expert(const std::string& id) {
    for (const ScoreExpert& e : kScoreExperts) {
        if (id == e.id) return &e;
    }
    return nullptr;
}

}  // namespace

ExpertRegistry::ExpertRegistry(TextCriticConfig critic) : critic_(critic) {
    if (critic_.range_high <= critic_.range_low) {
        throw ConfigError("text critic score range must have range_high > range_low");
    }
    if (critic_.max_chars_per_image < 16) {
        throw ConfigError("text critic per-image cap is too small to be useful");
    }
}

std::vector<std::string> ExpertRegistry::score_expert_ids() {
    std::vector<std::string> out;
    for (const ScoreExpert& e : kScoreExperts) out.emplace_back(e.id);
    return out;
}

bool ExpertRegistry::is_score_expert(const std::string& expert_id) const {
    return find_score_expert(expert_id) != nullptr;
}

bool ExpertRegistry::is_textual_expert(const std::string& expert_id) const {
    return expert_id == "text_critic";
}

bool ExpertRegistry::needs_reference(const std::string& expert_id) const {
    if (const ScoreExpert* e = find_score_expert(expert_id)) return e->needs_reference;
    if (is_textual_expert(expert_id)) return true;  // PSNR proxy drives the bands
    throw LookupError("unknown expert: " + expert_id);
}

Feedback ExpertRegistry::score(const std::string& expert_id, const ImageBatch& outputs,
                               const ImageBatch* references) const {
    const ScoreExpert* expert = find_score_expert(expert_id);
    if (!expert) throw LookupError("unknown score expert: " + expert_id);
    if (expert->needs_reference) {
        if (!references) {
            throw ConfigError("expert '" + expert_id + "' is full-reference but no references given");
        }
        if (!outputs.same_shape(*references)) {
            throw DimensionError("outputs and references differ in shape");
        }
    }

    Feedback fb;
    fb.kind = FeedbackKind::score;
    fb.per_image_scores.reserve(static_cast<std::size_t>(outputs.count));
    const std::size_t n = outputs.pixels_per_image();
    for (int i = 0; i < outputs.count; ++i) {
        double s = 0.0;
        if (expert_id == "psnr") {
            s = image_psnr(outputs.image(i), references->image(i), n);
        } else if (expert_id == "neg_l1") {
            s = image_neg_l1(outputs.image(i), references->image(i), n);
        } else if (expert_id == "sharpness") {
            s = image_sharpness(outputs.image(i), outputs.height, outputs.width);
        } else {  // smoothness
            s = image_neg_tv(outputs.image(i), outputs.height, outputs.width);
        }
        fb.per_image_scores.push_back(s);
    }
    fb.aggregate_score =
        outputs.count == 0
            ? 0.0
            : kernels::reduce_sum(fb.per_image_scores.data(), fb.per_image_scores.size()) /
                  static_cast<double>(outputs.count);
    return fb;
}

const char* quality_band(double proxy_score, double range_low, double range_high) {
    const double span = range_high - range_low;
    if (proxy_score > range_low + 0.75 * span) return "excellent";
    if (proxy_score > range_low + 0.50 * span) return "good";
    if (proxy_score > range_low + 0.25 * span) return "fair";
    return "poor";
}

Feedback ExpertRegistry::textual_critique(const std::string& expert_id, const ImageBatch& outputs,
                                          const ImageBatch* references) const {
    if (!is_textual_expert(expert_id)) throw LookupError("unknown textual expert: " + expert_id);
    if (!references) {
        throw ConfigError("text_critic needs references for its quality proxy");
    }
    if (!outputs.same_shape(*references)) {
        throw DimensionError("outputs and references differ in shape");
    }

    Feedback fb;
    fb.kind = FeedbackKind::textual;
    std::vector<std::string> parts;
    const std::size_t n = outputs.pixels_per_image();
    for (int i = 0; i < outputs.count; ++i) {
        const double proxy = image_psnr(outputs.image(i), references->image(i), n);
        const char* band = quality_band(proxy, critic_.range_low, critic_.range_high);
        std::string text = "image " + std::to_string(i + 1) + ": restoration quality is " + band +
                           " (fidelity proxy " + fmt4(proxy) + ")";
        if (static_cast<int>(text.size()) > critic_.max_chars_per_image) {
            text.resize(static_cast<std::size_t>(critic_.max_chars_per_image));
        }
        fb.per_image_texts.push_back(text);
        parts.push_back(std::move(text));
    }
    fb.aggregate_text = join(parts, " | ");
    return fb;
}

double improvement(const Feedback& previous, const Feedback& current, const ObjectiveSpec& spec) {
    if (previous.kind != FeedbackKind::score || current.kind != FeedbackKind::score ||
        spec.kind != FeedbackKind::score) {
        throw UnsupportedKindError("improvement is only defined for score feedback");
    }
    const double delta = current.aggregate_score - previous.aggregate_score;
    return spec.direction == Direction::higher_better ? delta : -delta;
}

}  // namespace lossagent
