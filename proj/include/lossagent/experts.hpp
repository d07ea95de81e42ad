#pragma once

#include <string>
#include <vector>

#include "lossagent/image.hpp"

namespace lossagent {

enum class FeedbackKind { score, textual };
enum class Direction { higher_better, lower_better };

FeedbackKind feedback_kind_from_string(const std::string& s);
std::string feedback_kind_to_string(FeedbackKind k);
Direction direction_from_string(const std::string& s);
std::string direction_to_string(Direction d);

// One optimization objective: which expert evaluates it and which way is up.
struct ObjectiveSpec {
    std::string name;
    std::string expert_id;
    FeedbackKind kind = FeedbackKind::score;
    Direction direction = Direction::higher_better;  // score objectives only
    bool needs_reference = false;

    bool operator==(const ObjectiveSpec& other) const = default;
};

// What an expert says about one stage's outputs on the test panel.
struct Feedback {
    std::string objective_name;
    FeedbackKind kind = FeedbackKind::score;
    std::vector<double> per_image_scores;       // score kind
    std::vector<std::string> per_image_texts;   // textual kind
    double aggregate_score = 0.0;               // arithmetic mean of per-image scores
    std::string aggregate_text;
    int stage_index = 0;

    bool operator==(const Feedback& other) const = default;
};

struct TextCriticConfig {
    double range_low = 0.0;    // proxy-score range the quality bands divide
    double range_high = 50.0;
    int max_chars_per_image = 400;
};

// Built-in desk-scale experts:
//   psnr        full-reference, dB, capped at 100 for zero error
//   neg_l1      full-reference, negative mean absolute error
//   sharpness   no-reference, variance of the discrete Laplacian
//   smoothness  no-reference, negative total variation
//   text_critic textual; bands a PSNR proxy into quality phrases
class ExpertRegistry {
  public:
    explicit ExpertRegistry(TextCriticConfig critic = {});

    static std::vector<std::string> score_expert_ids();

    bool is_score_expert(const std::string& expert_id) const;
    bool is_textual_expert(const std::string& expert_id) const;
    // Throws LookupError for unknown ids.
    bool needs_reference(const std::string& expert_id) const;

    // Deterministic per-image scores plus their arithmetic mean.
    // Throws ConfigError when a full-reference expert gets no references.
    Feedback score(const std::string& expert_id, const ImageBatch& outputs,
                   const ImageBatch* references) const;

    // Deterministic banded critique; each per-image text is capped at the
    // configured length.
    Feedback textual_critique(const std::string& expert_id, const ImageBatch& outputs,
                              const ImageBatch* references) const;

    const TextCriticConfig& critic_config() const { return critic_; }

  private:
    TextCriticConfig critic_;
};

// Signed progress of `current` over `previous` in the objective's direction:
// (current - previous) for higher_better, (previous - current) for
// lower_better. Throws UnsupportedKindError for textual feedback.
double improvement(const Feedback& previous, const Feedback& current, const ObjectiveSpec& spec);

// Quality band of a proxy score within [low, high) quartiles; scores on a
// boundary fall into the lower band.
const char* quality_band(double proxy_score, double range_low, double range_high);

}  // namespace lossagent
