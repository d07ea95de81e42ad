#pragma once

#include <string>
#include <vector>

#include "lossagent/chat.hpp"
#include "lossagent/experts.hpp"
#include "lossagent/trajectory.hpp"
#include "lossagent/weights.hpp"

namespace lossagent {

// The three-part prompt: role + objective directions, the optimization
// trajectory, and the rule/format constraints.
struct PromptBundle {
    std::string system;
    std::string historical;
    std::string needs;
};

struct HistoryMode {
    enum class Mode { full, last_k };
    Mode mode = Mode::full;
    int k = 1;  // used by last_k

    static HistoryMode full() { return {Mode::full, 1}; }
    static HistoryMode last(int k) { return {Mode::last_k, k}; }
};

// Override points for the three prompt sections. Placeholders:
//   system:     {task} {losses} {objectives}
//   historical: {history}
//   needs:      {rules} {bounds} {format_example}
struct PromptTemplates {
    std::string system;
    std::string historical;
    std::string needs;

    static PromptTemplates defaults();
    // Loads each non-empty path as plain text; empty paths keep the default.
    static PromptTemplates from_files(const std::string& system_path,
                                      const std::string& historical_path,
                                      const std::string& needs_path);
};

std::string substitute_placeholders(std::string text,
                                    const std::vector<std::pair<std::string, std::string>>& values);

class PromptEngine {
  public:
    PromptEngine() : templates_(PromptTemplates::defaults()) {}
    explicit PromptEngine(PromptTemplates templates) : templates_(std::move(templates)) {}

    // Role statement, loss term ids, the ultimate-goal sentence, and one
    // direction sentence per score objective. Throws ConfigError when the
    // objective or term list is empty.
    std::string build_system_prompt(const std::string& task_description,
                                    const std::vector<ObjectiveSpec>& objectives,
                                    const std::vector<LossTerm>& loss_terms) const;

    // full: every entry; last_k: the final min(k, len) entries. Weights and
    // scores use fixed 4-decimal formatting; textual feedback is verbatim.
    // Throws IntegrityError on non-contiguous stage indices.
    std::string build_historical_prompt(const Trajectory& trajectory, HistoryMode mode) const;

    // Every rule verbatim, the weight bounds, and exactly one format-example
    // line built from the repository's term ids.
    std::string build_needs_prompt(const std::vector<std::string>& rules,
                                   const std::vector<LossTerm>& loss_terms,
                                   const WeightBounds& bounds) const;

    PromptBundle build(const std::string& task_description,
                       const std::vector<ObjectiveSpec>& objectives,
                       const std::vector<LossTerm>& loss_terms, const Trajectory& trajectory,
                       HistoryMode mode, const std::vector<std::string>& rules,
                       const WeightBounds& bounds) const;

  private:
    PromptTemplates templates_;
};

// The canonical example line of the weight grammar, built from the term ids
// with values clipped into bounds. Guaranteed to parse through parse_weights.
std::string format_example(const std::vector<LossTerm>& loss_terms, const WeightBounds& bounds);

// Chat rendering: message 1 carries the system prompt, message 2 the
// historical and needs prompts joined by a blank line.
std::vector<ChatMessage> render(const PromptBundle& bundle);

// The exact sentence fragments build_system_prompt emits per score
// objective; exposed so tests and ablation tooling can count them.
extern const char* const kHigherBetterSentence;
extern const char* const kLowerBetterSentence;

}  // namespace lossagent
