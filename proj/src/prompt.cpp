#include "lossagent/prompt.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lossagent/agent.hpp"
#include "lossagent/errors.hpp"
#include "lossagent/format.hpp"

namespace lossagent {

const char* const kHigherBetterSentence = "higher scores indicate better quality";
const char* const kLowerBetterSentence = "lower scores indicate better quality";

PromptTemplates PromptTemplates::defaults() {
    PromptTemplates t;
    t.system =
        "You are the loss-weighting agent supervising the training of an image "
        "processing model.\n"
        "The model is trained on a weighted sum of these loss terms: {losses}.\n"
        "Task: {task}\n"
        "After every training stage, the model's outputs on a fixed panel of test "
        "images are evaluated and the results are reported to you.\n"
        "{objectives}\n"
        "Your ultimate goal is to choose loss weights that make the model improve "
        "on every objective above.\n"
        "Reason about the trajectory first, then state your decision in the "
        "required weight format.";
    t.historical = "{history}";
    t.needs =
        "Constraints for your reply:\n"
        "{rules}"
        "Every weight must be a decimal within [{bounds}].\n"
        "End your reply with exactly one line of the form:\n"
        "{format_example}";
    return t;
}

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read prompt template: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

PromptTemplates PromptTemplates::from_files(const std::string& system_path,
                                            const std::string& historical_path,
                                            const std::string& needs_path) {
    PromptTemplates t = defaults();
    if (!system_path.empty()) t.system = read_text_file(system_path);
    if (!historical_path.empty()) t.historical = read_text_file(historical_path);
    if (!needs_path.empty()) t.needs = read_text_file(needs_path);
    return t;
}

std::string substitute_placeholders(
    std::string text, const std::vector<std::pair<std::string, std::string>>& values) {
    for (const auto& [name, value] : values) {
        const std::string token = "{" + name + "}";
        std::size_t pos = 0;
        while ((pos = text.find(token, pos)) != std::string::npos) {
            text.replace(pos, token.size(), value);
            pos += value.size();
        }
    }
    return text;
}

std::string format_example(const std::vector<LossTerm>& loss_terms, const WeightBounds& bounds) {
    // Canonical example magnitudes, clipped into bounds; three of them match
    // the customary l1 / structure / regularizer ordering.
    static constexpr double kExample[] = {0.7, 0.3, 0.05};
    LossWeights w;
    std::vector<std::string> ids;
    for (std::size_t m = 0; m < loss_terms.size(); ++m) {
        const double v = m < 3 ? kExample[m] : 0.05;
        w.values.push_back(bounds.clip(v));
        ids.push_back(loss_terms[m].id);
    }
    return format_weight_line(ids, w);
}

std::string PromptEngine::build_system_prompt(const std::string& task_description,
                                              const std::vector<ObjectiveSpec>& objectives,
                                              const std::vector<LossTerm>& loss_terms) const {
    if (objectives.empty()) throw ConfigError("system prompt needs at least one objective");
    if (loss_terms.empty()) throw ConfigError("system prompt needs at least one loss term");

    std::vector<std::string> ids;
    for (const LossTerm& t : loss_terms) ids.push_back(t.id);

    std::string objective_block = "Optimization objectives:";
    for (const ObjectiveSpec& o : objectives) {
        objective_block += "\n- " + o.name + ": ";
        if (o.kind == FeedbackKind::score) {
            objective_block += o.direction == Direction::higher_better ? kHigherBetterSentence
                                                                       : kLowerBetterSentence;
            objective_block += ".";
        } else {
            objective_block += "a textual critique of the outputs.";
        }
    }

    return substitute_placeholders(templates_.system, {{"task", task_description},
                                                       {"losses", join(ids, ", ")},
                                                       {"objectives", objective_block}});
}

std::string PromptEngine::build_historical_prompt(const Trajectory& trajectory,
                                                  HistoryMode mode) const {
    if (mode.mode == HistoryMode::Mode::last_k && mode.k < 1) {
        throw ConfigError("history mode last_k needs k >= 1");
    }
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        if (trajectory[i].stage_index != static_cast<int>(i)) {
            throw IntegrityError("historical prompt needs contiguous stage indices");
        }
    }

    std::string history;
    if (trajectory.empty()) {
        history = "No training history yet (stage 0 has not completed).";
    } else {
        std::size_t first = 0;
        if (mode.mode == HistoryMode::Mode::last_k &&
            trajectory.size() > static_cast<std::size_t>(mode.k)) {
            first = trajectory.size() - static_cast<std::size_t>(mode.k);
        }
        history = "Optimization history (loss weights used per stage, then the "
                  "feedback those outputs earned):";
        for (std::size_t i = first; i < trajectory.size(); ++i) {
            const TrajectoryEntry& e = trajectory[i];
            history += "\nStage " + std::to_string(e.stage_index) + ": weights [";
            std::vector<std::string> vals;
            for (double v : e.weights_used.values) vals.push_back(fmt4(v));
            history += join(vals, ", ") + "]";
            for (const Feedback& fb : e.feedback) {
                history += " | " + fb.objective_name + "=";
                if (fb.kind == FeedbackKind::score) {
                    history += fmt4(fb.aggregate_score);
                } else {
                    history += "\"" + fb.aggregate_text + "\"";
                }
            }
        }
    }

    return substitute_placeholders(templates_.historical, {{"history", history}});
}

std::string PromptEngine::build_needs_prompt(const std::vector<std::string>& rules,
                                             const std::vector<LossTerm>& loss_terms,
                                             const WeightBounds& bounds) const {
    std::string rules_block;
    for (const std::string& rule : rules) rules_block += "- " + rule + "\n";

    return substitute_placeholders(
        templates_.needs,
        {{"rules", rules_block},
         {"bounds", fmt4(bounds.lower) + ", " + fmt4(bounds.upper)},
         {"format_example", format_example(loss_terms, bounds)}});
}

PromptBundle PromptEngine::build(const std::string& task_description,
                                 const std::vector<ObjectiveSpec>& objectives,
                                 const std::vector<LossTerm>& loss_terms,
                                 const Trajectory& trajectory, HistoryMode mode,
                                 const std::vector<std::string>& rules,
                                 const WeightBounds& bounds) const {
    PromptBundle bundle;
    bundle.system = build_system_prompt(task_description, objectives, loss_terms);
    bundle.historical = build_historical_prompt(trajectory, mode);
    bundle.needs = build_needs_prompt(rules, loss_terms, bounds);
    return bundle;
}

std::vector<ChatMessage> render(const PromptBundle& bundle) {
    return {
        {ChatRole::system, bundle.system},
        {ChatRole::user, bundle.historical + "\n\n" + bundle.needs},
    };
}

}  // namespace lossagent
