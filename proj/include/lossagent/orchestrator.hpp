#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lossagent/agent.hpp"
#include "lossagent/dataset.hpp"
#include "lossagent/experts.hpp"
#include "lossagent/process.hpp"
#include "lossagent/prompt.hpp"
#include "lossagent/rng.hpp"
#include "lossagent/trajectory.hpp"
#include "lossagent/weights.hpp"

namespace lossagent {

enum class Policy { agent, fixed, random, greedy_oracle };
enum class ProcessKind { toy_restorer, response_surface };
enum class BackendKind { scripted, hillclimb, http };

Policy policy_from_string(const std::string& s);
std::string policy_to_string(Policy p);

struct BackendConfig {
    BackendKind kind = BackendKind::scripted;
    std::vector<std::string> replies;  // scripted: cycled in call order
    double hillclimb_step = 0.25;
    std::string model = "default";
    std::string url;  // http only; empty reads LOSSAGENT_API_URL
    double timeout_seconds = 60.0;
};

struct SurfaceConfig {
    std::vector<double> optimum = {0.6, 0.3, 0.1};
};

struct PromptTemplatePaths {
    std::string system;
    std::string historical;
    std::string needs;
};

// Mirrors the run-configuration JSON file field for field; see
// docs/FORMATS.md for the schema and defaults.
struct RunConfig {
    int stages = 20;
    int iterations_per_stage = 5000;
    LossWeights initial_weights{{1.0, 0.1, 0.01}};
    std::vector<std::string> loss_terms{"l1", "edge", "tv"};
    std::vector<ObjectiveSpec> objectives;
    Policy policy = Policy::fixed;
    HistoryMode history_mode = HistoryMode::full();
    std::uint64_t seed = 0;
    int test_set_size = 10;
    ProcessKind process = ProcessKind::toy_restorer;
    WeightBounds bounds;
    BackendConfig backend;
    RetryPolicy retry;
    DatasetSpec dataset;  // dataset.seed is derived from `seed` at run time
    bool test_references = true;
    int kernel_size = 5;
    double learning_rate = 1e-4;
    double grid_step = 0.1;
    SurfaceConfig surface;
    std::vector<std::string> rules;
    std::string task_description =
        "restore synthetically degraded images as closely as possible to their clean versions";
    TextCriticConfig text_critic;
    std::optional<ObjectiveAsLoss> objective_as_loss;  // discouraged mode; see docs
    PromptTemplatePaths prompt_templates;

    // Throws ConfigError describing the first violated constraint.
    void validate() const;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
    std::string to_json_text() const;
    std::string digest() const;
};

struct RunResult {
    Trajectory trajectory;
    ProcessState final_state;
};

// The end-to-end loop: train a stage, infer on the fixed test panel, collect
// feedback, ask the policy for the next weights, repeat for `stages` stages.
// Stage 0 always trains with the initial weights; the policy is never
// consulted after the final stage. `backend_override` lets tests inject a
// scripted backend; otherwise the config's backend is built. A non-empty
// `out_path` streams each entry to disk so aborted runs leave a readable
// partial trajectory.
RunResult run(const RunConfig& config, ChatBackend* backend_override = nullptr,
              const std::string& out_path = "");

// Builds the chat backend described by the config (throws ConfigError for
// http configs with no URL available).
std::unique_ptr<ChatBackend> make_backend(const RunConfig& config);

// --- baseline policies -------------------------------------------------------

// Each component drawn independently and uniformly within bounds.
LossWeights next_weights_random(Rng& rng, const WeightBounds& bounds, int term_count);

// Evaluates the surface at the current grid point and its 2M axis-aligned
// step neighbours; returns the best, keeping the current point on ties and
// preferring the lowest axis index among equal improvements. Walks the
// lattice value(i) = lower + i * grid_step.
LossWeights next_weights_greedy_oracle(const ResponseSurface& surface, const LossWeights& current,
                                       double grid_step, const WeightBounds& bounds);

// Brute-force sweep over the full weight lattice; the oracle policies are
// verified against it.
LossWeights exhaustive_grid_optimum(const ResponseSurface& surface, double grid_step,
                                    const WeightBounds& bounds, int term_count);

// Deterministic pattern-search stand-in for the LLM: reads the latest
// objective score from the historical prompt, climbs one axis at a time, and
// always replies in the required weight format.
class HillClimbBackend : public ChatBackend {
  public:
    HillClimbBackend(std::vector<std::string> term_ids, std::string objective_name,
                     LossWeights initial_weights, double step, WeightBounds bounds);

    std::string complete(const std::vector<ChatMessage>& messages, double temperature) override;

  private:
    void advance_probe();

    std::vector<std::string> term_ids_;
    std::string objective_name_;
    WeightBounds bounds_;
    double step_;
    LossWeights best_;
    double best_score_;
    std::optional<LossWeights> last_proposal_;
    int axis_ = 0;
    int dir_ = +1;
    bool seen_first_score_ = false;
};

}  // namespace lossagent
