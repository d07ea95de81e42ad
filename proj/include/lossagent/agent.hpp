#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lossagent/chat.hpp"
#include "lossagent/weights.hpp"

namespace lossagent {

struct PromptBundle;

enum class ParseStatus { ok, fallback };

// Outcome of one agent consultation.
struct AgentDecision {
    LossWeights weights;
    std::string raw_reply;                     // reply of the deciding attempt (last on fallback)
    std::vector<std::string> attempt_replies;  // every reply received, in order
    int attempts = 1;
    ParseStatus parse_status = ParseStatus::ok;
    bool clipped = false;  // some value was pulled back into bounds
};

struct RetryPolicy {
    int max_attempts = 3;
    // Temperature per attempt; the last entry is reused when the schedule is
    // shorter than max_attempts.
    std::vector<double> temperature_schedule = {0.2, 0.5, 0.8};

    double temperature_for_attempt(int attempt_index) const;
};

// Extracts loss weights from a reply containing the single-line pattern
//
//   id1:id2:...:idM=v1:v2:...:vM
//
// Ids must match term_ids in order (case-insensitive); values are decimal
// literals; spaces and tabs are tolerated around ':' and '='. The LAST
// well-formed occurrence wins. Values are clipped into bounds; *clipped
// reports whether any value moved. Throws ParseError when no occurrence
// parses.
LossWeights parse_weights(const std::string& reply, const std::vector<std::string>& term_ids,
                          const WeightBounds& bounds, bool* clipped = nullptr);

// Renders the canonical reply line for a weight vector; the inverse of
// parse_weights for in-bounds weights.
std::string format_weight_line(const std::vector<std::string>& term_ids,
                               const LossWeights& weights);

// Runs the decide loop: up to retry.max_attempts exchanges, first reply that
// parses wins; after exhausting attempts the previous weights are carried
// forward (parse_status = fallback). Throws BackendError only when every
// attempt failed at the transport level (no reply ever arrived).
AgentDecision decide(const PromptBundle& bundle, ChatBackend& backend, const RetryPolicy& retry,
                     const LossWeights& previous, const std::vector<std::string>& term_ids,
                     const WeightBounds& bounds);

// --- backends ---------------------------------------------------------------

// Deterministic in-process backend: replies come from a registered handler
// or from a digest-keyed reply table. Records every exchange for inspection.
class ScriptedBackend : public ChatBackend {
  public:
    using Handler =
        std::function<std::string(const std::vector<ChatMessage>&, double temperature, int call)>;

    ScriptedBackend() = default;
    explicit ScriptedBackend(Handler handler) : handler_(std::move(handler)) {}

    // Reply cycle: call i returns replies[i % size].
    static std::unique_ptr<ScriptedBackend> cycling(std::vector<std::string> replies);

    // Keyed lookup; falls back to the handler, then errors.
    void register_reply(std::uint64_t prompt_digest, std::string reply);

    static std::uint64_t digest(const std::vector<ChatMessage>& messages);

    std::string complete(const std::vector<ChatMessage>& messages, double temperature) override;

    int calls() const { return calls_; }
    const std::vector<std::vector<ChatMessage>>& received() const { return received_; }

  private:
    Handler handler_;
    std::map<std::uint64_t, std::string> keyed_;
    std::vector<std::vector<ChatMessage>> received_;
    int calls_ = 0;
};

// Chat-completions HTTP backend. Wire format:
//   request  {"model": ..., "messages": [{"role","content"}...], "temperature": ...}
//   response {"choices": [{"message": {"content": ...}}...]}
// Endpoint and key come from LOSSAGENT_API_URL / LOSSAGENT_API_KEY unless
// given explicitly.
class HttpBackend : public ChatBackend {
  public:
    struct Options {
        std::string url;    // empty: read LOSSAGENT_API_URL
        std::string api_key;  // empty: read LOSSAGENT_API_KEY (optional)
        std::string model = "default";
        double timeout_seconds = 60.0;
    };

    explicit HttpBackend(Options options);

    std::string complete(const std::vector<ChatMessage>& messages, double temperature) override;

    // Process-wide construction counter; lets offline test paths assert that
    // no networked backend was ever created.
    static int instances_created();

  private:
    Options options_;
    std::string scheme_host_;
    std::string path_;
};

}  // namespace lossagent
