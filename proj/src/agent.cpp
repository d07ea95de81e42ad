#include "lossagent/agent.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lossagent/errors.hpp"
#include "lossagent/format.hpp"
#include "lossagent/prompt.hpp"
#include "lossagent/rng.hpp"

namespace lossagent {

std::string chat_role_to_string(ChatRole role) {
    switch (role) {
        case ChatRole::system:
            return "system";
        case ChatRole::user:
            return "user";
        case ChatRole::assistant:
            return "assistant";
    }
    return "user";
}

double RetryPolicy::temperature_for_attempt(int attempt_index) const {
    if (temperature_schedule.empty()) return 0.2;
    const std::size_t i = std::min(static_cast<std::size_t>(attempt_index),
                                   temperature_schedule.size() - 1);
    return temperature_schedule[i];
}

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }
bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::size_t skip_ws(const std::string& s, std::size_t p) {
    while (p < s.size() && is_ws(s[p])) ++p;
    return p;
}

bool matches_id_at(const std::string& s, std::size_t p, const std::string& id) {
    if (p + id.size() > s.size()) return false;
    for (std::size_t i = 0; i < id.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[p + i])) !=
            std::tolower(static_cast<unsigned char>(id[i]))) {
            return false;
        }
    }
    return true;
}

// Scans a decimal literal (optional sign, optional fraction, optional
// exponent). Returns the end position, or p when no literal starts here.
std::size_t scan_number(const std::string& s, std::size_t p, double* value) {
    std::size_t q = p;
    if (q < s.size() && (s[q] == '+' || s[q] == '-')) ++q;
    std::size_t digits = 0;
    while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) {
        ++q;
        ++digits;
    }
    if (q < s.size() && s[q] == '.') {
        ++q;
        while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) {
            ++q;
            ++digits;
        }
    }
    if (digits == 0) return p;
    if (q < s.size() && (s[q] == 'e' || s[q] == 'E')) {
        std::size_t r = q + 1;
        if (r < s.size() && (s[r] == '+' || s[r] == '-')) ++r;
        if (r < s.size() && std::isdigit(static_cast<unsigned char>(s[r]))) {
            ++r;
            while (r < s.size() && std::isdigit(static_cast<unsigned char>(s[r]))) ++r;
            q = r;
        }
    }
    *value = std::strtod(s.c_str() + p, nullptr);
    return q;
}

struct Candidate {
    bool ok = false;
    std::vector<double> values;
    std::string reason;
};

// Attempts to match the full pattern starting at the first id.
Candidate match_candidate(const std::string& s, std::size_t pos,
                          const std::vector<std::string>& term_ids) {
    Candidate out;
    std::size_t p = pos;
    for (std::size_t k = 0; k < term_ids.size(); ++k) {
        if (!matches_id_at(s, p, term_ids[k])) {
            out.reason = "loss term ids do not match the repository order";
            return out;
        }
        p = skip_ws(s, p + term_ids[k].size());
        const char expected = (k + 1 < term_ids.size()) ? ':' : '=';
        if (p >= s.size() || s[p] != expected) {
            out.reason = std::string("expected '") + expected + "' after id '" + term_ids[k] + "'";
            return out;
        }
        p = skip_ws(s, p + 1);
    }

    const std::size_t want = term_ids.size();
    while (out.values.size() < want) {
        double v = 0.0;
        const std::size_t q = scan_number(s, p, &v);
        if (q == p) {
            out.reason = out.values.empty() ? "no numeric value after '='"
                                            : "non-numeric value in the weight list";
            return out;
        }
        out.values.push_back(v);
        p = skip_ws(s, q);
        if (out.values.size() == want) break;
        if (p >= s.size() || s[p] != ':') {
            out.reason = "value count mismatch: found " + std::to_string(out.values.size()) +
                         " of " + std::to_string(want);
            return out;
        }
        p = skip_ws(s, p + 1);
    }

    // A further ':'-separated numeric means the value list is longer than the
    // repository; reject rather than guess which M values were meant.
    if (p < s.size() && s[p] == ':') {
        double extra = 0.0;
        const std::size_t q = skip_ws(s, p + 1);
        if (scan_number(s, q, &extra) != q) {
            out.reason = "value count mismatch: more values than loss terms";
            return out;
        }
    }

    out.ok = true;
    return out;
}

}  // namespace

LossWeights parse_weights(const std::string& reply, const std::vector<std::string>& term_ids,
                          const WeightBounds& bounds, bool* clipped) {
    if (term_ids.empty()) throw ConfigError("parse_weights needs at least one term id");

    std::optional<Candidate> best;
    std::string last_reason;
    const std::string& first_id = term_ids.front();
    for (std::size_t pos = 0; pos + first_id.size() <= reply.size(); ++pos) {
        if (!matches_id_at(reply, pos, first_id)) continue;
        if (pos > 0 && is_word(reply[pos - 1])) continue;  // mid-word hit
        Candidate c = match_candidate(reply, pos, term_ids);
        if (c.ok) {
            best = std::move(c);  // last occurrence wins
        } else {
            last_reason = std::move(c.reason);
        }
    }

    if (!best) {
        if (last_reason.empty()) {
            throw ParseError("no weight pattern '" + join(term_ids, ":") +
                             "=v1:...:vM' found in the reply");
        }
        throw ParseError("weight pattern rejected: " + last_reason);
    }

    bool any_clipped = false;
    LossWeights weights;
    weights.values.reserve(best->values.size());
    for (double v : best->values) {
        const double c = bounds.clip(v);
        if (c != v) any_clipped = true;
        weights.values.push_back(c);
    }
    if (clipped) *clipped = any_clipped;
    return weights;
}

std::string format_weight_line(const std::vector<std::string>& term_ids,
                               const LossWeights& weights) {
    std::vector<std::string> vals;
    vals.reserve(weights.values.size());
    for (double v : weights.values) vals.push_back(fmt4(v));
    return join(term_ids, ":") + "=" + join(vals, ":");
}

AgentDecision decide(const PromptBundle& bundle, ChatBackend& backend, const RetryPolicy& retry,
                     const LossWeights& previous, const std::vector<std::string>& term_ids,
                     const WeightBounds& bounds) {
    if (retry.max_attempts < 1) throw ConfigError("retry policy needs max_attempts >= 1");
    const std::vector<ChatMessage> messages = render(bundle);

    AgentDecision decision;
    std::optional<BackendError> last_transport;
    for (int attempt = 0; attempt < retry.max_attempts; ++attempt) {
        std::string reply;
        try {
            reply = backend.complete(messages, retry.temperature_for_attempt(attempt));
        } catch (const BackendError& e) {
            last_transport = e;
            continue;
        }
        decision.attempt_replies.push_back(reply);
        try {
            bool clipped = false;
            decision.weights = parse_weights(reply, term_ids, bounds, &clipped);
            decision.raw_reply = std::move(reply);
            decision.attempts = attempt + 1;
            decision.parse_status = ParseStatus::ok;
            decision.clipped = clipped;
            return decision;
        } catch (const ParseError&) {
            // try again with the next temperature
        }
    }

    if (decision.attempt_replies.empty()) {
        throw BackendError(last_transport ? last_transport->category
                                          : BackendError::Category::transport,
                           std::string("chat backend failed on every attempt: ") +
                               (last_transport ? last_transport->what() : "no reply"));
    }

    decision.weights = previous;
    decision.raw_reply = decision.attempt_replies.back();
    decision.attempts = retry.max_attempts;
    decision.parse_status = ParseStatus::fallback;
    decision.clipped = false;
    return decision;
}

// --- ScriptedBackend ---------------------------------------------------------

std::unique_ptr<ScriptedBackend> ScriptedBackend::cycling(std::vector<std::string> replies) {
    if (replies.empty()) throw ConfigError("cycling scripted backend needs at least one reply");
    return std::make_unique<ScriptedBackend>(
        [replies = std::move(replies)](const std::vector<ChatMessage>&, double, int call) {
            return replies[static_cast<std::size_t>(call) % replies.size()];
        });
}

void ScriptedBackend::register_reply(std::uint64_t prompt_digest, std::string reply) {
    keyed_[prompt_digest] = std::move(reply);
}

std::uint64_t ScriptedBackend::digest(const std::vector<ChatMessage>& messages) {
    std::string blob;
    for (const ChatMessage& m : messages) {
        blob += chat_role_to_string(m.role);
        blob.push_back('\0');
        blob += m.content;
        blob.push_back('\x1e');
    }
    return fnv1a64(blob);
}

std::string ScriptedBackend::complete(const std::vector<ChatMessage>& messages,
                                      double temperature) {
    received_.push_back(messages);
    const int call = calls_++;
    const auto it = keyed_.find(digest(messages));
    if (it != keyed_.end()) return it->second;
    if (handler_) return handler_(messages, temperature, call);
    throw BackendError(BackendError::Category::transport,
                       "scripted backend has no reply for this prompt");
}

// --- HttpBackend -------------------------------------------------------------

namespace {

std::atomic<int> g_http_backend_instances{0};

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

}  // namespace

int HttpBackend::instances_created() { return g_http_backend_instances.load(); }

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {
    ++g_http_backend_instances;
    if (options_.url.empty()) options_.url = env_or_empty("LOSSAGENT_API_URL");
    if (options_.api_key.empty()) options_.api_key = env_or_empty("LOSSAGENT_API_KEY");
    if (options_.url.empty()) {
        throw ConfigError("HTTP backend needs a URL (config or LOSSAGENT_API_URL)");
    }

    // Split "scheme://host[:port]/path" into client base and request path.
    const std::size_t scheme_end = options_.url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("HTTP backend URL must include a scheme: " + options_.url);
    }
    const std::size_t path_start = options_.url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host_ = options_.url;
        path_ = "/v1/chat/completions";
    } else {
        scheme_host_ = options_.url.substr(0, path_start);
        path_ = options_.url.substr(path_start);
    }
}

std::string HttpBackend::complete(const std::vector<ChatMessage>& messages, double temperature) {
    nlohmann::json body;
    body["model"] = options_.model;
    body["temperature"] = temperature;
    body["messages"] = nlohmann::json::array();
    for (const ChatMessage& m : messages) {
        body["messages"].push_back({{"role", chat_role_to_string(m.role)}, {"content", m.content}});
    }

    httplib::Client client(scheme_host_);
    const auto connect_sec = static_cast<time_t>(options_.timeout_seconds);
    const auto usec = static_cast<time_t>((options_.timeout_seconds - connect_sec) * 1e6);
    client.set_connection_timeout(connect_sec, usec);
    client.set_read_timeout(connect_sec, usec);
    client.set_write_timeout(connect_sec, usec);
    httplib::Headers headers;
    if (!options_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + options_.api_key);
    }

    const auto result = client.Post(path_, headers, body.dump(), "application/json");
    if (!result) {
        const auto err = result.error();
        const bool timeout = err == httplib::Error::ConnectionTimeout ||
                             err == httplib::Error::Read || err == httplib::Error::Write;
        throw BackendError(timeout ? BackendError::Category::timeout
                                   : BackendError::Category::transport,
                           "chat request failed: " + httplib::to_string(err));
    }
    if (result->status < 200 || result->status >= 300) {
        throw BackendError(BackendError::Category::http_status,
                           "chat endpoint returned HTTP " + std::to_string(result->status));
    }

    try {
        const nlohmann::json reply = nlohmann::json::parse(result->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(BackendError::Category::malformed,
                           std::string("malformed chat response body: ") + e.what());
    }
}

}  // namespace lossagent
