#pragma once

#include <string>
#include <vector>

namespace lossagent {

enum class ChatRole { system, user, assistant };

std::string chat_role_to_string(ChatRole role);

struct ChatMessage {
    ChatRole role = ChatRole::user;
    std::string content;

    bool operator==(const ChatMessage& other) const = default;
};

// One blocking chat exchange. Implementations throw BackendError on
// transport-level failures; returning any text (even useless text) is a
// successful exchange.
class ChatBackend {
  public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages, double temperature) = 0;
};

}  // namespace lossagent
