#pragma once

#include <string>

#include "editbench/gateway/backend.hpp"

namespace editbench {

// Adapter for a chat-completions HTTP endpoint (OpenAI-style JSON shape).
// The API key is read from the environment; it never appears in config
// files or stores.
struct RemoteChatConfig {
  std::string id = "remote-llm";
  std::string endpoint;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "EDITBENCH_API_KEY";
  bool logprobs_supported = true;
  int top_logprobs = 8;
  int timeout_seconds = 120;
};

class RemoteChatBackend : public ChatBackend {
 public:
  explicit RemoteChatBackend(RemoteChatConfig config);

  std::string id() const override { return config_.id; }
  bool supports_logprobs() const override {
    return config_.logprobs_supported;
  }
  ChatResponse complete(const ChatRequest& req) override;

 private:
  RemoteChatConfig config_;
};

}  // namespace editbench
