#pragma once

#include <memory>
#include <string>

#include "editbench/core/error.hpp"
#include "editbench/gateway/chat.hpp"

namespace editbench {

// Retryable failure: connection problems, 429, 5xx.
class TransportError : public Error {
 public:
  explicit TransportError(std::string message)
      : Error(ErrorKind::backend, std::move(message)) {}
};

class AuthError : public Error {
 public:
  explicit AuthError(std::string message)
      : Error(ErrorKind::backend, std::move(message)) {}
};

// Raw chat-completion backend. Retries and caching live in the Gateway.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string id() const = 0;
  virtual bool supports_logprobs() const = 0;
  virtual ChatResponse complete(const ChatRequest& req) = 0;
};

}  // namespace editbench
