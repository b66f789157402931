#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "editbench/gateway/backend.hpp"
#include "editbench/gateway/cache.hpp"

namespace editbench {

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  double jitter_fraction = 0.2;
  // Injectable so tests do not sleep for real.
  std::function<void(std::chrono::milliseconds)> sleeper;
};

struct GatewayOptions {
  std::optional<std::filesystem::path> cache_dir;
  RetryPolicy retry{};
  int max_in_flight = 8;
  // Called for every logical request, including cache hits.
  std::function<void(const ChatRequest&, bool cache_hit)> observer;
};

// Uniform access to a chat backend: request validation, write-through
// response cache, bounded concurrency, exponential backoff on transport
// failures. Thread-safe.
class Gateway {
 public:
  Gateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options);

  ChatResponse complete(const ChatRequest& req);

  std::string backend_id() const { return backend_->id(); }
  bool supports_logprobs() const { return backend_->supports_logprobs(); }

  // Pure function of (backend id, canonical request).
  std::string cache_key(const ChatRequest& req) const;

 private:
  ChatResponse call_with_retries(const ChatRequest& req);

  std::shared_ptr<ChatBackend> backend_;
  GatewayOptions options_;
  std::optional<ResponseCache> cache_;

  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  int slots_in_use_ = 0;
};

}  // namespace editbench
