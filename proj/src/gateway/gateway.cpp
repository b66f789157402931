#include "editbench/gateway/gateway.hpp"

#include <thread>

#include "editbench/core/hash.hpp"
#include "editbench/core/rng.hpp"

namespace editbench {

namespace {

struct SlotGuard {
  std::mutex& mu;
  std::condition_variable& cv;
  int& in_use;
  int limit;

  SlotGuard(std::mutex& mu, std::condition_variable& cv, int& in_use,
            int limit)
      : mu(mu), cv(cv), in_use(in_use), limit(limit) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return in_use < limit; });
    ++in_use;
  }
  ~SlotGuard() {
    {
      std::lock_guard<std::mutex> lock(mu);
      --in_use;
    }
    cv.notify_one();
  }
};

}  // namespace

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (options_.max_in_flight < 1) options_.max_in_flight = 1;
  if (!options_.retry.sleeper)
    options_.retry.sleeper = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
  if (options_.cache_dir.has_value()) cache_.emplace(*options_.cache_dir);
}

std::string Gateway::cache_key(const ChatRequest& req) const {
  return sha256_hex(backend_->id() + "\n" + canonical_request_json(req));
}

ChatResponse Gateway::complete(const ChatRequest& req) {
  req.validate();
  if (req.want_logprobs && !backend_->supports_logprobs())
    throw validation_error("backend " + backend_->id() +
                           " does not support logprobs");

  std::string key = cache_key(req);
  if (cache_.has_value()) {
    if (auto hit = cache_->lookup(key)) {
      if (options_.observer) options_.observer(req, /*cache_hit=*/true);
      return *hit;
    }
  }
  if (options_.observer) options_.observer(req, /*cache_hit=*/false);

  ChatResponse resp;
  {
    SlotGuard guard(slots_mu_, slots_cv_, slots_in_use_,
                    options_.max_in_flight);
    resp = call_with_retries(req);
  }
  resp.backend_id = backend_->id();
  resp.cached = false;
  if (cache_.has_value()) cache_->store(key, req, resp);
  return resp;
}

ChatResponse Gateway::call_with_retries(const ChatRequest& req) {
  const RetryPolicy& retry = options_.retry;
  DeterministicRng jitter_rng(
      seed_from_bytes(canonical_request_json(req) + "|backoff"));
  for (int attempt = 0;; ++attempt) {
    try {
      return backend_->complete(req);
    } catch (const TransportError&) {
      if (attempt + 1 >= retry.max_attempts) throw;
      double scale = static_cast<double>(1 << attempt);
      double jitter =
          1.0 + retry.jitter_fraction * (2.0 * jitter_rng.uniform01() - 1.0);
      auto delay = std::chrono::milliseconds(static_cast<long>(
          static_cast<double>(retry.base_delay.count()) * scale * jitter));
      retry.sleeper(delay);
    }
  }
}

}  // namespace editbench
