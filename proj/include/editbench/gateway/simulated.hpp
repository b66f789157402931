#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>

#include "editbench/gateway/backend.hpp"

namespace editbench {

// Ground-truth latent behind a simulated judgement: the true quality of the
// graded aspect plus the measurement noise of the judge.
struct SimulatedLatent {
  double quality = 5.0;   // in [0, 10]
  double noise_sd = 0.0;  // >= 0
};

using LatentProvider = std::function<SimulatedLatent(const ChatRequest&)>;

LatentProvider constant_latent_provider(SimulatedLatent latent);

// Per-metric latents; the metric is read from the grading prompt's
// criterion label.
LatentProvider metric_latent_provider(std::map<Metric, double> quality,
                                      double noise_sd);

struct SimulatedBackendConfig {
  std::string id = "sim-llm";
  // Fault injection for the regeneration path: 1-based stage-1 line indices
  // that come back garbled on attempt 0.
  std::set<int> garble_lines_first_attempt;
  // Random garbling of stage-1 lines, salted per request.
  double garble_probability = 0.0;
};

// Deterministic chat backend. Every reply is a pure function of the
// canonical request (which includes run_seed and attempt); wall clock and
// scheduling never enter the stream.
class SimulatedChatBackend : public ChatBackend {
 public:
  SimulatedChatBackend(SimulatedBackendConfig config, LatentProvider latents);

  std::string id() const override { return config_.id; }
  bool supports_logprobs() const override { return true; }
  ChatResponse complete(const ChatRequest& req) override;

 private:
  SimulatedBackendConfig config_;
  LatentProvider latents_;
};

// Exposed for direct testing of the deterministic reply function.
ChatResponse simulate(const ChatRequest& req, const SimulatedLatent& latent,
                      const SimulatedBackendConfig& config = {});

}  // namespace editbench
