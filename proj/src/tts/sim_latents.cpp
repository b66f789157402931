#include "editbench/tts/sim_latents.hpp"

#include "editbench/core/edit_grammar.hpp"
#include "editbench/gateway/markers.hpp"
#include "editbench/tts/scene_ops.hpp"

namespace editbench {

namespace {

std::optional<Metric> metric_from_prompt(const std::string& text) {
  for (Metric m : kAllMetrics) {
    std::string marker =
        std::string(kCriterionLabel) + std::string(metric_name(m));
    if (text.find(marker) != std::string::npos) return m;
  }
  return std::nullopt;
}

std::optional<std::string> instruction_from_prompt(const std::string& text) {
  auto pos = text.rfind(kInstructionLabel);
  if (pos == std::string::npos) return std::nullopt;
  auto start = pos + kInstructionLabel.size();
  auto end = text.find('\n', start);
  return text.substr(start,
                     end == std::string::npos ? std::string::npos
                                              : end - start);
}

}  // namespace

LatentProvider scene_oracle_latents(double noise_sd) {
  return [noise_sd](const ChatRequest& req) -> SimulatedLatent {
    std::string text = prompt_text(req);
    auto metric = metric_from_prompt(text);
    auto output = find_image_block(text, "output");
    if (!metric || !output || !output->scene.has_value())
      return SimulatedLatent{5.0, noise_sd};

    if (*metric == Metric::PQ)
      return SimulatedLatent{oracle_pq(*output->scene), noise_sd};

    auto input = find_image_block(text, "input");
    auto instruction = instruction_from_prompt(text);
    if (!input || !input->scene.has_value() || !instruction)
      return SimulatedLatent{5.0, noise_sd};

    ScoreTriple truth = oracle_scores_clauses(*input->scene, *output->scene,
                                              split_clauses(*instruction));
    return SimulatedLatent{truth.get(*metric), noise_sd};
  };
}

}  // namespace editbench
