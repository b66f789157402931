#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "editbench/gateway/gateway.hpp"
#include "editbench/pipeline/templates.hpp"

namespace editbench {

enum class ScoringMode { numeric, token_prob };

std::string_view scoring_mode_name(ScoringMode mode);
ScoringMode scoring_mode_from_name(std::string_view name);

struct GraderConfig {
  ScoringMode scoring = ScoringMode::numeric;
  int repeats = 20;
  bool cot_if_ip = true;
  bool cot_pq = false;
  bool rubric_enabled = true;
  bool include_instruction_in_pq = false;
  double temperature = 1.0;
  bool near_deterministic = false;  // forces probability_mass to 1e-7

  void validate() const;
};

struct Measurement {
  Metric metric = Metric::IF;
  double value = 0.0;
  std::string raw_response_ref;  // response cache key
  int attempt = 0;
};

// Builds one grading request. IF and IP prompts carry the full
// input/output/instruction triplet; PQ prompts carry the output image only
// (no instruction, no reasoning directive) unless configured otherwise.
ChatRequest build_grading_prompt(Metric metric, const ImageRef& input_image,
                                 const ImageRef& output_image,
                                 const CompoundInstruction& instruction,
                                 const GraderConfig& cfg,
                                 const TemplateSet& templates,
                                 std::uint64_t run_seed, int attempt = 0);

// Score extraction from a free-form reply: the last number in [0, 10] after
// the final score marker (reasoning preamble ignored).
double parse_numeric_score(std::string_view text);

// 10 * yes / (yes + no).
double token_prob_score(const TokenProbPair& pair);

class Grader {
 public:
  Grader(std::shared_ptr<Gateway> gateway, GraderConfig config,
         TemplateSet templates, std::uint64_t run_seed);

  // K independent measurements (distinct attempt indices) and their mean.
  std::pair<double, std::vector<Measurement>> grade_metric(
      Metric metric, const ImageRef& input_image, const ImageRef& output_image,
      const CompoundInstruction& instruction) const;

  GradeSummary grade_all(const ImageRef& input_image,
                         const ImageRef& output_image,
                         const CompoundInstruction& instruction) const;

  ChatRequest prompt_for(Metric metric, const ImageRef& input_image,
                         const ImageRef& output_image,
                         const CompoundInstruction& instruction,
                         int attempt) const;

  const GraderConfig& config() const { return config_; }

 private:
  std::shared_ptr<Gateway> gateway_;
  GraderConfig config_;
  TemplateSet templates_;
  std::uint64_t run_seed_;
};

}  // namespace editbench
