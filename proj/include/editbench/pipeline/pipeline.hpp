#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "editbench/gateway/gateway.hpp"
#include "editbench/pipeline/templates.hpp"

namespace editbench {

struct WordBounds {
  int min = 3;
  int max = 40;
};

struct PipelineConfig {
  int sequence_length = 8;
  double stage1_temperature = 1.15;
  double other_stage_temperature = 1.0;
  bool stage1_cot = true;
  bool stage3_cot = true;
  WordBounds atomic_word_bounds{};
  int max_regen_attempts = 5;

  void validate() const;
};

enum class PipelineStage {
  sequence_generation = 1,
  simplification = 2,
  compounding = 3,
};

struct FilterVerdict {
  bool pass = true;
  std::vector<std::string> reasons;
};

// Rule-based filtration: empty text, garbled bytes (>1% control or
// replacement characters), repeated 4-grams, and word-count bounds
// (scaled by level for compounds).
FilterVerdict filter_check(std::string_view text, PipelineStage stage,
                           const PipelineConfig& cfg = {}, int level = 1);

// Three-stage instruction generation: sequence generation, simplification,
// progressive compounding. Flawed replies are regenerated up to
// max_regen_attempts per batch.
class InstructionPipeline {
 public:
  InstructionPipeline(std::shared_ptr<Gateway> gateway, PipelineConfig config,
                      TemplateSet templates, std::uint64_t run_seed);

  // Stage 1: exactly N atoms, each tagged with a taxonomy operation.
  InstructionSequence generate_sequence(const ImageRef& image) const;

  // Stage 2: one atom; precondition !atom.simplified.
  AtomicInstruction simplify(const AtomicInstruction& atom) const;
  InstructionSequence simplify_all(InstructionSequence seq) const;

  // Stage 3: level-i compound over the first i (simplified) atoms. Level 1
  // is the first atom's text verbatim, no backend call.
  CompoundInstruction compound(const InstructionSequence& seq, int i) const;
  std::vector<CompoundInstruction> compound_all(
      const InstructionSequence& seq) const;

  const PipelineConfig& config() const { return config_; }

 private:
  std::shared_ptr<Gateway> gateway_;
  PipelineConfig config_;
  TemplateSet templates_;
  std::uint64_t run_seed_;
};

}  // namespace editbench
