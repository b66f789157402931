#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "editbench/core/json_io.hpp"

namespace editbench {

// One rater's comparison of two outputs for the same (input, instruction).
// Preferences are -1 (A better), 0 (tie), +1 (B better).
struct PairwiseAnnotation {
  std::string input_id;
  std::string instruction_id;
  int level = 1;
  std::string output_a_id;
  std::string output_b_id;
  int pref_if = 0;
  int pref_ip = 0;
  int pref_pq = 0;
  int pref_overall = 0;
  std::string rater_id;

  void validate() const;
};

// Externally computed CLIP baseline columns; never computed here.
struct BaselineScores {
  std::string sample_id;
  double clip_dir = 0.0;
  double clip_img = 0.0;

  void validate() const;
};

void to_json(Json& j, const PairwiseAnnotation& a);
void from_json(const Json& j, PairwiseAnnotation& a);
void to_json(Json& j, const BaselineScores& b);
void from_json(const Json& j, BaselineScores& b);

// JSONL readers; errors carry the 1-based line number.
std::vector<PairwiseAnnotation> ingest_annotations(
    const std::filesystem::path& path);
std::vector<BaselineScores> ingest_baselines(
    const std::filesystem::path& path);

}  // namespace editbench
