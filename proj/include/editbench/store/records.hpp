#pragma once

#include <map>
#include <string>
#include <vector>

#include "editbench/core/json_io.hpp"
#include "editbench/tts/strategies.hpp"

namespace editbench {

inline constexpr std::string_view kInstructionsRecordType = "instructions";
inline constexpr std::string_view kEditRecordType = "edit";
inline constexpr std::string_view kScoreRecordType = "score";

// One record per image: the atom sequence, every compound level, and the
// regeneration effort behind the atoms.
struct InstructionsRecord {
  ImageRef image;
  std::vector<AtomicInstruction> atoms;
  std::vector<CompoundInstruction> compounds;
  std::vector<int> stage1_attempts;
  std::map<std::string, int> op_type_counts;
};

struct EditRecord {
  std::string edit_id;  // task identity: (image, level, strategy, n, editor)
  std::string image_id;
  int level = 1;
  std::string strategy;  // direct | sequential
  int n = 1;
  std::string editor_id;
  ImageRef output;
  EditTrace trace;

  static std::string task_id(const std::string& image_id, int level,
                             const std::string& strategy, int n,
                             const std::string& editor_id);
};

struct ScoreRecord {
  std::string score_id;
  std::string edit_id;
  std::string image_id;
  std::string output_image_id;
  int level = 1;
  std::string strategy;
  int n = 1;
  std::string editor_id;
  std::string llm_id;
  GradeSummary grade;
  std::string grader_config_hash;
  std::vector<std::string> cache_keys;
};

void to_json(Json& j, const InstructionsRecord& r);
void from_json(const Json& j, InstructionsRecord& r);
void to_json(Json& j, const EditRecord& r);
void from_json(const Json& j, EditRecord& r);
void to_json(Json& j, const ScoreRecord& r);
void from_json(const Json& j, ScoreRecord& r);

}  // namespace editbench
