#include "editbench/store/resume.hpp"

#include <set>

#include "editbench/core/error.hpp"
#include "editbench/store/records.hpp"

namespace editbench {

WorkPlan resume(const RunManifest& manifest,
                const std::string& expected_config_hash,
                const TaskUniverse& universe, const JsonlStore& instructions,
                const JsonlStore& edits, const JsonlStore& scores) {
  if (manifest.config_hash != expected_config_hash)
    throw validation_error(
        "resume refused: run was created from a different config (manifest " +
        manifest.config_hash.substr(0, 12) + "..., current " +
        expected_config_hash.substr(0, 12) + "...)");

  std::set<std::string> have_instructions;
  for (const auto& envelope : instructions.records()) {
    if (envelope.record_type != kInstructionsRecordType) continue;
    have_instructions.insert(
        envelope.payload.at("image").at("id").get<std::string>());
  }
  std::set<std::string> have_edits;
  for (const auto& envelope : edits.records()) {
    if (envelope.record_type != kEditRecordType) continue;
    have_edits.insert(envelope.payload.at("edit_id").get<std::string>());
  }
  std::set<std::string> have_scores;
  for (const auto& envelope : scores.records()) {
    if (envelope.record_type != kScoreRecordType) continue;
    have_scores.insert(envelope.payload.at("edit_id").get<std::string>());
  }

  WorkPlan plan;
  for (const auto& image_id : universe.image_ids) {
    if (have_instructions.find(image_id) == have_instructions.end())
      plan.generate_images.push_back(image_id);
    for (int level : universe.levels) {
      std::string edit_id =
          EditRecord::task_id(image_id, level, universe.strategy,
                              universe.best_of, universe.editor_id);
      if (have_edits.find(edit_id) == have_edits.end())
        plan.edit_tasks.push_back(EditTask{image_id, level});
      if (have_scores.find(edit_id) == have_scores.end() &&
          have_edits.find(edit_id) != have_edits.end())
        plan.grade_edit_ids.push_back(edit_id);
    }
  }
  return plan;
}

}  // namespace editbench
