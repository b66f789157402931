#include "editbench/store/records.hpp"

#include "editbench/core/hash.hpp"

namespace editbench {

std::string EditRecord::task_id(const std::string& image_id, int level,
                                const std::string& strategy, int n,
                                const std::string& editor_id) {
  Json j{{"image_id", image_id},
         {"level", level},
         {"strategy", strategy},
         {"n", n},
         {"editor_id", editor_id}};
  return content_id(canonical_dump(j));
}

void to_json(Json& j, const InstructionsRecord& r) {
  j = Json{{"image", r.image},
           {"atoms", r.atoms},
           {"compounds", r.compounds},
           {"stage1_attempts", r.stage1_attempts},
           {"op_type_counts", r.op_type_counts}};
}

void from_json(const Json& j, InstructionsRecord& r) {
  j.at("image").get_to(r.image);
  j.at("atoms").get_to(r.atoms);
  j.at("compounds").get_to(r.compounds);
  j.at("stage1_attempts").get_to(r.stage1_attempts);
  j.at("op_type_counts").get_to(r.op_type_counts);
}

void to_json(Json& j, const EditRecord& r) {
  j = Json{{"edit_id", r.edit_id},
           {"image_id", r.image_id},
           {"level", r.level},
           {"strategy", r.strategy},
           {"n", r.n},
           {"editor_id", r.editor_id},
           {"output", r.output},
           {"trace", r.trace}};
}

void from_json(const Json& j, EditRecord& r) {
  j.at("edit_id").get_to(r.edit_id);
  j.at("image_id").get_to(r.image_id);
  j.at("level").get_to(r.level);
  j.at("strategy").get_to(r.strategy);
  j.at("n").get_to(r.n);
  j.at("editor_id").get_to(r.editor_id);
  j.at("output").get_to(r.output);
  j.at("trace").get_to(r.trace);
}

void to_json(Json& j, const ScoreRecord& r) {
  j = Json{{"score_id", r.score_id},
           {"edit_id", r.edit_id},
           {"image_id", r.image_id},
           {"output_image_id", r.output_image_id},
           {"level", r.level},
           {"strategy", r.strategy},
           {"n", r.n},
           {"editor_id", r.editor_id},
           {"llm_id", r.llm_id},
           {"grade", r.grade},
           {"grader_config_hash", r.grader_config_hash},
           {"cache_keys", r.cache_keys}};
}

void from_json(const Json& j, ScoreRecord& r) {
  j.at("score_id").get_to(r.score_id);
  j.at("edit_id").get_to(r.edit_id);
  j.at("image_id").get_to(r.image_id);
  j.at("output_image_id").get_to(r.output_image_id);
  j.at("level").get_to(r.level);
  j.at("strategy").get_to(r.strategy);
  j.at("n").get_to(r.n);
  j.at("editor_id").get_to(r.editor_id);
  j.at("llm_id").get_to(r.llm_id);
  j.at("grade").get_to(r.grade);
  j.at("grader_config_hash").get_to(r.grader_config_hash);
  j.at("cache_keys").get_to(r.cache_keys);
}

}  // namespace editbench
