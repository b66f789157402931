#pragma once

#include <string>
#include <vector>

#include "editbench/store/jsonl_store.hpp"
#include "editbench/store/manifest.hpp"

namespace editbench {

struct EditTask {
  std::string image_id;
  int level = 1;

  bool operator==(const EditTask&) const = default;
};

struct WorkPlan {
  std::vector<std::string> generate_images;
  std::vector<EditTask> edit_tasks;
  std::vector<std::string> grade_edit_ids;

  bool empty() const {
    return generate_images.empty() && edit_tasks.empty() &&
           grade_edit_ids.empty();
  }
};

// The full set of tasks a run is expected to produce, derived from the
// resolved config by the runner.
struct TaskUniverse {
  std::vector<std::string> image_ids;  // input order
  std::vector<int> levels;             // ascending
  std::string strategy;
  int best_of = 1;
  std::string editor_id;
};

// Diff of expected tasks against completed records. Refuses to resume when
// the on-disk manifest was created from a different resolved config.
WorkPlan resume(const RunManifest& manifest,
                const std::string& expected_config_hash,
                const TaskUniverse& universe, const JsonlStore& instructions,
                const JsonlStore& edits, const JsonlStore& scores);

}  // namespace editbench
