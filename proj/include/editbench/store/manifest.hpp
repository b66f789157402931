#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "editbench/core/json_io.hpp"

namespace editbench {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Stage order for the completion markers.
const std::vector<std::string>& run_stages();  // generate, edit, grade

struct StageMarker {
  bool completed = false;
  std::string completed_at;  // ISO 8601, informational only
};

struct RunManifest {
  std::string run_id;
  std::uint64_t run_seed = 0;
  std::string config_hash;
  std::string llm_backend_id;
  std::string editor_backend_id;
  std::string tool_version{kToolVersion};
  std::string created_at;
  std::map<std::string, StageMarker> stages;

  static RunManifest create(std::uint64_t run_seed, std::string config_hash,
                            std::string llm_backend_id,
                            std::string editor_backend_id);

  bool stage_done(const std::string& stage) const;
  // Enforces that stages complete in order: a later stage is never marked
  // before every earlier one.
  void mark_stage(const std::string& stage);
  void validate() const;

  static RunManifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

void to_json(Json& j, const RunManifest& m);
void from_json(const Json& j, RunManifest& m);

std::string iso8601_now();

}  // namespace editbench
