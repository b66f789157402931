#include "editbench/store/manifest.hpp"

#include <ctime>
#include <fstream>

#include "editbench/core/error.hpp"
#include "editbench/core/hash.hpp"

namespace editbench {

const std::vector<std::string>& run_stages() {
  static const std::vector<std::string> stages = {"generate", "edit",
                                                  "grade"};
  return stages;
}

std::string iso8601_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest RunManifest::create(std::uint64_t run_seed,
                                std::string config_hash,
                                std::string llm_backend_id,
                                std::string editor_backend_id) {
  RunManifest m;
  m.run_seed = run_seed;
  m.config_hash = std::move(config_hash);
  m.llm_backend_id = std::move(llm_backend_id);
  m.editor_backend_id = std::move(editor_backend_id);
  m.run_id = "run-" + content_id(m.config_hash);
  m.created_at = iso8601_now();
  for (const auto& stage : run_stages()) m.stages[stage] = StageMarker{};
  return m;
}

bool RunManifest::stage_done(const std::string& stage) const {
  auto it = stages.find(stage);
  return it != stages.end() && it->second.completed;
}

void RunManifest::mark_stage(const std::string& stage) {
  bool seen = false;
  for (const auto& name : run_stages()) {
    if (name == stage) {
      seen = true;
      break;
    }
    if (!stage_done(name))
      throw validation_error("stage " + stage +
                             " cannot complete before stage " + name);
  }
  if (!seen) throw validation_error("unknown stage: " + stage);
  auto& marker = stages[stage];
  if (marker.completed) return;
  marker.completed = true;
  marker.completed_at = iso8601_now();
}

void RunManifest::validate() const {
  if (run_id.empty() || config_hash.empty())
    throw validation_error("manifest: missing run_id or config_hash");
  // Completion must be monotone over the stage order.
  bool gap = false;
  for (const auto& name : run_stages()) {
    if (!stage_done(name)) {
      gap = true;
    } else if (gap) {
      throw validation_error("manifest: stage " + name +
                             " completed before an earlier stage");
    }
  }
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw io_error("cannot open manifest " + path.string());
  Json j;
  try {
    file >> j;
  } catch (const std::exception& e) {
    throw io_error("invalid manifest " + path.string() + ": " + e.what());
  }
  RunManifest m = j.get<RunManifest>();
  m.validate();
  return m;
}

void RunManifest::save(const std::filesystem::path& path) const {
  std::ofstream file(path);
  if (!file) throw io_error("cannot write manifest " + path.string());
  Json j = *this;
  file << j.dump(2) << '\n';
}

void to_json(Json& j, const StageMarker& s);
void from_json(const Json& j, StageMarker& s);

void to_json(Json& j, const StageMarker& s) {
  j = Json{{"completed", s.completed}, {"completed_at", s.completed_at}};
}

void from_json(const Json& j, StageMarker& s) {
  j.at("completed").get_to(s.completed);
  j.at("completed_at").get_to(s.completed_at);
}

void to_json(Json& j, const RunManifest& m) {
  j = Json{{"run_id", m.run_id},
           {"run_seed", m.run_seed},
           {"config_hash", m.config_hash},
           {"llm_backend_id", m.llm_backend_id},
           {"editor_backend_id", m.editor_backend_id},
           {"tool_version", m.tool_version},
           {"created_at", m.created_at},
           {"stages", Json::object()}};
  for (const auto& [name, marker] : m.stages) j["stages"][name] = marker;
}

void from_json(const Json& j, RunManifest& m) {
  j.at("run_id").get_to(m.run_id);
  j.at("run_seed").get_to(m.run_seed);
  j.at("config_hash").get_to(m.config_hash);
  j.at("llm_backend_id").get_to(m.llm_backend_id);
  j.at("editor_backend_id").get_to(m.editor_backend_id);
  j.at("tool_version").get_to(m.tool_version);
  j.at("created_at").get_to(m.created_at);
  m.stages.clear();
  for (const auto& [name, marker] : j.at("stages").items())
    m.stages[name] = marker.get<StageMarker>();
}

}  // namespace editbench
