#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "editbench/gateway/remote.hpp"
#include "editbench/grader/grader.hpp"
#include "editbench/pipeline/pipeline.hpp"
#include "editbench/tts/editor.hpp"

namespace editbench {

struct LlmRunConfig {
  std::string kind = "simulated";  // simulated | remote
  // Simulated backend knobs.
  std::string latent_mode = "scene-oracle";  // scene-oracle | constant
  double noise_sd = 0.0;
  double quality_if = 5.0;
  double quality_ip = 5.0;
  double quality_pq = 5.0;
  double garble_probability = 0.0;
  // Remote backend.
  RemoteChatConfig remote{};
};

struct EditorRunConfig {
  std::string kind = "simulated";
  double fidelity = 1.0;
  double collateral_rate = 0.0;
  double artifact_rate = 0.0;
  RemoteEditorConfig remote{};
};

struct EditRunConfig {
  std::string strategy = "direct";  // direct | sequential
  int best_of = 1;
  std::vector<int> levels;  // empty = 1..sequence_length
};

// Fully resolved experiment description. The canonical JSON of this value
// is hashed into the run manifest; replay and resume verify that hash.
struct RunConfig {
  std::uint64_t run_seed = 0;
  std::string images_path;
  std::string templates_dir;  // defaults to the shipped templates
  PipelineConfig pipeline{};
  GraderConfig grader{};
  LlmRunConfig llm{};
  EditorRunConfig editor{};
  EditRunConfig edit{};

  static RunConfig from_json(const Json& j);
  static RunConfig load(const std::filesystem::path& path);
  Json to_json_resolved() const;
  std::string hash() const;
  void validate() const;

  std::vector<int> effective_levels() const;
};

}  // namespace editbench
