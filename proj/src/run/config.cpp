#include "editbench/run/config.hpp"

#include <fstream>

#include "editbench/core/hash.hpp"

namespace editbench {

namespace {

template <typename T>
T value_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig cfg;
  cfg.run_seed = value_or<std::uint64_t>(j, "run_seed", 0);
  cfg.images_path = value_or<std::string>(j, "images_path", "");
  cfg.templates_dir = value_or<std::string>(
      j, "templates_dir", TemplateSet::default_dir().string());

  if (j.contains("pipeline")) {
    const Json& p = j.at("pipeline");
    cfg.pipeline.sequence_length =
        value_or<int>(p, "sequence_length", cfg.pipeline.sequence_length);
    cfg.pipeline.stage1_temperature = value_or<double>(
        p, "stage1_temperature", cfg.pipeline.stage1_temperature);
    cfg.pipeline.other_stage_temperature = value_or<double>(
        p, "other_stage_temperature", cfg.pipeline.other_stage_temperature);
    cfg.pipeline.stage1_cot =
        value_or<bool>(p, "stage1_cot", cfg.pipeline.stage1_cot);
    cfg.pipeline.stage3_cot =
        value_or<bool>(p, "stage3_cot", cfg.pipeline.stage3_cot);
    cfg.pipeline.atomic_word_bounds.min = value_or<int>(
        p, "atomic_word_min", cfg.pipeline.atomic_word_bounds.min);
    cfg.pipeline.atomic_word_bounds.max = value_or<int>(
        p, "atomic_word_max", cfg.pipeline.atomic_word_bounds.max);
    cfg.pipeline.max_regen_attempts = value_or<int>(
        p, "max_regen_attempts", cfg.pipeline.max_regen_attempts);
  }

  if (j.contains("grader")) {
    const Json& g = j.at("grader");
    cfg.grader.scoring = scoring_mode_from_name(value_or<std::string>(
        g, "scoring", std::string(scoring_mode_name(cfg.grader.scoring))));
    cfg.grader.repeats = value_or<int>(g, "repeats", cfg.grader.repeats);
    cfg.grader.cot_if_ip = value_or<bool>(g, "cot_if_ip", cfg.grader.cot_if_ip);
    cfg.grader.cot_pq = value_or<bool>(g, "cot_pq", cfg.grader.cot_pq);
    cfg.grader.rubric_enabled =
        value_or<bool>(g, "rubric_enabled", cfg.grader.rubric_enabled);
    cfg.grader.include_instruction_in_pq = value_or<bool>(
        g, "include_instruction_in_pq", cfg.grader.include_instruction_in_pq);
    cfg.grader.temperature =
        value_or<double>(g, "temperature", cfg.grader.temperature);
    cfg.grader.near_deterministic = value_or<bool>(
        g, "near_deterministic", cfg.grader.near_deterministic);
  }

  if (j.contains("llm")) {
    const Json& l = j.at("llm");
    cfg.llm.kind = value_or<std::string>(l, "kind", cfg.llm.kind);
    cfg.llm.latent_mode =
        value_or<std::string>(l, "latent_mode", cfg.llm.latent_mode);
    cfg.llm.noise_sd = value_or<double>(l, "noise_sd", cfg.llm.noise_sd);
    cfg.llm.quality_if = value_or<double>(l, "quality_if", cfg.llm.quality_if);
    cfg.llm.quality_ip = value_or<double>(l, "quality_ip", cfg.llm.quality_ip);
    cfg.llm.quality_pq = value_or<double>(l, "quality_pq", cfg.llm.quality_pq);
    cfg.llm.garble_probability = value_or<double>(
        l, "garble_probability", cfg.llm.garble_probability);
    if (l.contains("remote")) {
      const Json& r = l.at("remote");
      cfg.llm.remote.id = value_or<std::string>(r, "id", cfg.llm.remote.id);
      cfg.llm.remote.endpoint =
          value_or<std::string>(r, "endpoint", cfg.llm.remote.endpoint);
      cfg.llm.remote.path = value_or<std::string>(r, "path", cfg.llm.remote.path);
      cfg.llm.remote.model =
          value_or<std::string>(r, "model", cfg.llm.remote.model);
      cfg.llm.remote.api_key_env = value_or<std::string>(
          r, "api_key_env", cfg.llm.remote.api_key_env);
      cfg.llm.remote.logprobs_supported = value_or<bool>(
          r, "logprobs_supported", cfg.llm.remote.logprobs_supported);
    }
  }

  if (j.contains("editor")) {
    const Json& e = j.at("editor");
    cfg.editor.kind = value_or<std::string>(e, "kind", cfg.editor.kind);
    cfg.editor.fidelity =
        value_or<double>(e, "fidelity", cfg.editor.fidelity);
    cfg.editor.collateral_rate =
        value_or<double>(e, "collateral_rate", cfg.editor.collateral_rate);
    cfg.editor.artifact_rate =
        value_or<double>(e, "artifact_rate", cfg.editor.artifact_rate);
    if (e.contains("remote")) {
      const Json& r = e.at("remote");
      cfg.editor.remote.id =
          value_or<std::string>(r, "id", cfg.editor.remote.id);
      cfg.editor.remote.endpoint =
          value_or<std::string>(r, "endpoint", cfg.editor.remote.endpoint);
      cfg.editor.remote.path =
          value_or<std::string>(r, "path", cfg.editor.remote.path);
      cfg.editor.remote.api_key_env = value_or<std::string>(
          r, "api_key_env", cfg.editor.remote.api_key_env);
    }
  }

  if (j.contains("edit")) {
    const Json& e = j.at("edit");
    cfg.edit.strategy = value_or<std::string>(e, "strategy", cfg.edit.strategy);
    cfg.edit.best_of = value_or<int>(e, "best_of", cfg.edit.best_of);
    cfg.edit.levels =
        value_or<std::vector<int>>(e, "levels", cfg.edit.levels);
  }

  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw io_error("cannot open config " + path.string());
  Json j;
  try {
    file >> j;
  } catch (const std::exception& e) {
    throw usage_error("invalid config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

Json RunConfig::to_json_resolved() const {
  return Json{
      {"run_seed", run_seed},
      {"images_path", images_path},
      {"templates_dir", templates_dir},
      {"pipeline",
       {{"sequence_length", pipeline.sequence_length},
        {"stage1_temperature", pipeline.stage1_temperature},
        {"other_stage_temperature", pipeline.other_stage_temperature},
        {"stage1_cot", pipeline.stage1_cot},
        {"stage3_cot", pipeline.stage3_cot},
        {"atomic_word_min", pipeline.atomic_word_bounds.min},
        {"atomic_word_max", pipeline.atomic_word_bounds.max},
        {"max_regen_attempts", pipeline.max_regen_attempts}}},
      {"grader",
       {{"scoring", std::string(scoring_mode_name(grader.scoring))},
        {"repeats", grader.repeats},
        {"cot_if_ip", grader.cot_if_ip},
        {"cot_pq", grader.cot_pq},
        {"rubric_enabled", grader.rubric_enabled},
        {"include_instruction_in_pq", grader.include_instruction_in_pq},
        {"temperature", grader.temperature},
        {"near_deterministic", grader.near_deterministic}}},
      {"llm",
       {{"kind", llm.kind},
        {"latent_mode", llm.latent_mode},
        {"noise_sd", llm.noise_sd},
        {"quality_if", llm.quality_if},
        {"quality_ip", llm.quality_ip},
        {"quality_pq", llm.quality_pq},
        {"garble_probability", llm.garble_probability},
        {"remote",
         {{"id", llm.remote.id},
          {"endpoint", llm.remote.endpoint},
          {"path", llm.remote.path},
          {"model", llm.remote.model},
          {"api_key_env", llm.remote.api_key_env},
          {"logprobs_supported", llm.remote.logprobs_supported}}}}},
      {"editor",
       {{"kind", editor.kind},
        {"fidelity", editor.fidelity},
        {"collateral_rate", editor.collateral_rate},
        {"artifact_rate", editor.artifact_rate},
        {"remote",
         {{"id", editor.remote.id},
          {"endpoint", editor.remote.endpoint},
          {"path", editor.remote.path},
          {"api_key_env", editor.remote.api_key_env}}}}},
      {"edit",
       {{"strategy", edit.strategy},
        {"best_of", edit.best_of},
        {"levels", edit.levels}}},
  };
}

std::string RunConfig::hash() const {
  return sha256_hex(canonical_dump(to_json_resolved()));
}

void RunConfig::validate() const {
  pipeline.validate();
  grader.validate();
  if (llm.kind != "simulated" && llm.kind != "remote")
    throw usage_error("llm.kind must be simulated or remote");
  if (llm.latent_mode != "scene-oracle" && llm.latent_mode != "constant")
    throw usage_error("llm.latent_mode must be scene-oracle or constant");
  if (editor.kind != "simulated" && editor.kind != "remote")
    throw usage_error("editor.kind must be simulated or remote");
  if (edit.strategy != "direct" && edit.strategy != "sequential")
    throw usage_error("edit.strategy must be direct or sequential");
  if (edit.best_of < 1) throw usage_error("edit.best_of must be >= 1");
  for (int level : edit.levels)
    if (level < 1 || level > pipeline.sequence_length)
      throw usage_error("edit.levels entries must lie in 1..N");
}

std::vector<int> RunConfig::effective_levels() const {
  if (!edit.levels.empty()) {
    std::vector<int> levels = edit.levels;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
  }
  std::vector<int> levels;
  for (int i = 1; i <= pipeline.sequence_length; ++i) levels.push_back(i);
  return levels;
}

}  // namespace editbench
