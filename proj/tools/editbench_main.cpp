#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "editbench/run/runner.hpp"

namespace eb = editbench;

namespace {

struct CommonArgs {
  std::string run_dir = "run";
  std::string config_path;
};

// Loads the config file (if any), then applies CLI overrides via the
// supplied patch. The resolved config is what gets hashed into the
// manifest; re-invocations must resolve to the same hash.
eb::RunConfig resolve_config(const CommonArgs& common,
                             const std::function<void(eb::Json&)>& patch) {
  eb::Json j = eb::Json::object();
  std::string path = common.config_path;
  if (path.empty() &&
      std::filesystem::exists(std::filesystem::path(common.run_dir) /
                              "config.json"))
    path = (std::filesystem::path(common.run_dir) / "config.json").string();
  if (!path.empty()) {
    std::ifstream file(path);
    if (!file) throw eb::io_error("cannot open config " + path);
    try {
      file >> j;
    } catch (const std::exception& e) {
      throw eb::usage_error("invalid config " + path + ": " + e.what());
    }
  }
  if (patch) patch(j);
  return eb::RunConfig::from_json(j);
}

std::vector<int> parse_level_range(const std::string& spec) {
  // "1..8" or a single level "3".
  auto dots = spec.find("..");
  try {
    if (dots == std::string::npos) {
      int only = std::stoi(spec);
      return {only, only};
    }
    int lo = std::stoi(spec.substr(0, dots));
    int hi = std::stoi(spec.substr(dots + 2));
    return {lo, hi};
  } catch (const std::exception&) {
    throw eb::usage_error("invalid level range: " + spec);
  }
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw eb::usage_error("invalid integer list: " + spec);
    }
  }
  if (out.empty()) throw eb::usage_error("empty integer list: " + spec);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw eb::io_error("cannot write " + path.string());
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Benchmark harness for instruction-based image editing: compound "
      "instruction generation, direct/sequential/best-of-N editing, and "
      "VLM autograding"};
  app.require_subcommand(1);

  CommonArgs common;

  // generate ---------------------------------------------------------------
  auto* generate = app.add_subcommand(
      "generate", "Build instruction sequences and compounds for each image");
  std::string gen_images;
  std::optional<int> gen_n_atoms;
  std::optional<std::uint64_t> gen_seed;
  std::optional<std::string> gen_backend;
  std::optional<std::string> gen_templates;
  generate->add_option("--run-dir", common.run_dir, "Run directory");
  generate->add_option("--config", common.config_path, "Config file (JSON)");
  generate->add_option("--images", gen_images, "Image manifest JSONL");
  generate->add_option("--n-atoms", gen_n_atoms, "Sequence length N");
  generate->add_option("--seed", gen_seed, "Run seed");
  generate->add_option("--backend", gen_backend,
                       "Chat backend kind (simulated|remote)");
  generate->add_option("--templates", gen_templates, "Templates directory");

  // edit ---------------------------------------------------------------
  auto* edit = app.add_subcommand(
      "edit", "Execute edits for every (image, level) task");
  std::optional<std::string> edit_strategy;
  std::optional<int> edit_best_of;
  std::optional<std::string> edit_editor;
  edit->add_option("--run-dir", common.run_dir, "Run directory");
  edit->add_option("--config", common.config_path, "Config file (JSON)");
  edit->add_option("--strategy", edit_strategy,
                   "Editing strategy (direct|sequential)");
  edit->add_option("--best-of", edit_best_of, "Best-of-N candidate count");
  edit->add_option("--editor", edit_editor,
                   "Editor backend kind (simulated|remote)");

  // grade ---------------------------------------------------------------
  auto* grade = app.add_subcommand("grade", "Autograde edited outputs");
  std::optional<int> grade_k;
  std::optional<std::string> grade_scoring;
  bool grade_no_rubric = false;
  bool grade_cot_pq = false;
  bool grade_pq_with_instruction = false;
  grade->add_option("--run-dir", common.run_dir, "Run directory");
  grade->add_option("--config", common.config_path, "Config file (JSON)");
  grade->add_option("--k", grade_k, "Measurements per sample");
  grade->add_option("--scoring", grade_scoring,
                    "Scoring mode (numeric|token-prob)");
  grade->add_flag("--no-rubric", grade_no_rubric, "Disable rubric blocks");
  grade->add_flag("--cot-pq", grade_cot_pq,
                  "Enable reasoning directive for perceptual quality");
  grade->add_flag("--pq-with-instruction", grade_pq_with_instruction,
                  "Include the instruction in perceptual-quality prompts");

  // variance ---------------------------------------------------------------
  auto* variance = app.add_subcommand(
      "variance", "Repeat-averaging variance study on the simulated judge");
  std::string var_ks = "5,10,15,20";
  int var_trials = 4;
  int var_samples = 16;
  double var_noise = 1.0;
  std::string var_out;
  variance->add_option("--run-dir", common.run_dir, "Run directory");
  variance->add_option("--config", common.config_path, "Config file (JSON)");
  variance->add_option("--ks", var_ks, "Comma-separated K values");
  variance->add_option("--trials", var_trials, "Trials per sample");
  variance->add_option("--samples", var_samples, "Sample count");
  variance->add_option("--noise-sd", var_noise, "Judge noise (simulated)");
  variance->add_option("--out", var_out, "Write report JSON here");

  // meta ---------------------------------------------------------------
  auto* meta = app.add_subcommand(
      "meta", "Correlate metric scores with human pairwise preferences");
  std::string meta_annotations;
  std::string meta_baselines;
  std::string meta_stat = "pearson";
  std::string meta_out;
  meta->add_option("--run-dir", common.run_dir, "Run directory");
  meta->add_option("--config", common.config_path, "Config file (JSON)");
  meta->add_option("--annotations", meta_annotations, "Annotations JSONL")
      ->required();
  meta->add_option("--baselines", meta_baselines, "CLIP baselines JSONL");
  meta->add_option("--stat", meta_stat, "Correlation (pearson|spearman)");
  meta->add_option("--out", meta_out, "Write report JSON here");

  // report ---------------------------------------------------------------
  auto* report = app.add_subcommand(
      "report", "Per-model, per-level score tables with delta columns");
  std::string report_levels = "1..8";
  std::string report_out;
  report->add_option("--run-dir", common.run_dir, "Run directory");
  report->add_option("--config", common.config_path, "Config file (JSON)");
  report->add_option("--levels", report_levels, "Level range, e.g. 1..8");
  report->add_option("--out", report_out, "Write report JSON here");

  // make-scenes ---------------------------------------------------------------
  auto* scenes = app.add_subcommand(
      "make-scenes", "Synthesize a scene-image manifest for offline runs");
  std::string scenes_out = "images.jsonl";
  int scenes_count = 8;
  std::uint64_t scenes_seed = 0;
  scenes->add_option("--out", scenes_out, "Output JSONL path");
  scenes->add_option("--count", scenes_count, "Number of scenes");
  scenes->add_option("--seed", scenes_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (scenes->parsed()) {
      eb::write_scene_manifest(scenes_out, scenes_count, scenes_seed);
      std::cout << "wrote " << scenes_count << " scenes to " << scenes_out
                << "\n";
      return 0;
    }

    if (generate->parsed()) {
      auto cfg = resolve_config(common, [&](eb::Json& j) {
        if (!gen_images.empty()) j["images_path"] = gen_images;
        if (gen_n_atoms) j["pipeline"]["sequence_length"] = *gen_n_atoms;
        if (gen_seed) j["run_seed"] = *gen_seed;
        if (gen_backend) j["llm"]["kind"] = *gen_backend;
        if (gen_templates) j["templates_dir"] = *gen_templates;
      });
      eb::Runner runner(cfg, common.run_dir);
      runner.generate();
      std::cout << "instructions written to "
                << runner.paths().instructions().string() << "\n";
      return 0;
    }

    if (edit->parsed()) {
      auto cfg = resolve_config(common, [&](eb::Json& j) {
        if (edit_strategy) j["edit"]["strategy"] = *edit_strategy;
        if (edit_best_of) j["edit"]["best_of"] = *edit_best_of;
        if (edit_editor) j["editor"]["kind"] = *edit_editor;
      });
      eb::Runner runner(cfg, common.run_dir);
      runner.edit();
      std::cout << "edits written to " << runner.paths().edits().string()
                << "\n";
      return 0;
    }

    if (grade->parsed()) {
      auto cfg = resolve_config(common, [&](eb::Json& j) {
        if (grade_k) j["grader"]["repeats"] = *grade_k;
        if (grade_scoring) j["grader"]["scoring"] = *grade_scoring;
        if (grade_no_rubric) j["grader"]["rubric_enabled"] = false;
        if (grade_cot_pq) j["grader"]["cot_pq"] = true;
        if (grade_pq_with_instruction)
          j["grader"]["include_instruction_in_pq"] = true;
      });
      eb::Runner runner(cfg, common.run_dir);
      runner.grade();
      std::cout << "scores written to " << runner.paths().scores().string()
                << "\n";
      return 0;
    }

    if (variance->parsed()) {
      auto cfg = resolve_config(common, [&](eb::Json& j) {
        j["llm"]["kind"] = "simulated";
        j["llm"]["latent_mode"] = "constant";
        j["llm"]["noise_sd"] = var_noise;
      });
      auto report_data = eb::run_variance(cfg, parse_int_list(var_ks),
                                          var_trials, var_samples);
      std::cout << eb::render_variance_text(report_data);
      if (!var_out.empty())
        write_text(var_out, eb::variance_json(report_data).dump(2) + "\n");
      return 0;
    }

    if (meta->parsed()) {
      auto cfg = resolve_config(common, nullptr);
      eb::Runner runner(cfg, common.run_dir);
      auto annotations = eb::ingest_annotations(meta_annotations);
      std::vector<eb::BaselineScores> baselines;
      if (!meta_baselines.empty())
        baselines = eb::ingest_baselines(meta_baselines);
      eb::CorrelationStat stat;
      if (meta_stat == "pearson")
        stat = eb::CorrelationStat::pearson;
      else if (meta_stat == "spearman")
        stat = eb::CorrelationStat::spearman;
      else
        throw eb::usage_error("unknown stat: " + meta_stat);
      auto report_data = eb::run_meta(annotations, runner.scores_by_output(),
                                      baselines, cfg.grader, stat);
      std::cout << eb::render_meta_text(report_data);
      if (!meta_out.empty())
        write_text(meta_out, eb::meta_json(report_data).dump(2) + "\n");
      return 0;
    }

    if (report->parsed()) {
      auto cfg = resolve_config(common, nullptr);
      eb::Runner runner(cfg, common.run_dir);
      auto range = parse_level_range(report_levels);
      auto table = runner.report(range[0], range[1]);
      std::cout << eb::render_report_text(table);
      if (!report_out.empty())
        write_text(report_out, eb::report_json(table).dump(2) + "\n");
      return 0;
    }
  } catch (const eb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return eb::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
