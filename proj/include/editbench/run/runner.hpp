#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "editbench/meta/stats.hpp"
#include "editbench/run/config.hpp"
#include "editbench/store/jsonl_store.hpp"
#include "editbench/store/manifest.hpp"
#include "editbench/store/report.hpp"
#include "editbench/store/resume.hpp"

namespace editbench {

struct RunPaths {
  std::filesystem::path dir;

  std::filesystem::path manifest() const { return dir / "manifest.json"; }
  std::filesystem::path config() const { return dir / "config.json"; }
  std::filesystem::path instructions() const {
    return dir / "instructions.jsonl";
  }
  std::filesystem::path edits() const { return dir / "edits.jsonl"; }
  std::filesystem::path scores() const { return dir / "scores.jsonl"; }
  std::filesystem::path cache() const { return dir / "cache"; }
};

// Owns a run directory: resolved config, manifest, the three JSONL stores,
// and the backends. Stages are idempotent; finished work is skipped via the
// resume plan.
class Runner {
 public:
  Runner(RunConfig config, std::filesystem::path run_dir);

  void generate();
  void edit();
  void grade();

  WorkPlan plan();

  ReportTable report(int level_min, int level_max);

  const RunManifest& manifest() const { return manifest_; }
  const RunConfig& config() const { return config_; }
  const RunPaths& paths() const { return paths_; }

  std::vector<ImageRef> load_images() const;
  std::vector<ScoreRecord> score_records();
  std::map<std::string, GradeSummary> scores_by_output();

  std::shared_ptr<Gateway> gateway();
  std::shared_ptr<EditorBackend> editor_backend();

 private:
  TaskUniverse universe() const;
  void save_manifest();

  RunConfig config_;
  RunPaths paths_;
  RunManifest manifest_;
  std::shared_ptr<Gateway> gateway_;
  std::shared_ptr<EditorBackend> editor_;
  std::optional<TemplateSet> templates_;
  const TemplateSet& templates();
};

// Variance protocol over the simulated judge: draws come from real grading
// prompts with increasing attempt indices.
VarianceReport run_variance(const RunConfig& config,
                            const std::vector<int>& ks, int trials,
                            int sample_count);

std::string render_variance_text(const VarianceReport& report);
Json variance_json(const VarianceReport& report);

struct MetaRow {
  std::string label;
  std::string scoring;
  bool cot = false;
  bool rubric = false;
  std::optional<double> r_if;
  std::optional<double> r_ip;
  std::optional<double> r_pq;
};

struct MetaReport {
  std::string stat;
  std::vector<MetaRow> rows;
  std::optional<double> r_clip_dir;
  std::optional<double> r_clip_img;
  std::optional<double> r_overall_arithmetic;
  std::optional<double> r_overall_geometric;
};

MetaReport run_meta(const std::vector<PairwiseAnnotation>& annotations,
                    const std::map<std::string, GradeSummary>& scores,
                    const std::vector<BaselineScores>& baselines,
                    const GraderConfig& grader_config, CorrelationStat stat);

std::string render_meta_text(const MetaReport& report);
Json meta_json(const MetaReport& report);

// Synthesizes a scene-image manifest (JSONL of ImageRef) for offline runs.
void write_scene_manifest(const std::filesystem::path& path, int count,
                          std::uint64_t seed);

}  // namespace editbench
