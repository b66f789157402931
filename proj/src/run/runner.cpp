#include "editbench/run/runner.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "editbench/core/concurrency.hpp"
#include "editbench/core/hash.hpp"
#include "editbench/core/rng.hpp"
#include "editbench/gateway/simulated.hpp"
#include "editbench/tts/sim_latents.hpp"
#include "editbench/tts/strategies.hpp"

namespace editbench {

namespace {

std::shared_ptr<ChatBackend> make_chat_backend(const RunConfig& cfg) {
  if (cfg.llm.kind == "remote")
    return std::make_shared<RemoteChatBackend>(cfg.llm.remote);
  SimulatedBackendConfig sim;
  sim.garble_probability = cfg.llm.garble_probability;
  LatentProvider latents;
  if (cfg.llm.latent_mode == "scene-oracle")
    latents = scene_oracle_latents(cfg.llm.noise_sd);
  else
    latents = metric_latent_provider({{Metric::IF, cfg.llm.quality_if},
                                      {Metric::IP, cfg.llm.quality_ip},
                                      {Metric::PQ, cfg.llm.quality_pq}},
                                     cfg.llm.noise_sd);
  return std::make_shared<SimulatedChatBackend>(std::move(sim),
                                                std::move(latents));
}

std::shared_ptr<EditorBackend> make_editor_backend(const RunConfig& cfg) {
  if (cfg.editor.kind == "remote")
    return std::make_shared<RemoteEditor>(cfg.editor.remote);
  SimulatedEditorConfig sim;
  sim.run_seed = cfg.run_seed;
  sim.fidelity = cfg.editor.fidelity;
  sim.collateral_rate = cfg.editor.collateral_rate;
  sim.artifact_rate = cfg.editor.artifact_rate;
  return std::make_shared<SimulatedEditor>(std::move(sim));
}

}  // namespace

namespace {

// Which stage fixes each config section. A section may only change while
// its owning stage is still incomplete.
const std::map<std::string, std::string>& config_section_owners() {
  static const std::map<std::string, std::string> owners = {
      {"run_seed", "generate"},   {"images_path", "generate"},
      {"templates_dir", "generate"}, {"pipeline", "generate"},
      {"llm", "generate"},        {"editor", "edit"},
      {"edit", "edit"},           {"grader", "grade"},
  };
  return owners;
}

}  // namespace

Runner::Runner(RunConfig config, std::filesystem::path run_dir)
    : config_(std::move(config)) {
  config_.validate();
  paths_.dir = std::move(run_dir);
  std::error_code ec;
  std::filesystem::create_directories(paths_.dir, ec);
  if (ec) throw io_error("cannot create run dir " + paths_.dir.string());

  auto write_config = [&]() {
    std::ofstream cfg_file(paths_.config());
    if (!cfg_file) throw io_error("cannot write " + paths_.config().string());
    cfg_file << config_.to_json_resolved().dump(2) << '\n';
  };

  std::string config_hash = config_.hash();
  if (std::filesystem::exists(paths_.manifest())) {
    manifest_ = RunManifest::load(paths_.manifest());
    RunConfig stored = RunConfig::load(paths_.config());
    if (manifest_.config_hash != stored.hash())
      throw validation_error(
          "run dir " + paths_.dir.string() +
          ": config.json does not match the manifest hash; refusing to "
          "continue");
    if (config_hash != stored.hash()) {
      // Accept overrides only for sections whose stage has not run yet.
      Json incoming = config_.to_json_resolved();
      Json on_disk = stored.to_json_resolved();
      for (const auto& [section, owner] : config_section_owners()) {
        if (incoming.at(section) == on_disk.at(section)) continue;
        if (manifest_.stage_done(owner))
          throw validation_error(
              "run dir " + paths_.dir.string() + ": config section '" +
              section + "' changed after stage '" + owner +
              "' completed; refusing to continue");
      }
      manifest_.config_hash = config_hash;
      write_config();
      save_manifest();
    }
  } else {
    manifest_ = RunManifest::create(config_.run_seed, config_hash, "", "");
    write_config();
  }

  auto backend = make_chat_backend(config_);
  GatewayOptions options;
  options.cache_dir = paths_.cache();
  gateway_ = std::make_shared<Gateway>(backend, std::move(options));
  editor_ = make_editor_backend(config_);
  if (manifest_.llm_backend_id.empty()) {
    manifest_.llm_backend_id = gateway_->backend_id();
    manifest_.editor_backend_id = editor_->id();
    save_manifest();
  }
}

void Runner::save_manifest() { manifest_.save(paths_.manifest()); }

const TemplateSet& Runner::templates() {
  if (!templates_.has_value())
    templates_ = TemplateSet::load(config_.templates_dir);
  return *templates_;
}

std::vector<ImageRef> Runner::load_images() const {
  if (config_.images_path.empty())
    throw usage_error("no images_path configured");
  std::ifstream file(config_.images_path);
  if (!file)
    throw io_error("cannot open image manifest " + config_.images_path);
  std::vector<ImageRef> images;
  std::string line;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      images.push_back(Json::parse(line).get<ImageRef>());
    } catch (const std::exception& e) {
      throw validation_error("image manifest line " +
                             std::to_string(line_number) + ": " + e.what());
    }
  }
  if (images.empty())
    throw validation_error("image manifest is empty: " + config_.images_path);
  return images;
}

TaskUniverse Runner::universe() const {
  TaskUniverse u;
  for (const auto& image : load_images()) u.image_ids.push_back(image.id);
  u.levels = config_.effective_levels();
  u.strategy = config_.edit.strategy;
  u.best_of = config_.edit.best_of;
  u.editor_id = editor_->id();
  return u;
}

WorkPlan Runner::plan() {
  auto instructions = JsonlStore::open(paths_.instructions());
  auto edits = JsonlStore::open(paths_.edits());
  auto scores = JsonlStore::open(paths_.scores());
  return resume(manifest_, config_.hash(), universe(), instructions, edits,
                scores);
}

void Runner::generate() {
  auto images = load_images();
  auto store = JsonlStore::open(paths_.instructions());
  std::set<std::string> done;
  for (const auto& envelope : store.records())
    done.insert(envelope.payload.at("image").at("id").get<std::string>());

  InstructionPipeline pipeline(gateway_, config_.pipeline, templates(),
                               config_.run_seed);

  std::vector<std::optional<InstructionsRecord>> results(images.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < images.size(); ++i)
    if (done.find(images[i].id) == done.end()) todo.push_back(i);

  // Images are independent; results append in input order.
  parallel_for_indexed(todo.size(), 4, [&](std::size_t t) {
    std::size_t i = todo[t];
    InstructionSequence seq = pipeline.generate_sequence(images[i]);
    std::vector<int> stage1_attempts;
    for (const auto& atom : seq.atoms)
      stage1_attempts.push_back(atom.provenance.attempts);
    seq = pipeline.simplify_all(std::move(seq));
    InstructionsRecord record;
    record.image = seq.image;
    record.compounds = pipeline.compound_all(seq);
    record.stage1_attempts = std::move(stage1_attempts);
    for (const auto& [op, count] : seq.op_type_counts())
      record.op_type_counts[op_type_name(op)] = count;
    record.atoms = std::move(seq.atoms);
    results[i] = std::move(record);
  });

  for (const auto& result : results) {
    if (!result.has_value()) continue;
    store.append(RecordEnvelope::make(std::string(kInstructionsRecordType),
                                      Json(*result)));
  }
  manifest_.mark_stage("generate");
  save_manifest();
}

void Runner::edit() {
  if (!manifest_.stage_done("generate"))
    throw validation_error("edit: run `generate` first");
  auto instructions = JsonlStore::open(paths_.instructions());
  std::map<std::string, InstructionsRecord> by_image;
  for (const auto& envelope : instructions.records()) {
    auto record = envelope.payload.get<InstructionsRecord>();
    by_image[record.image.id] = std::move(record);
  }

  auto store = JsonlStore::open(paths_.edits());
  std::set<std::string> done;
  for (const auto& envelope : store.records())
    done.insert(envelope.payload.at("edit_id").get<std::string>());

  GraderConfig step_grader_cfg = config_.grader;
  Grader grader(gateway_, step_grader_cfg, templates(), config_.run_seed);

  auto images = load_images();
  auto levels = config_.effective_levels();
  const std::string& strategy = config_.edit.strategy;
  const int n = config_.edit.best_of;

  for (const auto& image : images) {
    auto it = by_image.find(image.id);
    if (it == by_image.end())
      throw validation_error("edit: no instructions for image " + image.id);
    const InstructionsRecord& inst = it->second;
    for (int level : levels) {
      std::string edit_id =
          EditRecord::task_id(image.id, level, strategy, n, editor_->id());
      if (done.count(edit_id) > 0) continue;
      if (level > static_cast<int>(inst.compounds.size()))
        throw validation_error("edit: level exceeds available compounds");

      std::vector<AtomicInstruction> atoms(
          inst.atoms.begin(), inst.atoms.begin() + level);
      std::vector<CompoundInstruction> compounds(
          inst.compounds.begin(), inst.compounds.begin() + level);

      EditRecord record;
      record.edit_id = edit_id;
      record.image_id = image.id;
      record.level = level;
      record.strategy = strategy;
      record.n = n;
      record.editor_id = editor_->id();

      if (strategy == "direct") {
        if (n == 1) {
          EditResult r = direct_edit(*editor_, inst.image,
                                     compounds[static_cast<std::size_t>(level - 1)]);
          record.output = std::move(r.output);
          record.trace = std::move(r.trace);
        } else {
          BestOfNResult r = best_of_n_direct(
              *editor_, grader, inst.image,
              compounds[static_cast<std::size_t>(level - 1)], n);
          record.output = std::move(r.output);
          record.trace = std::move(r.trace);
        }
      } else {
        if (n == 1) {
          EditResult r = sequential_edit(*editor_, inst.image, atoms);
          record.output = std::move(r.output);
          record.trace = std::move(r.trace);
        } else {
          EditResult r = best_of_n_sequential(*editor_, grader, inst.image,
                                              atoms, compounds, n);
          record.output = std::move(r.output);
          record.trace = std::move(r.trace);
        }
      }
      store.append(
          RecordEnvelope::make(std::string(kEditRecordType), Json(record)));
    }
  }
  manifest_.mark_stage("edit");
  save_manifest();
}

void Runner::grade() {
  if (!manifest_.stage_done("edit"))
    throw validation_error("grade: run `edit` first");
  auto instructions = JsonlStore::open(paths_.instructions());
  std::map<std::string, InstructionsRecord> by_image;
  for (const auto& envelope : instructions.records()) {
    auto record = envelope.payload.get<InstructionsRecord>();
    by_image[record.image.id] = std::move(record);
  }
  auto edits = JsonlStore::open(paths_.edits());
  auto store = JsonlStore::open(paths_.scores());
  std::set<std::string> done;
  for (const auto& envelope : store.records())
    done.insert(envelope.payload.at("edit_id").get<std::string>());

  Grader grader(gateway_, config_.grader, templates(), config_.run_seed);
  std::string grader_cfg_hash =
      content_id(canonical_dump(config_.to_json_resolved().at("grader")));

  for (const auto& envelope : edits.records()) {
    auto edit = envelope.payload.get<EditRecord>();
    if (done.count(edit.edit_id) > 0) continue;
    const InstructionsRecord& inst = by_image.at(edit.image_id);
    const CompoundInstruction& instruction =
        inst.compounds.at(static_cast<std::size_t>(edit.level - 1));

    std::map<Metric, std::vector<double>> raw;
    std::vector<std::string> cache_keys;
    for (Metric metric : kAllMetrics) {
      auto [mean, measurements] =
          grader.grade_metric(metric, inst.image, edit.output, instruction);
      (void)mean;
      std::vector<double> values;
      for (const auto& m : measurements) {
        values.push_back(m.value);
        cache_keys.push_back(m.raw_response_ref);
      }
      raw[metric] = std::move(values);
    }

    ScoreRecord record;
    record.edit_id = edit.edit_id;
    record.image_id = edit.image_id;
    record.output_image_id = edit.output.id;
    record.level = edit.level;
    record.strategy = edit.strategy;
    record.n = edit.n;
    record.editor_id = edit.editor_id;
    record.llm_id = gateway_->backend_id();
    record.grade = GradeSummary::from_raw(std::move(raw));
    record.grader_config_hash = grader_cfg_hash;
    record.cache_keys = std::move(cache_keys);
    record.score_id =
        content_id(edit.edit_id + "|" + grader_cfg_hash + "|score");
    store.append(
        RecordEnvelope::make(std::string(kScoreRecordType), Json(record)));
  }
  manifest_.mark_stage("grade");
  save_manifest();
}

std::vector<ScoreRecord> Runner::score_records() {
  auto store = JsonlStore::open(paths_.scores());
  std::vector<ScoreRecord> out;
  for (const auto& envelope : store.records())
    out.push_back(envelope.payload.get<ScoreRecord>());
  return out;
}

std::map<std::string, GradeSummary> Runner::scores_by_output() {
  std::map<std::string, GradeSummary> out;
  for (const auto& record : score_records())
    out[record.output_image_id] = record.grade;
  return out;
}

ReportTable Runner::report(int level_min, int level_max) {
  return build_report(score_records(), level_min, level_max);
}

std::shared_ptr<Gateway> Runner::gateway() { return gateway_; }
std::shared_ptr<EditorBackend> Runner::editor_backend() { return editor_; }

// ---------------------------------------------------------------------------
// Variance study
// ---------------------------------------------------------------------------

VarianceReport run_variance(const RunConfig& config,
                            const std::vector<int>& ks, int trials,
                            int sample_count) {
  if (sample_count < 1)
    throw usage_error("variance: sample count must be >= 1");
  auto backend = make_chat_backend(config);
  auto gateway = std::make_shared<Gateway>(backend, GatewayOptions{});
  TemplateSet templates = TemplateSet::load(config.templates_dir);

  DeterministicRng scene_rng(config.run_seed ^ 0x5eedu);
  SceneState probe_scene = random_scene(scene_rng);
  ImageRef probe = ImageRef::from_scene(probe_scene);

  std::vector<std::string> samples;
  for (int i = 0; i < sample_count; ++i)
    samples.push_back("sample-" + std::to_string(i));

  SampleMeasurer measurer = [&, gateway](const std::string& sample_id) {
    auto counter = std::make_shared<int>(0);
    return [&, gateway, sample_id, counter]() {
      CompoundInstruction probe_instruction;
      probe_instruction.text = "calibration probe for " + sample_id;
      probe_instruction.level = 1;
      probe_instruction.source_atom_ids = {"probe"};
      ScoreTriple triple;
      for (Metric metric : kAllMetrics) {
        ChatRequest req = build_grading_prompt(
            metric, probe, probe, probe_instruction, config.grader, templates,
            config.run_seed, (*counter)++);
        ChatResponse resp = gateway->complete(req);
        double value = config.grader.scoring == ScoringMode::numeric
                           ? parse_numeric_score(resp.text)
                           : token_prob_score(extract_yes_no(resp));
        triple.set(metric, value);
      }
      return triple;
    };
  };

  std::vector<int> sorted_ks = ks;
  return variance_study(measurer, samples, std::move(sorted_ks), trials);
}

std::string render_variance_text(const VarianceReport& report) {
  std::string out = "K        IF-var   IP-var   PQ-var\n";
  for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
    char line[128];
    std::snprintf(
        line, sizeof(line), "%-8d %8.4f %8.4f %8.4f\n", report.ks[ki],
        report.per_metric.at(Metric::IF)[ki].mean_variation,
        report.per_metric.at(Metric::IP)[ki].mean_variation,
        report.per_metric.at(Metric::PQ)[ki].mean_variation);
    out += line;
  }
  return out;
}

Json variance_json(const VarianceReport& report) {
  Json per_metric = Json::object();
  for (const auto& [metric, entries] : report.per_metric) {
    Json list = Json::array();
    for (const auto& entry : entries)
      list.push_back(Json{{"k", entry.k},
                          {"mean_variation", entry.mean_variation},
                          {"per_sample", entry.per_sample}});
    per_metric[std::string(metric_key(metric))] = list;
  }
  return Json{{"ks", report.ks},
              {"trials", report.trials},
              {"per_metric", per_metric}};
}

// ---------------------------------------------------------------------------
// Meta-evaluation
// ---------------------------------------------------------------------------

MetaReport run_meta(const std::vector<PairwiseAnnotation>& annotations,
                    const std::map<std::string, GradeSummary>& scores,
                    const std::vector<BaselineScores>& baselines,
                    const GraderConfig& grader_config, CorrelationStat stat) {
  MetaReport report;
  report.stat = stat == CorrelationStat::pearson ? "pearson" : "spearman";

  MetaRow row;
  row.label = "autograder";
  row.scoring =
      grader_config.scoring == ScoringMode::numeric ? "Numeric" : "Token Prob";
  row.cot = grader_config.cot_if_ip;
  row.rubric = grader_config.rubric_enabled;
  auto try_corr = [&](Metric metric) -> std::optional<double> {
    try {
      return metric_human_correlation(annotations, scores, metric, stat);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  row.r_if = try_corr(Metric::IF);
  row.r_ip = try_corr(Metric::IP);
  row.r_pq = try_corr(Metric::PQ);
  report.rows.push_back(std::move(row));

  try {
    AggregatorComparison agg = compare_aggregators(annotations, scores, stat);
    report.r_overall_arithmetic = agg.r_arithmetic;
    report.r_overall_geometric = agg.r_geometric;
  } catch (const Error&) {
  }

  if (!baselines.empty()) {
    std::map<std::string, BaselineScores> by_sample;
    for (const auto& b : baselines) by_sample[b.sample_id] = b;
    auto column = [&](bool dir) {
      return [&by_sample, dir](const std::string& id) {
        auto it = by_sample.find(id);
        if (it == by_sample.end())
          throw validation_error("missing baseline for sample " + id);
        return dir ? it->second.clip_dir : it->second.clip_img;
      };
    };
    try {
      report.r_clip_dir = metric_human_correlation(
          annotations, column(true), PreferenceChannel::if_pref, stat);
    } catch (const Error&) {
    }
    try {
      report.r_clip_img = metric_human_correlation(
          annotations, column(false), PreferenceChannel::ip_pref, stat);
    } catch (const Error&) {
    }
  }
  return report;
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  if (!v.has_value()) return "      -";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%7.3f", *v);
  return buf;
}

}  // namespace

std::string render_meta_text(const MetaReport& report) {
  std::string out;
  out += "Scoring Method   CoT   Rubric        IF      IP      PQ\n";
  for (const auto& row : report.rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %-5s %-6s %s %s %s\n",
                  row.scoring.c_str(), row.cot ? "yes" : "no",
                  row.rubric ? "yes" : "no", opt_cell(row.r_if).c_str(),
                  opt_cell(row.r_ip).c_str(), opt_cell(row.r_pq).c_str());
    out += line;
  }
  if (report.r_clip_dir.has_value() || report.r_clip_img.has_value()) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %-5s %-6s %s %s %s\n",
                  "CLIP baselines", "-", "-",
                  opt_cell(report.r_clip_dir).c_str(),
                  opt_cell(report.r_clip_img).c_str(), "      -");
    out += line;
  }
  if (report.r_overall_arithmetic.has_value()) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "Overall aggregator: arithmetic %s vs geometric %s\n",
                  opt_cell(report.r_overall_arithmetic).c_str(),
                  opt_cell(report.r_overall_geometric).c_str());
    out += line;
  }
  return out;
}

Json meta_json(const MetaReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r{{"label", row.label},
           {"scoring", row.scoring},
           {"cot", row.cot},
           {"rubric", row.rubric}};
    r["if"] = row.r_if.has_value() ? Json(*row.r_if) : Json(nullptr);
    r["ip"] = row.r_ip.has_value() ? Json(*row.r_ip) : Json(nullptr);
    r["pq"] = row.r_pq.has_value() ? Json(*row.r_pq) : Json(nullptr);
    rows.push_back(std::move(r));
  }
  Json j{{"stat", report.stat}, {"rows", rows}};
  j["clip_dir"] =
      report.r_clip_dir.has_value() ? Json(*report.r_clip_dir) : Json(nullptr);
  j["clip_img"] =
      report.r_clip_img.has_value() ? Json(*report.r_clip_img) : Json(nullptr);
  j["overall_arithmetic"] = report.r_overall_arithmetic.has_value()
                                ? Json(*report.r_overall_arithmetic)
                                : Json(nullptr);
  j["overall_geometric"] = report.r_overall_geometric.has_value()
                               ? Json(*report.r_overall_geometric)
                               : Json(nullptr);
  return j;
}

void write_scene_manifest(const std::filesystem::path& path, int count,
                          std::uint64_t seed) {
  if (count < 1) throw usage_error("scene manifest: count must be >= 1");
  std::ofstream file(path);
  if (!file) throw io_error("cannot write image manifest " + path.string());
  DeterministicRng rng(seed);
  for (int i = 0; i < count; ++i) {
    ImageRef ref = ImageRef::from_scene(random_scene(rng));
    Json j = ref;
    file << j.dump() << '\n';
  }
}

}  // namespace editbench
