#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "editbench/core/scene.hpp"

namespace editbench {

// ---------------------------------------------------------------------------
// Operation taxonomy
// ---------------------------------------------------------------------------

enum class OperationCategory {
  object_manipulation,
  color_tone,
  texture_material,
  background_environment,
  lighting_shadows,
  text_symbols,
  composition_cropping,
  pose_expression,
  special_effects,
};

inline constexpr int kCategoryCount = 9;

enum class AtomicOperationType {
  add_object,
  remove_object,
  replace_object,
  move_object,
  resize_object,
  rotate_object,
  duplicate_object,
  change_color,
  apply_filter_weather,
  change_texture,
  change_background,
  adjust_lighting,
  add_text,
  remove_text,
  change_text_properties,
  change_pose,
  change_facial_expression,
  crop_image,
  reframe_composition,
  zoom_in_out,
  add_special_effects,
  remove_special_effects,
  add_particles,
  remove_particles,
};

inline constexpr int kOperationCount = 24;

// ---------------------------------------------------------------------------
// Instructions
// ---------------------------------------------------------------------------

// Which pipeline stage last produced the instruction text, plus how many
// regeneration rounds that stage needed (0 = accepted on the first reply).
struct Provenance {
  int stage = 1;
  int attempts = 0;

  bool operator==(const Provenance&) const = default;
};

struct AtomicInstruction {
  std::string id;
  std::string text;
  AtomicOperationType op_type = AtomicOperationType::add_object;
  bool simplified = false;
  Provenance provenance{};

  bool operator==(const AtomicInstruction&) const = default;
};

// ---------------------------------------------------------------------------
// Images
// ---------------------------------------------------------------------------

enum class ImageKind { file_path, url, scene };

struct ImageRef {
  std::string id;
  ImageKind kind = ImageKind::scene;
  std::string location;               // file-path and url payloads
  std::optional<SceneState> scene;    // scene payload

  bool operator==(const ImageRef&) const = default;

  static ImageRef from_scene(SceneState scene);
  static ImageRef from_path(std::string path);
  static ImageRef from_url(std::string url);

  // Checks the one-payload-per-kind rule; throws a validation error.
  void validate() const;
};

struct InstructionSequence {
  ImageRef image;
  std::vector<AtomicInstruction> atoms;

  // Per-image operation distribution, for dataset statistics.
  std::map<AtomicOperationType, int> op_type_counts() const;
};

struct CompoundInstruction {
  std::string text;
  int level = 1;
  std::vector<std::string> source_atom_ids;

  bool operator==(const CompoundInstruction&) const = default;
};

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

enum class Metric { IF, IP, PQ };

inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::IF, Metric::IP,
                                                      Metric::PQ};

std::string_view metric_name(Metric m);       // "Instruction Following", ...
std::string_view metric_key(Metric m);        // "if", "ip", "pq"
std::optional<Metric> metric_from_key(std::string_view key);

struct ScoreTriple {
  double if_score = 0.0;
  double ip_score = 0.0;
  double pq_score = 0.0;

  bool operator==(const ScoreTriple&) const = default;

  double get(Metric m) const;
  void set(Metric m, double value);
};

struct GradeSummary {
  ScoreTriple triple{};
  double overall = 0.0;
  int repeats_used = 0;
  std::map<Metric, std::vector<double>> raw_measurements;

  // Computes overall and per-metric means from the raw lists; each raw list
  // must be nonempty and of equal length.
  static GradeSummary from_raw(std::map<Metric, std::vector<double>> raw);

  // Consistency check used when records are read back from disk.
  void validate() const;
};

}  // namespace editbench
