#include "editbench/core/types.hpp"

#include <algorithm>
#include <cmath>

#include "editbench/core/error.hpp"
#include "editbench/core/hash.hpp"
#include "editbench/core/json_io.hpp"
#include "editbench/core/score.hpp"

namespace editbench {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::IF:
      return "Instruction Following";
    case Metric::IP:
      return "Identity Preservation";
    case Metric::PQ:
      return "Perceptual Quality";
  }
  return "";
}

std::string_view metric_key(Metric m) {
  switch (m) {
    case Metric::IF:
      return "if";
    case Metric::IP:
      return "ip";
    case Metric::PQ:
      return "pq";
  }
  return "";
}

std::optional<Metric> metric_from_key(std::string_view key) {
  if (key == "if") return Metric::IF;
  if (key == "ip") return Metric::IP;
  if (key == "pq") return Metric::PQ;
  return std::nullopt;
}

double ScoreTriple::get(Metric m) const {
  switch (m) {
    case Metric::IF:
      return if_score;
    case Metric::IP:
      return ip_score;
    case Metric::PQ:
      return pq_score;
  }
  return 0.0;
}

void ScoreTriple::set(Metric m, double value) {
  switch (m) {
    case Metric::IF:
      if_score = value;
      return;
    case Metric::IP:
      ip_score = value;
      return;
    case Metric::PQ:
      pq_score = value;
      return;
  }
}

ImageRef ImageRef::from_scene(SceneState scene) {
  scene.canonicalize();
  ImageRef ref;
  ref.kind = ImageKind::scene;
  ref.scene = std::move(scene);
  Json j = *ref.scene;
  ref.id = content_id(canonical_dump(j));
  return ref;
}

ImageRef ImageRef::from_path(std::string path) {
  ImageRef ref;
  ref.kind = ImageKind::file_path;
  ref.location = std::move(path);
  ref.id = content_id("file-path:" + ref.location);
  return ref;
}

ImageRef ImageRef::from_url(std::string url) {
  ImageRef ref;
  ref.kind = ImageKind::url;
  ref.location = std::move(url);
  ref.id = content_id("url:" + ref.location);
  return ref;
}

void ImageRef::validate() const {
  if (id.empty()) throw validation_error("ImageRef: empty id");
  if (kind == ImageKind::scene) {
    if (!scene.has_value() || !location.empty())
      throw validation_error("ImageRef: scene kind requires a scene payload");
  } else {
    if (scene.has_value() || location.empty())
      throw validation_error(
          "ImageRef: file-path/url kinds require a location payload");
  }
}

std::map<AtomicOperationType, int> InstructionSequence::op_type_counts()
    const {
  std::map<AtomicOperationType, int> counts;
  for (const auto& atom : atoms) counts[atom.op_type] += 1;
  return counts;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

GradeSummary GradeSummary::from_raw(
    std::map<Metric, std::vector<double>> raw) {
  GradeSummary g;
  std::size_t repeats = 0;
  for (Metric m : kAllMetrics) {
    auto it = raw.find(m);
    if (it == raw.end() || it->second.empty())
      throw validation_error("GradeSummary: missing raw measurements for " +
                             std::string(metric_key(m)));
    if (repeats == 0) repeats = it->second.size();
    if (it->second.size() != repeats)
      throw validation_error("GradeSummary: uneven raw measurement counts");
    g.triple.set(m, mean_of(it->second));
  }
  g.repeats_used = static_cast<int>(repeats);
  g.raw_measurements = std::move(raw);
  g.overall = overall_score(g.triple);
  return g;
}

void GradeSummary::validate() const {
  constexpr double kTol = 1e-9;
  for (Metric m : kAllMetrics) {
    auto it = raw_measurements.find(m);
    if (it == raw_measurements.end() ||
        static_cast<int>(it->second.size()) != repeats_used)
      throw validation_error("GradeSummary: raw list length != repeats_used");
    if (std::abs(mean_of(it->second) - triple.get(m)) > kTol)
      throw validation_error("GradeSummary: component is not the raw mean");
  }
  if (std::abs(overall_score(triple) - overall) > kTol)
    throw validation_error("GradeSummary: overall is not the triple mean");
}

}  // namespace editbench
