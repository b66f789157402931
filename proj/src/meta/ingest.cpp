#include "editbench/meta/ingest.hpp"

#include <cmath>
#include <fstream>

#include "editbench/core/error.hpp"

namespace editbench {

void PairwiseAnnotation::validate() const {
  auto in_scale = [](int p) { return p >= -1 && p <= 1; };
  if (!in_scale(pref_if) || !in_scale(pref_ip) || !in_scale(pref_pq) ||
      !in_scale(pref_overall))
    throw validation_error("preference values must be in {-1, 0, +1}");
  if (input_id.empty() || instruction_id.empty() || output_a_id.empty() ||
      output_b_id.empty() || rater_id.empty())
    throw validation_error("annotation ids must be nonempty");
  if (level < 1) throw validation_error("annotation level must be >= 1");
}

void BaselineScores::validate() const {
  if (sample_id.empty())
    throw validation_error("baseline sample_id must be nonempty");
  if (!std::isfinite(clip_dir) || !std::isfinite(clip_img))
    throw validation_error("baseline scores must be finite");
}

void to_json(Json& j, const PairwiseAnnotation& a) {
  j = Json{{"input_id", a.input_id},
           {"instruction_id", a.instruction_id},
           {"level", a.level},
           {"output_a_id", a.output_a_id},
           {"output_b_id", a.output_b_id},
           {"pref_if", a.pref_if},
           {"pref_ip", a.pref_ip},
           {"pref_pq", a.pref_pq},
           {"pref_overall", a.pref_overall},
           {"rater_id", a.rater_id}};
}

void from_json(const Json& j, PairwiseAnnotation& a) {
  j.at("input_id").get_to(a.input_id);
  j.at("instruction_id").get_to(a.instruction_id);
  j.at("level").get_to(a.level);
  j.at("output_a_id").get_to(a.output_a_id);
  j.at("output_b_id").get_to(a.output_b_id);
  j.at("pref_if").get_to(a.pref_if);
  j.at("pref_ip").get_to(a.pref_ip);
  j.at("pref_pq").get_to(a.pref_pq);
  j.at("pref_overall").get_to(a.pref_overall);
  j.at("rater_id").get_to(a.rater_id);
  a.validate();
}

void to_json(Json& j, const BaselineScores& b) {
  j = Json{{"sample_id", b.sample_id},
           {"clip_dir", b.clip_dir},
           {"clip_img", b.clip_img}};
}

void from_json(const Json& j, BaselineScores& b) {
  j.at("sample_id").get_to(b.sample_id);
  if (!j.at("clip_dir").is_number() || !j.at("clip_img").is_number())
    throw validation_error("clip_dir/clip_img must be numeric");
  j.at("clip_dir").get_to(b.clip_dir);
  j.at("clip_img").get_to(b.clip_img);
  b.validate();
}

namespace {

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path,
                          const char* what) {
  std::ifstream file(path);
  if (!file)
    throw io_error(std::string("cannot open ") + what + " file: " +
                   path.string());
  std::vector<T> out;
  std::string line;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line).get<T>());
    } catch (const std::exception& e) {
      throw validation_error(std::string(what) + " line " +
                             std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<PairwiseAnnotation> ingest_annotations(
    const std::filesystem::path& path) {
  return read_jsonl<PairwiseAnnotation>(path, "annotations");
}

std::vector<BaselineScores> ingest_baselines(
    const std::filesystem::path& path) {
  return read_jsonl<BaselineScores>(path, "baselines");
}

}  // namespace editbench
