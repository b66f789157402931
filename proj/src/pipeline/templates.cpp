#include "editbench/pipeline/templates.hpp"

#include <fstream>
#include <sstream>

#include "editbench/core/error.hpp"
#include "editbench/core/json_io.hpp"

namespace editbench {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw io_error("missing template file: " + path.string());
  std::ostringstream out;
  out << file.rdbuf();
  std::string text = out.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
    text.pop_back();
  return text;
}

std::vector<FewShotExample> read_fewshot(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw io_error("missing template file: " + path.string());
  Json j;
  try {
    file >> j;
  } catch (const std::exception& e) {
    throw io_error("invalid few-shot file " + path.string() + ": " + e.what());
  }
  std::vector<FewShotExample> out;
  for (const auto& entry : j) {
    FewShotExample ex;
    ex.user = entry.at("user").get<std::string>();
    ex.assistant = entry.at("assistant").get<std::string>();
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
  TemplateSet t;
  t.stage1_system = read_file(dir / "stage1_system.txt");
  t.stage2_system = read_file(dir / "stage2_system.txt");
  t.stage3_system = read_file(dir / "stage3_system.txt");
  t.stage1_fewshot = read_fewshot(dir / "stage1_fewshot.json");
  t.stage2_fewshot = read_fewshot(dir / "stage2_fewshot.json");
  t.stage3_fewshot = read_fewshot(dir / "stage3_fewshot.json");
  t.grader_system_if = read_file(dir / "grader_system_if.txt");
  t.grader_system_ip = read_file(dir / "grader_system_ip.txt");
  t.grader_system_pq = read_file(dir / "grader_system_pq.txt");
  t.rubric_if = read_file(dir / "rubric_if.txt");
  t.rubric_ip = read_file(dir / "rubric_ip.txt");
  t.rubric_pq = read_file(dir / "rubric_pq.txt");

  std::ifstream qfile(dir / "grader_yes_no.json");
  if (!qfile)
    throw io_error("missing template file: " +
                   (dir / "grader_yes_no.json").string());
  Json qj;
  qfile >> qj;
  for (Metric m : kAllMetrics)
    t.yes_no_questions[m] =
        qj.at(std::string(metric_key(m))).get<std::string>();
  return t;
}

std::filesystem::path TemplateSet::default_dir() {
#ifdef EDITBENCH_DEFAULT_TEMPLATES_DIR
  return EDITBENCH_DEFAULT_TEMPLATES_DIR;
#else
  return "templates";
#endif
}

const std::string& TemplateSet::rubric(Metric m) const {
  switch (m) {
    case Metric::IF:
      return rubric_if;
    case Metric::IP:
      return rubric_ip;
    case Metric::PQ:
      return rubric_pq;
  }
  return rubric_if;
}

const std::string& TemplateSet::grader_system(Metric m) const {
  switch (m) {
    case Metric::IF:
      return grader_system_if;
    case Metric::IP:
      return grader_system_ip;
    case Metric::PQ:
      return grader_system_pq;
  }
  return grader_system_if;
}

}  // namespace editbench
