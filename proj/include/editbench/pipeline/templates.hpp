#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "editbench/core/types.hpp"

namespace editbench {

struct FewShotExample {
  std::string user;
  std::string assistant;
};

// Editable prompt material: stage system prompts, few-shot exchanges,
// grading system prompts, rubrics, and yes/no questions. Shipped as data
// files so experiments can swap wording without a rebuild.
struct TemplateSet {
  std::string stage1_system;
  std::string stage2_system;
  std::string stage3_system;
  std::vector<FewShotExample> stage1_fewshot;
  std::vector<FewShotExample> stage2_fewshot;
  std::vector<FewShotExample> stage3_fewshot;

  std::string grader_system_if;
  std::string grader_system_ip;
  std::string grader_system_pq;
  std::string rubric_if;
  std::string rubric_ip;
  std::string rubric_pq;
  std::map<Metric, std::string> yes_no_questions;

  static TemplateSet load(const std::filesystem::path& dir);
  static std::filesystem::path default_dir();

  const std::string& rubric(Metric m) const;
  const std::string& grader_system(Metric m) const;
};

}  // namespace editbench
