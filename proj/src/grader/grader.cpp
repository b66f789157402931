#include "editbench/grader/grader.hpp"

#include <cctype>
#include <cmath>

#include "editbench/core/concurrency.hpp"
#include "editbench/gateway/markers.hpp"

namespace editbench {

std::string_view scoring_mode_name(ScoringMode mode) {
  return mode == ScoringMode::numeric ? "numeric" : "token-prob";
}

ScoringMode scoring_mode_from_name(std::string_view name) {
  if (name == "numeric") return ScoringMode::numeric;
  if (name == "token-prob" || name == "token_prob")
    return ScoringMode::token_prob;
  throw usage_error("unknown scoring mode: " + std::string(name));
}

void GraderConfig::validate() const {
  if (repeats < 1) throw validation_error("GraderConfig: repeats must be >= 1");
  if (temperature < 0.0)
    throw validation_error("GraderConfig: temperature must be >= 0");
}

namespace {

void attach_image(ChatMessage& msg, std::string_view role,
                  const ImageRef& ref) {
  std::string label =
      (role == "input" ? "Input image:" : "Output image:");
  if (ref.kind == ImageKind::scene) {
    msg.content.push_back(
        ContentPart::make_text(label + "\n" + image_block(role, ref)));
  } else {
    msg.content.push_back(ContentPart::make_text(
        label + "\n" + image_block(role, ref)));
    msg.content.push_back(ContentPart::make_image(ref));
  }
}

}  // namespace

ChatRequest build_grading_prompt(Metric metric, const ImageRef& input_image,
                                 const ImageRef& output_image,
                                 const CompoundInstruction& instruction,
                                 const GraderConfig& cfg,
                                 const TemplateSet& templates,
                                 std::uint64_t run_seed, int attempt) {
  input_image.validate();
  output_image.validate();

  ChatRequest req;
  std::string system = templates.grader_system(metric);
  std::string rubric_block;
  if (cfg.rubric_enabled)
    rubric_block = "Here is the detailed rubric for scoring:\n" +
                   templates.rubric(metric);
  auto pos = system.find("{{RUBRIC}}");
  if (pos != std::string::npos) system.replace(pos, 10, rubric_block);
  bool cot = metric == Metric::PQ ? cfg.cot_pq : cfg.cot_if_ip;
  if (cot) system += "\n\n" + std::string(kCotDirective);
  req.system_prompt = std::move(system);

  ChatMessage user;
  user.role = ChatRole::user;
  bool include_instruction =
      metric != Metric::PQ || cfg.include_instruction_in_pq;
  if (metric != Metric::PQ) attach_image(user, "input", input_image);
  attach_image(user, "output", output_image);
  if (include_instruction)
    user.content.push_back(ContentPart::make_text(
        std::string(kInstructionLabel) + instruction.text));
  user.content.push_back(ContentPart::make_text(
      std::string(kCriterionLabel) + std::string(metric_name(metric))));
  if (cfg.scoring == ScoringMode::numeric) {
    user.content.push_back(
        ContentPart::make_text(std::string(kScoreDirective)));
  } else {
    user.content.push_back(ContentPart::make_text(
        templates.yes_no_questions.at(metric) + "\n" +
        std::string(kYesNoDirective)));
    req.want_logprobs = true;
  }
  req.messages.push_back(std::move(user));

  req.temperature = cfg.temperature;
  req.probability_mass = cfg.near_deterministic ? 1e-7 : 1.0;
  req.run_seed = run_seed;
  req.attempt = attempt;
  return req;
}

double parse_numeric_score(std::string_view text) {
  static const std::vector<std::string_view> markers = {
      "Score", "Instruction Following", "Identity Preservation",
      "Perceptual Quality"};
  std::size_t region_start = 0;
  for (auto marker : markers) {
    auto pos = text.rfind(marker);
    if (pos != std::string_view::npos)
      region_start = std::max(region_start, pos + marker.size());
  }
  std::string_view region = text.substr(region_start);

  bool any_number = false;
  bool in_range_found = false;
  double selected = 0.0;
  std::size_t i = 0;
  while (i < region.size()) {
    unsigned char c = static_cast<unsigned char>(region[i]);
    if (!std::isdigit(c)) {
      ++i;
      continue;
    }
    // Word boundary: prior char must not be alphanumeric.
    if (i > 0 &&
        (std::isalnum(static_cast<unsigned char>(region[i - 1])) != 0)) {
      while (i < region.size() &&
             std::isalnum(static_cast<unsigned char>(region[i])))
        ++i;
      continue;
    }
    std::size_t start = i;
    bool negative = i > 0 && region[i - 1] == '-';
    while (i < region.size() &&
           std::isdigit(static_cast<unsigned char>(region[i])))
      ++i;
    if (i + 1 < region.size() && region[i] == '.' &&
        std::isdigit(static_cast<unsigned char>(region[i + 1]))) {
      ++i;
      while (i < region.size() &&
             std::isdigit(static_cast<unsigned char>(region[i])))
        ++i;
    }
    double value = std::stod(std::string(region.substr(start, i - start)));
    if (negative) value = -value;
    any_number = true;
    if (value >= 0.0 && value <= 10.0) {
      in_range_found = true;
      selected = value;
    }
  }
  if (!any_number)
    throw parse_error("parse_numeric_score: no extractable score in reply");
  if (!in_range_found)
    throw parse_error("parse_numeric_score: score outside [0,10]");
  return selected;
}

double token_prob_score(const TokenProbPair& pair) {
  if (pair.prob_yes < 0.0 || pair.prob_no < 0.0)
    throw validation_error("token_prob_score: negative probability mass");
  double denom = pair.prob_yes + pair.prob_no;
  if (!(denom > 0.0))
    throw validation_error("token_prob_score: zero denominator");
  return 10.0 * pair.prob_yes / denom;
}

Grader::Grader(std::shared_ptr<Gateway> gateway, GraderConfig config,
               TemplateSet templates, std::uint64_t run_seed)
    : gateway_(std::move(gateway)),
      config_(config),
      templates_(std::move(templates)),
      run_seed_(run_seed) {
  config_.validate();
}

ChatRequest Grader::prompt_for(Metric metric, const ImageRef& input_image,
                               const ImageRef& output_image,
                               const CompoundInstruction& instruction,
                               int attempt) const {
  return build_grading_prompt(metric, input_image, output_image, instruction,
                              config_, templates_, run_seed_, attempt);
}

std::pair<double, std::vector<Measurement>> Grader::grade_metric(
    Metric metric, const ImageRef& input_image, const ImageRef& output_image,
    const CompoundInstruction& instruction) const {
  const int k = config_.repeats;
  std::vector<Measurement> raw(static_cast<std::size_t>(k));

  parallel_for_indexed(
      static_cast<std::size_t>(k), 4, [&](std::size_t slot) {
        // Parse failures burn the same retry budget as transport failures.
        // Retries salt the attempt index so the cache is not consulted for
        // the reply that already failed to parse.
        const int retry_limit = 5;
        int attempt = static_cast<int>(slot);
        for (int retries = 0;; ++retries) {
          ChatRequest req = prompt_for(metric, input_image, output_image,
                                       instruction, attempt);
          ChatResponse resp = gateway_->complete(req);
          try {
            double value = config_.scoring == ScoringMode::numeric
                               ? parse_numeric_score(resp.text)
                               : token_prob_score(extract_yes_no(resp));
            raw[slot] = Measurement{metric, value, gateway_->cache_key(req),
                                    attempt};
            return;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::parse || retries + 1 >= retry_limit)
              throw;
            attempt = (static_cast<int>(slot) + 1) * 100000 + retries + 1;
          }
        }
      });

  double sum = 0.0;
  for (const auto& m : raw) sum += m.value;
  return {sum / static_cast<double>(k), std::move(raw)};
}

GradeSummary Grader::grade_all(const ImageRef& input_image,
                               const ImageRef& output_image,
                               const CompoundInstruction& instruction) const {
  std::map<Metric, std::vector<double>> raw;
  for (Metric metric : kAllMetrics) {
    auto [mean, measurements] =
        grade_metric(metric, input_image, output_image, instruction);
    (void)mean;
    std::vector<double> values;
    values.reserve(measurements.size());
    for (const auto& m : measurements) values.push_back(m.value);
    raw[metric] = std::move(values);
  }
  return GradeSummary::from_raw(std::move(raw));
}

}  // namespace editbench
