#include "editbench/pipeline/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "editbench/core/edit_grammar.hpp"
#include "editbench/core/hash.hpp"
#include "editbench/core/taxonomy.hpp"
#include "editbench/gateway/markers.hpp"

namespace editbench {

void PipelineConfig::validate() const {
  if (sequence_length < 1)
    throw validation_error("PipelineConfig: sequence_length must be >= 1");
  if (atomic_word_bounds.min >= atomic_word_bounds.max)
    throw validation_error("PipelineConfig: word bounds must satisfy min < max");
  if (max_regen_attempts < 1)
    throw validation_error("PipelineConfig: max_regen_attempts must be >= 1");
  if (stage1_temperature < 0.0 || other_stage_temperature < 0.0)
    throw validation_error("PipelineConfig: temperatures must be >= 0");
}

namespace {

std::string trim_copy(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

int word_count(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string w;
  int n = 0;
  while (in >> w) ++n;
  return n;
}

int garbled_char_count(std::string_view text, int* total_out) {
  int garbled = 0;
  int total = 0;
  for (std::size_t i = 0; i < text.size(); ++i, ++total) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    // UTF-8 replacement character U+FFFD.
    if (c == 0xEF && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0xBF &&
        static_cast<unsigned char>(text[i + 2]) == 0xBD) {
      ++garbled;
      i += 2;
      continue;
    }
    if ((c < 0x20 && c != '\n' && c != '\t') || c == 0x7F) ++garbled;
  }
  *total_out = total;
  return garbled;
}

bool has_repeated_four_gram(std::string_view text) {
  std::vector<std::string> words;
  {
    std::istringstream in{std::string(text)};
    std::string w;
    while (in >> w) {
      std::transform(w.begin(), w.end(), w.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      words.push_back(std::move(w));
    }
  }
  if (words.size() < 4) return false;
  std::map<std::string, int> counts;
  for (std::size_t i = 0; i + 4 <= words.size(); ++i) {
    std::string gram =
        words[i] + ' ' + words[i + 1] + ' ' + words[i + 2] + ' ' + words[i + 3];
    if (++counts[gram] >= 4) return true;
  }
  return false;
}

struct ParsedStage1Line {
  int index = 0;
  AtomicOperationType op_type = AtomicOperationType::add_object;
  std::string text;
};

// Accepts lines of the form "k. [<Operation Type>] <instruction>"; anything
// else (CoT preamble included) is skipped.
std::vector<ParsedStage1Line> parse_stage1_reply(std::string_view reply) {
  std::vector<ParsedStage1Line> out;
  std::istringstream in{std::string(reply)};
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t digits = i;
    while (digits < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[digits])))
      ++digits;
    if (digits == i || digits >= line.size() || line[digits] != '.') continue;
    std::string rest = trim_copy(line.substr(digits + 1));
    if (rest.empty() || rest[0] != '[') continue;
    auto close = rest.find(']');
    if (close == std::string::npos) continue;
    auto op = operation_from_name(rest.substr(1, close - 1));
    if (!op) continue;
    ParsedStage1Line parsed;
    parsed.index = std::stoi(line.substr(i, digits - i));
    parsed.op_type = *op;
    parsed.text = trim_copy(rest.substr(close + 1));
    out.push_back(std::move(parsed));
  }
  return out;
}

std::string atom_identity(const std::string& image_id, int index,
                          AtomicOperationType op, const std::string& text) {
  Json j{{"image", image_id},
         {"index", index},
         {"op_type", op_type_name(op)},
         {"text", text}};
  return content_id(canonical_dump(j));
}

}  // namespace

FilterVerdict filter_check(std::string_view text, PipelineStage stage,
                           const PipelineConfig& cfg, int level) {
  FilterVerdict verdict;
  std::string trimmed = trim_copy(text);
  if (trimmed.empty()) {
    verdict.reasons.push_back("empty");
    verdict.pass = false;
    return verdict;
  }
  int total = 0;
  int garbled = garbled_char_count(text, &total);
  if (total > 0 &&
      static_cast<double>(garbled) / static_cast<double>(total) > 0.01)
    verdict.reasons.push_back("garbled");
  if (has_repeated_four_gram(text)) verdict.reasons.push_back("repetition");
  int words = word_count(text);
  int max_words = cfg.atomic_word_bounds.max;
  if (stage == PipelineStage::compounding)
    max_words = cfg.atomic_word_bounds.max * std::max(level, 1);
  if (words < cfg.atomic_word_bounds.min || words > max_words)
    verdict.reasons.push_back("length");
  verdict.pass = verdict.reasons.empty();
  return verdict;
}

InstructionPipeline::InstructionPipeline(std::shared_ptr<Gateway> gateway,
                                         PipelineConfig config,
                                         TemplateSet templates,
                                         std::uint64_t run_seed)
    : gateway_(std::move(gateway)),
      config_(config),
      templates_(std::move(templates)),
      run_seed_(run_seed) {
  config_.validate();
}

namespace {

void append_fewshot(ChatRequest& req,
                    const std::vector<FewShotExample>& examples) {
  for (const auto& ex : examples) {
    req.messages.push_back(ChatMessage::text_message(ChatRole::user, ex.user));
    req.messages.push_back(
        ChatMessage::text_message(ChatRole::assistant, ex.assistant));
  }
}

std::string substitute(std::string text, std::string_view placeholder,
                       std::string_view value) {
  auto pos = text.find(placeholder);
  if (pos != std::string::npos)
    text.replace(pos, placeholder.size(), value);
  return text;
}

}  // namespace

InstructionSequence InstructionPipeline::generate_sequence(
    const ImageRef& image) const {
  image.validate();
  const int n = config_.sequence_length;

  struct Slot {
    bool accepted = false;
    AtomicInstruction atom;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(n));

  auto build_request = [&](int round,
                           const std::vector<int>& pending) -> ChatRequest {
    ChatRequest req;
    req.system_prompt = substitute(templates_.stage1_system, "{{TAXONOMY}}",
                                   taxonomy_prompt_listing());
    if (config_.stage1_cot)
      req.system_prompt += "\n\n" + std::string(kCotDirective);
    append_fewshot(req, templates_.stage1_fewshot);

    std::string user = image_block("input", image) + "\n\n";
    if (round == 0) {
      user += stage1_count_line(n) + "\n";
    } else {
      user += "Accepted instructions:\n";
      for (int k = 1; k <= n; ++k) {
        const Slot& slot = slots[static_cast<std::size_t>(k - 1)];
        if (!slot.accepted) continue;
        user += std::to_string(k) + ". [" +
                std::string(operation_info(slot.atom.op_type).name) + "] " +
                slot.atom.text + "\n";
      }
      user += std::string(kStage1RegenHeader) + "\n";
      for (int k : pending) user += std::to_string(k) + ". [flawed]\n";
    }
    user += std::string(kStage1Directive);
    req.messages.push_back(ChatMessage::text_message(ChatRole::user, user));
    req.temperature = config_.stage1_temperature;
    req.run_seed = run_seed_;
    req.attempt = round;
    return req;
  };

  std::vector<int> pending;
  for (int k = 1; k <= n; ++k) pending.push_back(k);

  for (int round = 0; round <= config_.max_regen_attempts; ++round) {
    ChatResponse resp = gateway_->complete(build_request(round, pending));
    auto lines = parse_stage1_reply(resp.text);
    for (const auto& line : lines) {
      if (line.index < 1 || line.index > n) continue;
      Slot& slot = slots[static_cast<std::size_t>(line.index - 1)];
      if (slot.accepted) continue;
      if (!filter_check(line.text, PipelineStage::sequence_generation, config_)
               .pass)
        continue;
      slot.accepted = true;
      slot.atom.id = atom_identity(image.id, line.index, line.op_type,
                                   line.text);
      slot.atom.text = line.text;
      slot.atom.op_type = line.op_type;
      slot.atom.simplified = false;
      slot.atom.provenance = Provenance{1, round};
    }
    pending.clear();
    for (int k = 1; k <= n; ++k)
      if (!slots[static_cast<std::size_t>(k - 1)].accepted)
        pending.push_back(k);
    if (pending.empty()) break;
    if (round == config_.max_regen_attempts)
      throw parse_error("stage 1 regeneration exhausted after " +
                        std::to_string(config_.max_regen_attempts) +
                        " attempts (" + std::to_string(pending.size()) +
                        " instructions still flawed)");
  }

  InstructionSequence seq;
  seq.image = image;
  for (auto& slot : slots) seq.atoms.push_back(std::move(slot.atom));
  return seq;
}

AtomicInstruction InstructionPipeline::simplify(
    const AtomicInstruction& atom) const {
  if (atom.simplified)
    throw validation_error("simplify: atom is already simplified");

  for (int round = 0;; ++round) {
    ChatRequest req;
    req.system_prompt = templates_.stage2_system;
    append_fewshot(req, templates_.stage2_fewshot);
    req.messages.push_back(ChatMessage::text_message(
        ChatRole::user, std::string(kStage2InstructionLabel) + atom.text +
                            "\n" + std::string(kStage2Directive)));
    req.temperature = config_.other_stage_temperature;
    req.run_seed = run_seed_;
    req.attempt = round;
    ChatResponse resp = gateway_->complete(req);

    std::optional<bool> needed;
    std::optional<std::string> simplified;
    std::istringstream in{resp.text};
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim_copy(line);
      if (t.rfind("NEEDED:", 0) == 0) {
        std::string value = trim_copy(t.substr(7));
        std::transform(value.begin(), value.end(), value.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (value == "yes") needed = true;
        if (value == "no") needed = false;
      } else if (t.rfind("SIMPLIFIED:", 0) == 0) {
        simplified = trim_copy(t.substr(11));
      }
    }

    bool format_ok = needed.has_value() && (!*needed || simplified.has_value());
    std::string new_text = atom.text;
    if (format_ok && *needed) {
      new_text = *simplified;
      if (!filter_check(new_text, PipelineStage::simplification, config_).pass)
        format_ok = false;
    }
    if (format_ok) {
      AtomicInstruction out = atom;
      out.text = new_text;
      out.simplified = true;
      out.provenance = Provenance{2, round};
      return out;
    }
    if (round >= config_.max_regen_attempts)
      throw parse_error(
          "simplify: response-format violation after retries for atom " +
          atom.id);
  }
}

InstructionSequence InstructionPipeline::simplify_all(
    InstructionSequence seq) const {
  for (auto& atom : seq.atoms) atom = simplify(atom);
  return seq;
}

CompoundInstruction InstructionPipeline::compound(
    const InstructionSequence& seq, int i) const {
  const int n = static_cast<int>(seq.atoms.size());
  if (n == 0) throw validation_error("compound: empty sequence");
  if (i < 1 || i > n)
    throw validation_error("compound: level " + std::to_string(i) +
                           " out of range 1.." + std::to_string(n));
  for (const auto& atom : seq.atoms)
    if (!atom.simplified)
      throw validation_error("compound: atoms must be simplified first");

  CompoundInstruction out;
  out.level = i;
  for (int k = 0; k < i; ++k)
    out.source_atom_ids.push_back(seq.atoms[static_cast<std::size_t>(k)].id);

  if (i == 1) {
    // Level 1 is the first atomic instruction, byte for byte.
    out.text = seq.atoms[0].text;
    return out;
  }

  for (int round = 0;; ++round) {
    ChatRequest req;
    req.system_prompt = templates_.stage3_system;
    if (config_.stage3_cot)
      req.system_prompt += "\n\n" + std::string(kCotDirective);
    append_fewshot(req, templates_.stage3_fewshot);
    std::string user = image_block("input", seq.image) + "\n\n" +
                       std::string(kStage3AtomsHeader) + "\n";
    for (int k = 0; k < i; ++k)
      user += std::to_string(k + 1) + ". " +
              seq.atoms[static_cast<std::size_t>(k)].text + "\n";
    user += std::string(kStage3Directive);
    req.messages.push_back(ChatMessage::text_message(ChatRole::user, user));
    req.temperature = config_.other_stage_temperature;
    req.run_seed = run_seed_;
    // Levels must not share cache entries: salt the attempt with the level.
    req.attempt = i * 1000 + round;
    ChatResponse resp = gateway_->complete(req);

    std::optional<std::string> text;
    std::istringstream in{resp.text};
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim_copy(line);
      if (t.rfind("COMPOUND:", 0) == 0) text = trim_copy(t.substr(9));
    }
    if (text.has_value() &&
        filter_check(*text, PipelineStage::compounding, config_, i).pass) {
      out.text = *text;
      return out;
    }
    if (round >= config_.max_regen_attempts)
      throw parse_error("compound: filtration exhausted at level " +
                        std::to_string(i));
  }
}

std::vector<CompoundInstruction> InstructionPipeline::compound_all(
    const InstructionSequence& seq) const {
  if (seq.atoms.empty())
    throw validation_error("compound_all: empty sequence");
  std::vector<CompoundInstruction> out;
  for (int i = 1; i <= static_cast<int>(seq.atoms.size()); ++i)
    out.push_back(compound(seq, i));
  return out;
}

}  // namespace editbench
