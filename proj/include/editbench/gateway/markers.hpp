#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "editbench/core/types.hpp"

namespace editbench {

// Structured-reply contracts shared by the prompt builders, the reply
// parsers, and the simulated backend. Few-shot flavor text lives in the
// templates directory; these lines are part of the wire format and stay in
// code.
inline constexpr std::string_view kScoreDirective =
    "Give your final score as \"Score: <score>\" on the last line.";
inline constexpr std::string_view kYesNoDirective =
    "Answer with a single word: Yes or No.";
inline constexpr std::string_view kCotDirective =
    "Explain your reasoning before answering the question.";
inline constexpr std::string_view kStage1Directive =
    "After any reasoning, reply with one line per instruction, each "
    "formatted exactly as \"k. [<Operation Type>] <instruction>\".";
inline constexpr std::string_view kStage2Directive =
    "Reply with \"NEEDED: yes\" or \"NEEDED: no\" on the first line, then "
    "\"SIMPLIFIED: <instruction>\" on the next line.";
inline constexpr std::string_view kStage3Directive =
    "After any reasoning, reply with \"COMPOUND: <instruction>\" on the "
    "final line.";

inline constexpr std::string_view kInstructionLabel = "Editing instruction: ";
inline constexpr std::string_view kCriterionLabel = "Criterion: ";
inline constexpr std::string_view kStage2InstructionLabel = "INSTRUCTION: ";
inline constexpr std::string_view kStage3AtomsHeader = "ATOMS:";
inline constexpr std::string_view kStage1CountPrefix = "Generate exactly ";
inline constexpr std::string_view kStage1RegenHeader =
    "Regenerate only the following instruction lines for the same image:";

std::string stage1_count_line(int n);

// Inline text form of an image. Scene payloads embed their canonical JSON
// so a prompt is self-contained; file/url payloads get a one-line header
// (the binary travels as an attachment part).
std::string image_block(std::string_view role, const ImageRef& ref);

struct ParsedImageBlock {
  std::string role;
  std::string id;
  std::optional<SceneState> scene;
};

// Finds the first image block with the given role in prompt text.
std::optional<ParsedImageBlock> find_image_block(std::string_view text,
                                                 std::string_view role);

std::optional<int> parse_stage1_count(std::string_view text);

}  // namespace editbench
