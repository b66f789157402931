#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "editbench/core/types.hpp"

namespace editbench {

// Structured reading of one editing clause. The simulated editor, the
// simulated chat backend, and the grading oracle all share this grammar, so
// text generated offline stays machine-applicable end to end.
enum class EditAction {
  add_element,
  remove_element,
  replace_element,
  move_element,
  resize_element,
  rotate_element,
  duplicate_element,
  change_color,
  apply_filter,
  change_texture,
  change_background,
  adjust_lighting,
  add_text,
  remove_text,
  change_text_properties,
  change_pose,
  change_expression,
  crop_image,
  reframe,
  zoom,
  add_effect,
  remove_effect,
  add_particles,
  remove_particles,
  unknown,
};

struct EditCommand {
  EditAction action = EditAction::unknown;
  std::string noun;                            // target noun phrase
  std::string replacement;                     // replace target
  std::map<std::string, std::string> attrs;    // element attribute changes
  std::map<std::string, std::string> global;   // global key changes
  std::vector<std::string> removed_global;     // global keys to erase
};

EditAction action_for(AtomicOperationType type);

// Compound instructions produced by the simulated backend are a plain
// ordered join of their clauses.
inline constexpr std::string_view kClauseSeparator = "; then ";

std::string join_clauses(const std::vector<std::string>& clauses);
std::vector<std::string> split_clauses(std::string_view text);

// Parses one clause. Unrecognized text yields action == unknown;
// the caller decides whether that is a no-op or an error.
EditCommand parse_clause(std::string_view clause);

// Strips a trailing intent decoration ("... to make the scene feel cozy")
// if one of the known suffixes is present. Returns the core clause.
std::string strip_intent_suffix(std::string_view text);
const std::vector<std::string>& intent_suffixes();

// Resolves a noun phrase against scene elements: exact noun match first,
// then head-word match, then word containment. Returns element ids in
// scene order.
std::vector<std::string> resolve_noun(const SceneState& scene,
                                      std::string_view noun);

int count_noun(const SceneState& scene, std::string_view noun);

}  // namespace editbench
