#include "editbench/core/edit_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace editbench {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

std::string strip_article(std::string text) {
  if (starts_with(text, "an ")) return text.substr(3);
  if (starts_with(text, "a ")) return text.substr(2);
  if (starts_with(text, "the ")) return text.substr(4);
  return text;
}

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

bool is_color_word(const std::string& w) {
  const auto& colors = color_words();
  return std::find(colors.begin(), colors.end(), w) != colors.end();
}

// Splits "<adjectives> <noun phrase>" pulling known colors into attrs.
void parse_noun_phrase(std::string phrase, std::string& noun,
                       std::map<std::string, std::string>& attrs) {
  auto words = words_of(strip_article(std::move(phrase)));
  std::size_t start = 0;
  while (start + 1 < words.size() && is_color_word(words[start])) {
    attrs["color"] = words[start];
    ++start;
  }
  std::string out;
  for (std::size_t i = start; i < words.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  noun = out;
}

// Extracts the text between prefix and the first following occurrence of
// `stop` (or the rest of the string when stop is absent/empty).
std::optional<std::pair<std::string, std::string>> split_once(
    std::string_view s, std::string_view stop) {
  auto pos = s.find(stop);
  if (pos == std::string_view::npos) return std::nullopt;
  return std::make_pair(trim(s.substr(0, pos)),
                        trim(s.substr(pos + stop.size())));
}

}  // namespace

EditAction action_for(AtomicOperationType type) {
  switch (type) {
    case AtomicOperationType::add_object:
      return EditAction::add_element;
    case AtomicOperationType::remove_object:
      return EditAction::remove_element;
    case AtomicOperationType::replace_object:
      return EditAction::replace_element;
    case AtomicOperationType::move_object:
      return EditAction::move_element;
    case AtomicOperationType::resize_object:
      return EditAction::resize_element;
    case AtomicOperationType::rotate_object:
      return EditAction::rotate_element;
    case AtomicOperationType::duplicate_object:
      return EditAction::duplicate_element;
    case AtomicOperationType::change_color:
      return EditAction::change_color;
    case AtomicOperationType::apply_filter_weather:
      return EditAction::apply_filter;
    case AtomicOperationType::change_texture:
      return EditAction::change_texture;
    case AtomicOperationType::change_background:
      return EditAction::change_background;
    case AtomicOperationType::adjust_lighting:
      return EditAction::adjust_lighting;
    case AtomicOperationType::add_text:
      return EditAction::add_text;
    case AtomicOperationType::remove_text:
      return EditAction::remove_text;
    case AtomicOperationType::change_text_properties:
      return EditAction::change_text_properties;
    case AtomicOperationType::change_pose:
      return EditAction::change_pose;
    case AtomicOperationType::change_facial_expression:
      return EditAction::change_expression;
    case AtomicOperationType::crop_image:
      return EditAction::crop_image;
    case AtomicOperationType::reframe_composition:
      return EditAction::reframe;
    case AtomicOperationType::zoom_in_out:
      return EditAction::zoom;
    case AtomicOperationType::add_special_effects:
      return EditAction::add_effect;
    case AtomicOperationType::remove_special_effects:
      return EditAction::remove_effect;
    case AtomicOperationType::add_particles:
      return EditAction::add_particles;
    case AtomicOperationType::remove_particles:
      return EditAction::remove_particles;
  }
  return EditAction::unknown;
}

std::string join_clauses(const std::vector<std::string>& clauses) {
  std::string out;
  for (const auto& clause : clauses) {
    if (!out.empty()) out += kClauseSeparator;
    out += clause;
  }
  return out;
}

std::vector<std::string> split_clauses(std::string_view text) {
  std::vector<std::string> clauses;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto next = text.find(kClauseSeparator, pos);
    if (next == std::string_view::npos) {
      clauses.push_back(trim(text.substr(pos)));
      break;
    }
    clauses.push_back(trim(text.substr(pos, next - pos)));
    pos = next + kClauseSeparator.size();
  }
  return clauses;
}

const std::vector<std::string>& intent_suffixes() {
  static const std::vector<std::string> suffixes = {
      " to make the scene feel playful",
      " to make the scene feel cozy",
      " to give the image a dramatic touch",
      " to make the composition more striking",
      " to add a whimsical mood",
  };
  return suffixes;
}

std::string strip_intent_suffix(std::string_view text) {
  std::string t = trim(text);
  bool had_period = ends_with(t, ".");
  if (had_period) t.pop_back();
  std::string lowered = lower(t);
  for (const auto& suffix : intent_suffixes()) {
    if (ends_with(lowered, suffix)) {
      t.erase(t.size() - suffix.size());
      break;
    }
  }
  return trim(t);
}

EditCommand parse_clause(std::string_view clause) {
  EditCommand cmd;
  std::string original = strip_intent_suffix(clause);
  std::string text = lower(original);

  // Quoted text content is taken from the original to keep its casing.
  auto quoted = [&]() -> std::string {
    auto open = original.find('"');
    if (open == std::string::npos) return {};
    auto close = original.find('"', open + 1);
    if (close == std::string::npos) return {};
    return original.substr(open + 1, close - open - 1);
  };

  if (starts_with(text, "add the text ")) {
    cmd.action = EditAction::add_text;
    cmd.noun = "text";
    cmd.attrs["content"] = quoted();
    return cmd;
  }
  if (starts_with(text, "remove the text")) {
    cmd.action = EditAction::remove_text;
    cmd.noun = "text";
    return cmd;
  }
  if (starts_with(text, "change the text ")) {
    // "change the text <property> to <value>"
    auto rest = text.substr(16);
    if (auto parts = split_once(rest, " to ")) {
      cmd.action = EditAction::change_text_properties;
      cmd.noun = "text";
      cmd.attrs[parts->first] = parts->second;
      return cmd;
    }
  }
  if (starts_with(text, "add ") && ends_with(text, " particles")) {
    cmd.action = EditAction::add_particles;
    cmd.noun = strip_article(text.substr(4, text.size() - 4 - 10));
    cmd.global["particle:" + cmd.noun] = "on";
    return cmd;
  }
  if (starts_with(text, "remove the ") && ends_with(text, " particles")) {
    cmd.action = EditAction::remove_particles;
    cmd.noun = trim(text.substr(11, text.size() - 11 - 10));
    cmd.removed_global.push_back("particle:" + cmd.noun);
    return cmd;
  }
  if ((starts_with(text, "add a ") || starts_with(text, "add an ")) &&
      ends_with(text, " effect")) {
    cmd.action = EditAction::add_effect;
    cmd.noun = strip_article(text.substr(4, text.size() - 4 - 7));
    cmd.global["effect:" + cmd.noun] = "on";
    return cmd;
  }
  if (starts_with(text, "remove the ") && ends_with(text, " effect")) {
    cmd.action = EditAction::remove_effect;
    cmd.noun = trim(text.substr(11, text.size() - 11 - 7));
    cmd.removed_global.push_back("effect:" + cmd.noun);
    return cmd;
  }
  if (starts_with(text, "add ")) {
    cmd.action = EditAction::add_element;
    parse_noun_phrase(text.substr(4), cmd.noun, cmd.attrs);
    return cmd;
  }
  if (starts_with(text, "replace the ")) {
    auto rest = text.substr(12);
    if (auto parts = split_once(rest, " with ")) {
      cmd.action = EditAction::replace_element;
      cmd.noun = parts->first;
      parse_noun_phrase(parts->second, cmd.replacement, cmd.attrs);
      return cmd;
    }
  }
  if (starts_with(text, "remove the ")) {
    cmd.action = EditAction::remove_element;
    cmd.noun = trim(text.substr(11));
    return cmd;
  }
  if (starts_with(text, "move the ")) {
    auto rest = text.substr(9);
    if (auto parts = split_once(rest, " to the ")) {
      cmd.action = EditAction::move_element;
      cmd.noun = parts->first;
      cmd.attrs["position"] = parts->second;
      return cmd;
    }
  }
  if (starts_with(text, "resize the ")) {
    auto rest = text.substr(11);
    if (auto parts = split_once(rest, " to be ")) {
      cmd.action = EditAction::resize_element;
      cmd.noun = parts->first;
      cmd.attrs["size"] = parts->second;
      return cmd;
    }
  }
  if (starts_with(text, "rotate the ")) {
    auto rest = text.substr(11);
    if (auto parts = split_once(rest, " by ")) {
      cmd.action = EditAction::rotate_element;
      cmd.noun = parts->first;
      std::string amount = parts->second;
      if (ends_with(amount, " degrees")) amount.resize(amount.size() - 8);
      cmd.attrs["rotation"] = trim(amount);
      return cmd;
    }
  }
  if (starts_with(text, "duplicate the ")) {
    cmd.action = EditAction::duplicate_element;
    cmd.noun = trim(text.substr(14));
    return cmd;
  }
  if (starts_with(text, "change the color of the ")) {
    auto rest = text.substr(24);
    if (auto parts = split_once(rest, " to ")) {
      cmd.action = EditAction::change_color;
      cmd.noun = parts->first;
      cmd.attrs["color"] = parts->second;
      return cmd;
    }
  }
  if (starts_with(text, "change the texture of the ")) {
    auto rest = text.substr(26);
    if (auto parts = split_once(rest, " to ")) {
      cmd.action = EditAction::change_texture;
      cmd.noun = parts->first;
      cmd.attrs["texture"] = parts->second;
      return cmd;
    }
  }
  if (starts_with(text, "apply a ") || starts_with(text, "apply an ")) {
    auto rest = text.substr(starts_with(text, "apply an ") ? 9 : 8);
    for (std::string_view stop : {" filter", " weather"}) {
      auto pos = rest.find(stop);
      if (pos != std::string::npos) {
        cmd.action = EditAction::apply_filter;
        cmd.global["filter"] = trim(rest.substr(0, pos));
        return cmd;
      }
    }
  }
  if (starts_with(text, "change the background to ")) {
    cmd.action = EditAction::change_background;
    cmd.global["background"] = strip_article(trim(text.substr(25)));
    return cmd;
  }
  if (starts_with(text, "adjust the lighting to ")) {
    cmd.action = EditAction::adjust_lighting;
    cmd.global["lighting"] = trim(text.substr(23));
    return cmd;
  }
  if (starts_with(text, "change the pose of the ")) {
    auto rest = text.substr(23);
    if (auto parts = split_once(rest, " to ")) {
      cmd.action = EditAction::change_pose;
      cmd.noun = parts->first;
      cmd.attrs["pose"] = parts->second;
      return cmd;
    }
  }
  if (starts_with(text, "change the expression of the ")) {
    auto rest = text.substr(29);
    if (auto parts = split_once(rest, " to ")) {
      cmd.action = EditAction::change_expression;
      cmd.noun = parts->first;
      cmd.attrs["expression"] = parts->second;
      return cmd;
    }
  }
  if (starts_with(text, "crop the image to the ")) {
    cmd.action = EditAction::crop_image;
    cmd.global["crop"] = trim(text.substr(22));
    return cmd;
  }
  if (starts_with(text, "reframe the composition to focus on the ")) {
    cmd.action = EditAction::reframe;
    cmd.noun = trim(text.substr(40));
    cmd.global["focus"] = cmd.noun;
    return cmd;
  }
  if (starts_with(text, "zoom in on the ")) {
    cmd.action = EditAction::zoom;
    cmd.noun = trim(text.substr(15));
    cmd.global["zoom"] = "in:" + cmd.noun;
    return cmd;
  }
  if (starts_with(text, "zoom out")) {
    cmd.action = EditAction::zoom;
    cmd.global["zoom"] = "out";
    return cmd;
  }
  return cmd;  // unknown
}

std::vector<std::string> resolve_noun(const SceneState& scene,
                                      std::string_view noun) {
  std::string target = lower(trim(noun));
  auto target_words = words_of(target);
  if (target_words.empty()) return {};
  const std::string& head = target_words.back();

  std::vector<std::string> exact;
  std::vector<std::string> by_head;
  std::vector<std::string> by_containment;
  for (const auto& e : scene.elements) {
    std::string candidate = lower(e.noun);
    if (candidate == target) {
      exact.push_back(e.id);
      continue;
    }
    auto cwords = words_of(candidate);
    if (!cwords.empty() && cwords.back() == head) {
      by_head.push_back(e.id);
      continue;
    }
    auto contains_all = [](const std::vector<std::string>& hay,
                           const std::vector<std::string>& needles) {
      return std::all_of(needles.begin(), needles.end(), [&](const auto& n) {
        return std::find(hay.begin(), hay.end(), n) != hay.end();
      });
    };
    if (contains_all(cwords, target_words) ||
        contains_all(target_words, cwords))
      by_containment.push_back(e.id);
  }
  if (!exact.empty()) return exact;
  if (!by_head.empty()) return by_head;
  return by_containment;
}

int count_noun(const SceneState& scene, std::string_view noun) {
  return static_cast<int>(resolve_noun(scene, noun).size());
}

}  // namespace editbench
