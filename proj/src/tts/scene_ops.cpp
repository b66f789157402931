#include "editbench/tts/scene_ops.hpp"

#include <algorithm>
#include <set>

namespace editbench {

namespace {

bool attrs_include(const std::map<std::string, std::string>& attrs,
                   const std::map<std::string, std::string>& wanted) {
  for (const auto& [k, v] : wanted) {
    auto it = attrs.find(k);
    if (it == attrs.end() || it->second != v) return false;
  }
  return true;
}

}  // namespace

ApplyOutcome apply_command(const SceneState& scene, const EditCommand& cmd) {
  ApplyOutcome out;
  out.scene = scene;
  SceneState& s = out.scene;

  switch (cmd.action) {
    case EditAction::add_element:
    case EditAction::add_text: {
      SceneElement e;
      e.id = s.next_element_id();
      e.noun = cmd.noun;
      e.attrs = cmd.attrs;
      s.elements.push_back(std::move(e));
      break;
    }
    case EditAction::remove_element:
    case EditAction::remove_text: {
      auto ids = resolve_noun(s, cmd.noun);
      if (ids.empty()) {
        out.no_op = true;
        break;
      }
      std::erase_if(s.elements, [&](const SceneElement& e) {
        return std::find(ids.begin(), ids.end(), e.id) != ids.end();
      });
      break;
    }
    case EditAction::replace_element: {
      auto ids = resolve_noun(s, cmd.noun);
      if (ids.empty()) {
        out.no_op = true;
        break;
      }
      std::erase_if(s.elements, [&](const SceneElement& e) {
        return std::find(ids.begin(), ids.end(), e.id) != ids.end();
      });
      SceneElement e;
      e.id = s.next_element_id();
      e.noun = cmd.replacement;
      e.attrs = cmd.attrs;
      s.elements.push_back(std::move(e));
      break;
    }
    case EditAction::duplicate_element: {
      auto ids = resolve_noun(s, cmd.noun);
      if (ids.empty()) {
        out.no_op = true;
        break;
      }
      SceneElement copy = *s.find(ids.front());
      copy.id = s.next_element_id();
      s.elements.push_back(std::move(copy));
      break;
    }
    case EditAction::move_element:
    case EditAction::resize_element:
    case EditAction::rotate_element:
    case EditAction::change_color:
    case EditAction::change_texture:
    case EditAction::change_pose:
    case EditAction::change_expression:
    case EditAction::change_text_properties: {
      auto ids = resolve_noun(s, cmd.noun);
      if (ids.empty()) {
        out.no_op = true;
        break;
      }
      for (const auto& id : ids) {
        SceneElement* e = s.find(id);
        for (const auto& [k, v] : cmd.attrs) e->attrs[k] = v;
      }
      break;
    }
    case EditAction::apply_filter:
    case EditAction::change_background:
    case EditAction::adjust_lighting:
    case EditAction::crop_image:
    case EditAction::reframe:
    case EditAction::zoom:
    case EditAction::add_effect:
    case EditAction::add_particles: {
      for (const auto& [k, v] : cmd.global) s.global[k] = v;
      break;
    }
    case EditAction::remove_effect:
    case EditAction::remove_particles: {
      bool erased_any = false;
      for (const auto& key : cmd.removed_global)
        erased_any = s.global.erase(key) > 0 || erased_any;
      out.no_op = !erased_any;
      break;
    }
    case EditAction::unknown:
      out.no_op = true;
      break;
  }
  s.canonicalize();
  return out;
}

ApplyOutcome simulated_apply(const SceneState& scene,
                             const AtomicInstruction& atom) {
  return apply_command(scene, parse_clause(atom.text));
}

bool effect_applied(const SceneState& input, const SceneState& output,
                    const EditCommand& cmd) {
  auto any_match_with_attrs = [&](std::string_view noun) {
    for (const auto& id : resolve_noun(output, noun)) {
      const SceneElement* e = output.find(id);
      if (e != nullptr && attrs_include(e->attrs, cmd.attrs)) return true;
    }
    return false;
  };

  switch (cmd.action) {
    case EditAction::add_element:
    case EditAction::add_text:
      return any_match_with_attrs(cmd.noun);
    case EditAction::remove_element:
    case EditAction::remove_text:
      return resolve_noun(output, cmd.noun).empty();
    case EditAction::replace_element:
      return resolve_noun(output, cmd.noun).empty() &&
             any_match_with_attrs(cmd.replacement);
    case EditAction::duplicate_element:
      return count_noun(output, cmd.noun) >= count_noun(input, cmd.noun) + 1;
    case EditAction::move_element:
    case EditAction::resize_element:
    case EditAction::rotate_element:
    case EditAction::change_color:
    case EditAction::change_texture:
    case EditAction::change_pose:
    case EditAction::change_expression:
    case EditAction::change_text_properties:
      return any_match_with_attrs(cmd.noun);
    case EditAction::apply_filter:
    case EditAction::change_background:
    case EditAction::adjust_lighting:
    case EditAction::crop_image:
    case EditAction::reframe:
    case EditAction::zoom:
    case EditAction::add_effect:
    case EditAction::add_particles: {
      for (const auto& [k, v] : cmd.global) {
        auto it = output.global.find(k);
        if (it == output.global.end() || it->second != v) return false;
      }
      return !cmd.global.empty();
    }
    case EditAction::remove_effect:
    case EditAction::remove_particles: {
      for (const auto& key : cmd.removed_global)
        if (output.global.find(key) != output.global.end()) return false;
      return !cmd.removed_global.empty();
    }
    case EditAction::unknown:
      return false;
  }
  return false;
}

namespace {

ScoreTriple oracle_from_commands(const SceneState& input,
                                 const SceneState& output,
                                 const std::vector<EditCommand>& cmds) {
  ScoreTriple t;

  // IF: fraction of commands whose effect is observable.
  if (cmds.empty()) {
    t.if_score = 10.0;
  } else {
    int applied = 0;
    for (const auto& cmd : cmds)
      if (effect_applied(input, output, cmd)) ++applied;
    t.if_score =
        10.0 * static_cast<double>(applied) / static_cast<double>(cmds.size());
  }

  // IP: elements and global keys not targeted by any command must survive
  // unchanged.
  std::set<std::string> touched_ids;
  std::set<std::string> touched_globals;
  for (const auto& cmd : cmds) {
    switch (cmd.action) {
      case EditAction::remove_element:
      case EditAction::remove_text:
      case EditAction::replace_element:
      case EditAction::move_element:
      case EditAction::resize_element:
      case EditAction::rotate_element:
      case EditAction::change_color:
      case EditAction::change_texture:
      case EditAction::change_pose:
      case EditAction::change_expression:
      case EditAction::change_text_properties:
        for (const auto& id : resolve_noun(input, cmd.noun))
          touched_ids.insert(id);
        break;
      default:
        break;
    }
    for (const auto& [k, v] : cmd.global) {
      (void)v;
      touched_globals.insert(k);
    }
    for (const auto& key : cmd.removed_global) touched_globals.insert(key);
  }
  int untouched = 0;
  int preserved = 0;
  for (const auto& e : input.elements) {
    if (touched_ids.count(e.id) > 0) continue;
    ++untouched;
    const SceneElement* now = output.find(e.id);
    if (now != nullptr && now->noun == e.noun && now->attrs == e.attrs)
      ++preserved;
  }
  for (const auto& [key, value] : input.global) {
    if (touched_globals.count(key) > 0) continue;
    ++untouched;
    auto it = output.global.find(key);
    if (it != output.global.end() && it->second == value) ++preserved;
  }
  t.ip_score = untouched == 0 ? 10.0
                              : 10.0 * static_cast<double>(preserved) /
                                    static_cast<double>(untouched);

  t.pq_score = oracle_pq(output);
  return t;
}

std::vector<EditCommand> commands_from_clauses(
    const std::vector<std::string>& clauses) {
  std::vector<EditCommand> cmds;
  cmds.reserve(clauses.size());
  for (const auto& clause : clauses) cmds.push_back(parse_clause(clause));
  return cmds;
}

}  // namespace

double oracle_pq(const SceneState& output) {
  int penalties = 0;
  for (const auto& e : output.elements) {
    if (e.noun == "artifact") ++penalties;
    if (e.attrs.find("blemish") != e.attrs.end()) ++penalties;
  }
  for (const auto& [key, value] : output.global) {
    (void)value;
    if (key.rfind("artifact", 0) == 0) ++penalties;
  }
  return std::max(0.0, 10.0 - 2.0 * static_cast<double>(penalties));
}

ScoreTriple oracle_scores(const SceneState& input, const SceneState& output,
                          const std::vector<AtomicInstruction>& atoms) {
  std::vector<std::string> clauses;
  clauses.reserve(atoms.size());
  for (const auto& atom : atoms) clauses.push_back(atom.text);
  return oracle_scores_clauses(input, output, clauses);
}

ScoreTriple oracle_scores_clauses(const SceneState& input,
                                  const SceneState& output,
                                  const std::vector<std::string>& clauses) {
  return oracle_from_commands(input, output, commands_from_clauses(clauses));
}

}  // namespace editbench
