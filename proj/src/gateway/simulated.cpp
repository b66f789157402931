#include "editbench/gateway/simulated.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "editbench/core/edit_grammar.hpp"
#include "editbench/core/hash.hpp"
#include "editbench/core/rng.hpp"
#include "editbench/core/taxonomy.hpp"
#include "editbench/gateway/markers.hpp"

namespace editbench {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string article_for(const std::string& noun) {
  if (noun.empty()) return "a";
  return std::string("aeiou").find(noun[0]) != std::string::npos ? "an" : "a";
}

std::string garble_text(DeterministicRng& rng) {
  std::string out;
  int len = static_cast<int>(rng.uniform_int(18, 30));
  for (int i = 0; i < len; ++i) {
    if (i % 4 == 3)
      out.push_back('\x01');
    else
      out.push_back(static_cast<char>('a' + rng.uniform_int(0, 25)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage-1 sequence synthesis
// ---------------------------------------------------------------------------

// Bookkeeping that keeps generated sequences position-consistent: later
// atoms only reference nouns that exist at their point in the sequence, and
// no two atoms fight over the same attribute or global key. This keeps the
// final-state effect of every atom observable, which the grading oracle
// depends on.
struct GenState {
  std::set<std::string> present;
  std::set<std::string> removed;
  std::set<std::string> created;
  std::set<std::string> attr_touched;  // "noun\x1fattr"
  std::set<std::string> globals_used;
  std::set<std::string> effects_initial;
  std::set<std::string> effects_present;
  std::set<std::string> particles_initial;
  std::set<std::string> particles_present;
  bool text_present = false;
  bool text_created = false;

  static GenState from_scene(const SceneState& scene) {
    GenState st;
    for (const auto& e : scene.elements) {
      if (e.noun == "text")
        st.text_present = true;
      else
        st.present.insert(e.noun);
    }
    for (const auto& [key, value] : scene.global) {
      (void)value;
      if (key.rfind("effect:", 0) == 0) {
        st.effects_initial.insert(key.substr(7));
        st.effects_present.insert(key.substr(7));
      } else if (key.rfind("particle:", 0) == 0) {
        st.particles_initial.insert(key.substr(9));
        st.particles_present.insert(key.substr(9));
      }
    }
    return st;
  }

  bool attr_free(const std::string& noun, const std::string& attr) const {
    return attr_touched.find(noun + '\x1f' + attr) == attr_touched.end();
  }
  void touch_attr(const std::string& noun, const std::string& attr) {
    attr_touched.insert(noun + '\x1f' + attr);
  }
  bool noun_attr_touched(const std::string& noun) const {
    return std::any_of(attr_touched.begin(), attr_touched.end(),
                       [&](const std::string& k) {
                         return k.rfind(noun + '\x1f', 0) == 0;
                       });
  }

  // Targets that may still be removed or replaced without invalidating the
  // observable effect of an earlier atom.
  std::vector<std::string> removable() const {
    std::vector<std::string> out;
    for (const auto& noun : present)
      if (created.find(noun) == created.end() && !noun_attr_touched(noun))
        out.push_back(noun);
    return out;
  }

  std::vector<std::string> attr_targets(const std::string& attr) const {
    std::vector<std::string> out;
    for (const auto& noun : present)
      if (attr_free(noun, attr)) out.push_back(noun);
    return out;
  }
};

// Applies a generated atom's bookkeeping consequences so later atoms stay
// consistent with it. Used both while generating and when rebuilding state
// from already-accepted atoms during regeneration.
void absorb_atom(GenState& st, AtomicOperationType type,
                 const std::string& text) {
  EditCommand cmd = parse_clause(text);
  switch (type) {
    case AtomicOperationType::add_object:
      st.present.insert(cmd.noun);
      st.created.insert(cmd.noun);
      for (const auto& [k, v] : cmd.attrs) {
        (void)v;
        st.touch_attr(cmd.noun, k);
      }
      break;
    case AtomicOperationType::remove_object:
      st.present.erase(cmd.noun);
      st.removed.insert(cmd.noun);
      break;
    case AtomicOperationType::replace_object:
      st.present.erase(cmd.noun);
      st.removed.insert(cmd.noun);
      st.present.insert(cmd.replacement);
      st.created.insert(cmd.replacement);
      break;
    case AtomicOperationType::duplicate_object:
      st.created.insert(cmd.noun);
      st.touch_attr(cmd.noun, "__duplicate");
      break;
    case AtomicOperationType::add_text:
      st.text_present = true;
      st.text_created = true;
      break;
    case AtomicOperationType::remove_text:
      st.text_present = false;
      break;
    case AtomicOperationType::add_special_effects:
      st.effects_present.insert(cmd.noun);
      st.globals_used.insert("effect:" + cmd.noun);
      break;
    case AtomicOperationType::remove_special_effects:
      st.effects_present.erase(cmd.noun);
      st.globals_used.insert("effect:" + cmd.noun);
      break;
    case AtomicOperationType::add_particles:
      st.particles_present.insert(cmd.noun);
      st.globals_used.insert("particle:" + cmd.noun);
      break;
    case AtomicOperationType::remove_particles:
      st.particles_present.erase(cmd.noun);
      st.globals_used.insert("particle:" + cmd.noun);
      break;
    default:
      for (const auto& [k, v] : cmd.attrs) {
        (void)v;
        st.touch_attr(cmd.noun, k);
      }
      for (const auto& [k, v] : cmd.global) {
        (void)v;
        st.globals_used.insert(k);
      }
      break;
  }
}

struct GeneratedAtom {
  AtomicOperationType type;
  std::string text;
};

const std::vector<std::string>& filter_names() {
  static const std::vector<std::string> v = {"sepia",  "vintage", "rainy",
                                             "snowy",  "noir",    "warm"};
  return v;
}
const std::vector<std::string>& effect_names() {
  static const std::vector<std::string> v = {"glow", "motion blur",
                                             "lens flare", "bokeh"};
  return v;
}
const std::vector<std::string>& particle_names() {
  static const std::vector<std::string> v = {"dust", "snow", "confetti",
                                             "sparks"};
  return v;
}
const std::vector<std::string>& position_names() {
  static const std::vector<std::string> v = {
      "left side", "right side", "center", "top left corner",
      "bottom right corner"};
  return v;
}
const std::vector<std::string>& size_names() {
  static const std::vector<std::string> v = {"tiny", "small", "large", "huge"};
  return v;
}
const std::vector<std::string>& texture_names() {
  static const std::vector<std::string> v = {"wood", "metal", "glass",
                                             "marble", "fabric"};
  return v;
}
const std::vector<std::string>& background_names() {
  static const std::vector<std::string> v = {
      "sunset beach", "snowy mountain", "busy market", "starry sky",
      "quiet library"};
  return v;
}
const std::vector<std::string>& lighting_names() {
  static const std::vector<std::string> v = {
      "soft morning light", "dramatic side lighting", "warm candlelight",
      "cool twilight"};
  return v;
}
const std::vector<std::string>& pose_names() {
  static const std::vector<std::string> v = {"sitting", "standing", "jumping",
                                             "running"};
  return v;
}
const std::vector<std::string>& expression_names() {
  static const std::vector<std::string> v = {"smiling", "surprised", "calm",
                                             "frowning"};
  return v;
}
const std::vector<std::string>& crop_names() {
  static const std::vector<std::string> v = {"left half", "right half",
                                             "center", "top half"};
  return v;
}
const std::vector<std::string>& text_contents() {
  static const std::vector<std::string> v = {"HELLO", "SALE", "WELCOME",
                                             "OPEN"};
  return v;
}
const std::vector<std::string>& animate_nouns() {
  static const std::vector<std::string> v = {"cat", "dog", "bird"};
  return v;
}

std::optional<std::string> fresh_noun(GenState& st, DeterministicRng& rng) {
  std::vector<std::string> candidates;
  for (const auto& noun : scene_nouns())
    if (st.present.find(noun) == st.present.end() &&
        st.removed.find(noun) == st.removed.end())
      candidates.push_back(noun);
  if (candidates.empty()) return std::nullopt;
  return rng.pick(candidates);
}

// Generates one atom feasible in the current state. `additive_only`
// restricts to operations that cannot disturb already-accepted atoms; it is
// used when regenerating single flawed lines.
GeneratedAtom generate_atom(GenState& st, DeterministicRng& rng,
                            bool additive_only) {
  using OT = AtomicOperationType;
  std::vector<OT> feasible;
  auto add_if = [&](bool ok, OT type) {
    if (ok) feasible.push_back(type);
  };

  add_if(true, OT::add_object);
  add_if(!additive_only && !st.removable().empty(), OT::remove_object);
  add_if(!additive_only && !st.removable().empty(), OT::replace_object);
  add_if(!additive_only && !st.attr_targets("position").empty(),
         OT::move_object);
  add_if(!additive_only && !st.attr_targets("size").empty(),
         OT::resize_object);
  add_if(!additive_only && !st.attr_targets("rotation").empty(),
         OT::rotate_object);
  add_if(!additive_only && !st.removable().empty(), OT::duplicate_object);
  add_if(!additive_only && !st.attr_targets("color").empty(),
         OT::change_color);
  add_if(st.globals_used.find("filter") == st.globals_used.end(),
         OT::apply_filter_weather);
  add_if(!additive_only && !st.attr_targets("texture").empty(),
         OT::change_texture);
  add_if(st.globals_used.find("background") == st.globals_used.end(),
         OT::change_background);
  add_if(st.globals_used.find("lighting") == st.globals_used.end(),
         OT::adjust_lighting);
  add_if(!st.text_present, OT::add_text);
  add_if(!additive_only && st.text_present && !st.text_created &&
             st.attr_free("text", "color") && st.attr_free("text", "size"),
         OT::remove_text);
  add_if(!additive_only && st.text_present &&
             (st.attr_free("text", "color") || st.attr_free("text", "size")),
         OT::change_text_properties);
  {
    bool pose_ok = false;
    bool expr_ok = false;
    for (const auto& noun : animate_nouns()) {
      if (st.present.find(noun) == st.present.end()) continue;
      pose_ok = pose_ok || st.attr_free(noun, "pose");
      expr_ok = expr_ok || st.attr_free(noun, "expression");
    }
    add_if(!additive_only && pose_ok, OT::change_pose);
    add_if(!additive_only && expr_ok, OT::change_facial_expression);
  }
  add_if(st.globals_used.find("crop") == st.globals_used.end(),
         OT::crop_image);
  add_if(!additive_only && !st.present.empty() &&
             st.globals_used.find("focus") == st.globals_used.end(),
         OT::reframe_composition);
  add_if(st.globals_used.find("zoom") == st.globals_used.end(),
         OT::zoom_in_out);
  {
    bool addable_effect = std::any_of(
        effect_names().begin(), effect_names().end(), [&](const auto& n) {
          return st.effects_present.find(n) == st.effects_present.end();
        });
    add_if(addable_effect, OT::add_special_effects);
    bool removable_effect = std::any_of(
        st.effects_initial.begin(), st.effects_initial.end(),
        [&](const auto& n) {
          return st.effects_present.count(n) > 0 &&
                 st.globals_used.find("effect:" + n) == st.globals_used.end();
        });
    add_if(!additive_only && removable_effect, OT::remove_special_effects);
    bool addable_particle = std::any_of(
        particle_names().begin(), particle_names().end(), [&](const auto& n) {
          return st.particles_present.find(n) == st.particles_present.end();
        });
    add_if(addable_particle, OT::add_particles);
    bool removable_particle = std::any_of(
        st.particles_initial.begin(), st.particles_initial.end(),
        [&](const auto& n) {
          return st.particles_present.count(n) > 0 &&
                 st.globals_used.find("particle:" + n) ==
                     st.globals_used.end();
        });
    add_if(!additive_only && removable_particle, OT::remove_particles);
  }

  OT type = feasible[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<long>(feasible.size()) - 1))];

  auto pick_from = [&](const std::vector<std::string>& items) {
    return rng.pick(items);
  };
  auto pick_attr_target = [&](const std::string& attr) {
    auto targets = st.attr_targets(attr);
    return targets[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long>(targets.size()) - 1))];
  };

  GeneratedAtom atom{type, ""};
  switch (type) {
    case OT::add_object: {
      auto noun = fresh_noun(st, rng);
      std::string n = noun ? *noun : "curio";
      bool with_color = rng.chance(0.5);
      std::string color = with_color ? pick_from(color_words()) : "";
      atom.text = "add " +
                  article_for(with_color ? color : n) + " " +
                  (with_color ? color + " " : "") + n;
      break;
    }
    case OT::remove_object:
      atom.text = "remove the " + rng.pick(st.removable());
      break;
    case OT::replace_object: {
      std::string victim = rng.pick(st.removable());
      auto noun = fresh_noun(st, rng);
      std::string n = noun ? *noun : "curio";
      atom.text =
          "replace the " + victim + " with " + article_for(n) + " " + n;
      break;
    }
    case OT::move_object:
      atom.text = "move the " + pick_attr_target("position") + " to the " +
                  pick_from(position_names());
      break;
    case OT::resize_object:
      atom.text = "resize the " + pick_attr_target("size") + " to be " +
                  pick_from(size_names());
      break;
    case OT::rotate_object: {
      static const std::vector<std::string> degrees = {"15", "30", "45", "90",
                                                       "180"};
      atom.text = "rotate the " + pick_attr_target("rotation") + " by " +
                  pick_from(degrees) + " degrees";
      break;
    }
    case OT::duplicate_object:
      atom.text = "duplicate the " + rng.pick(st.removable());
      break;
    case OT::change_color:
      atom.text = "change the color of the " + pick_attr_target("color") +
                  " to " + pick_from(color_words());
      break;
    case OT::apply_filter_weather:
      atom.text = "apply a " + pick_from(filter_names()) +
                  " filter to the image";
      break;
    case OT::change_texture:
      atom.text = "change the texture of the " + pick_attr_target("texture") +
                  " to " + pick_from(texture_names());
      break;
    case OT::change_background:
      atom.text = "change the background to a " +
                  pick_from(background_names());
      break;
    case OT::adjust_lighting:
      atom.text = "adjust the lighting to " + pick_from(lighting_names());
      break;
    case OT::add_text:
      atom.text = "add the text \"" + pick_from(text_contents()) +
                  "\" to the image";
      break;
    case OT::remove_text:
      atom.text = "remove the text from the image";
      break;
    case OT::change_text_properties: {
      std::vector<std::string> props;
      if (st.attr_free("text", "color")) props.push_back("color");
      if (st.attr_free("text", "size")) props.push_back("size");
      std::string prop = rng.pick(props);
      std::string value = prop == "color" ? pick_from(color_words())
                                          : pick_from(size_names());
      atom.text = "change the text " + prop + " to " + value;
      break;
    }
    case OT::change_pose: {
      std::vector<std::string> targets;
      for (const auto& n : animate_nouns())
        if (st.present.count(n) > 0 && st.attr_free(n, "pose"))
          targets.push_back(n);
      atom.text = "change the pose of the " + rng.pick(targets) + " to " +
                  pick_from(pose_names());
      break;
    }
    case OT::change_facial_expression: {
      std::vector<std::string> targets;
      for (const auto& n : animate_nouns())
        if (st.present.count(n) > 0 && st.attr_free(n, "expression"))
          targets.push_back(n);
      atom.text = "change the expression of the " + rng.pick(targets) +
                  " to " + pick_from(expression_names());
      break;
    }
    case OT::crop_image:
      atom.text = "crop the image to the " + pick_from(crop_names());
      break;
    case OT::reframe_composition: {
      std::vector<std::string> targets(st.present.begin(), st.present.end());
      atom.text = "reframe the composition to focus on the " +
                  rng.pick(targets);
      break;
    }
    case OT::zoom_in_out:
      if (!st.present.empty() && rng.chance(0.5)) {
        std::vector<std::string> targets(st.present.begin(),
                                         st.present.end());
        atom.text = "zoom in on the " + rng.pick(targets);
      } else {
        atom.text = "zoom out to show more of the scene";
      }
      break;
    case OT::add_special_effects: {
      std::vector<std::string> names;
      for (const auto& n : effect_names())
        if (st.effects_present.find(n) == st.effects_present.end())
          names.push_back(n);
      atom.text = "add " + article_for(names.front()) + " " +
                  rng.pick(names) + " effect";
      break;
    }
    case OT::remove_special_effects: {
      std::vector<std::string> names;
      for (const auto& n : st.effects_initial)
        if (st.effects_present.count(n) > 0 &&
            st.globals_used.find("effect:" + n) == st.globals_used.end())
          names.push_back(n);
      atom.text = "remove the " + rng.pick(names) + " effect";
      break;
    }
    case OT::add_particles: {
      std::vector<std::string> names;
      for (const auto& n : particle_names())
        if (st.particles_present.find(n) == st.particles_present.end())
          names.push_back(n);
      atom.text = "add " + rng.pick(names) + " particles";
      break;
    }
    case OT::remove_particles: {
      std::vector<std::string> names;
      for (const auto& n : st.particles_initial)
        if (st.particles_present.count(n) > 0 &&
            st.globals_used.find("particle:" + n) == st.globals_used.end())
          names.push_back(n);
      atom.text = "remove the " + rng.pick(names) + " particles";
      break;
    }
  }
  absorb_atom(st, type, atom.text);
  return atom;
}

// ---------------------------------------------------------------------------
// Prompt readers
// ---------------------------------------------------------------------------

std::vector<std::pair<int, std::string>> parse_numbered_lines(
    std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in{std::string(text)};
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
    int index = std::stoi(line.substr(i, digits - i));
    std::string rest = line.substr(digits + 1);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
      rest.erase(rest.begin());
    out.emplace_back(index, rest);
  }
  return out;
}

std::vector<int> parse_regen_indices(std::string_view text) {
  auto pos = text.find(kStage1RegenHeader);
  if (pos == std::string_view::npos) return {};
  std::vector<int> indices;
  for (const auto& [index, rest] : parse_numbered_lines(text.substr(pos))) {
    (void)rest;
    indices.push_back(index);
  }
  return indices;
}

std::string respond_stage1(const ChatRequest& req, DeterministicRng& rng,
                           const SimulatedBackendConfig& config,
                           std::string_view prompt) {
  SceneState scene;
  if (auto block = find_image_block(prompt, "input");
      block && block->scene.has_value())
    scene = *block->scene;
  GenState st = GenState::from_scene(scene);

  std::vector<int> indices;
  auto regen = parse_regen_indices(prompt);
  if (!regen.empty()) {
    // Absorb already-accepted atoms listed in the prompt so replacements
    // stay consistent with them.
    auto accepted_pos = prompt.find("Accepted instructions:");
    if (accepted_pos != std::string_view::npos) {
      auto regen_pos = prompt.find(kStage1RegenHeader);
      auto section = prompt.substr(
          accepted_pos, regen_pos > accepted_pos ? regen_pos - accepted_pos
                                                 : std::string_view::npos);
      for (const auto& [index, rest] : parse_numbered_lines(section)) {
        (void)index;
        auto close = rest.find(']');
        if (rest.empty() || rest[0] != '[' || close == std::string::npos)
          continue;
        auto type = operation_from_name(rest.substr(1, close - 1));
        std::string body = rest.substr(close + 1);
        while (!body.empty() &&
               std::isspace(static_cast<unsigned char>(body.front())))
          body.erase(body.begin());
        if (type) absorb_atom(st, *type, strip_intent_suffix(body));
      }
    }
    indices = regen;
  } else {
    int n = parse_stage1_count(prompt).value_or(1);
    for (int i = 1; i <= n; ++i) indices.push_back(i);
  }

  bool additive_only = !regen.empty();
  std::string cot;
  if (prompt.find(kCotDirective) != std::string_view::npos)
    cot = "Planning a coherent set of edits that build on each other.\n";

  std::string out = cot;
  for (int index : indices) {
    GeneratedAtom atom = generate_atom(st, rng, additive_only);
    std::string text = atom.text;
    if (rng.chance(0.25)) text += rng.pick(intent_suffixes());
    bool garbled =
        (req.attempt == 0 &&
         config.garble_lines_first_attempt.count(index) > 0) ||
        (config.garble_probability > 0.0 &&
         rng.chance(config.garble_probability));
    if (garbled) text = garble_text(rng);
    out += std::to_string(index) + ". [" +
           std::string(operation_info(atom.type).name) + "] " + text + "\n";
  }
  return out;
}

std::string respond_stage2(std::string_view prompt) {
  std::string text;
  auto pos = prompt.rfind(kStage2InstructionLabel);
  if (pos != std::string_view::npos) {
    auto start = pos + kStage2InstructionLabel.size();
    auto end = prompt.find('\n', start);
    text = std::string(prompt.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start));
  }
  std::string simplified = strip_intent_suffix(text);
  if (simplified != text)
    return "NEEDED: yes\nSIMPLIFIED: " + simplified + "\n";
  return "NEEDED: no\nSIMPLIFIED: " + text + "\n";
}

std::string respond_stage3(std::string_view prompt, bool with_cot) {
  auto pos = prompt.rfind(kStage3AtomsHeader);
  std::vector<std::string> clauses;
  if (pos != std::string_view::npos) {
    for (const auto& [index, rest] : parse_numbered_lines(prompt.substr(pos))) {
      (void)index;
      clauses.push_back(rest);
    }
  }
  std::string out;
  if (with_cot)
    out += "Merging the steps in order so the result reads as one edit.\n";
  out += "COMPOUND: " + join_clauses(clauses) + "\n";
  return out;
}

}  // namespace

LatentProvider constant_latent_provider(SimulatedLatent latent) {
  return [latent](const ChatRequest&) { return latent; };
}

LatentProvider metric_latent_provider(std::map<Metric, double> quality,
                                      double noise_sd) {
  return [quality = std::move(quality), noise_sd](const ChatRequest& req) {
    std::string text = prompt_text(req);
    for (Metric m : kAllMetrics) {
      std::string marker =
          std::string(kCriterionLabel) + std::string(metric_name(m));
      if (text.find(marker) != std::string::npos) {
        auto it = quality.find(m);
        if (it != quality.end()) return SimulatedLatent{it->second, noise_sd};
      }
    }
    return SimulatedLatent{5.0, noise_sd};
  };
}

ChatResponse simulate(const ChatRequest& req, const SimulatedLatent& latent,
                      const SimulatedBackendConfig& config) {
  DeterministicRng rng(seed_from_bytes(canonical_request_json(req)));
  std::string prompt = prompt_text(req);

  ChatResponse resp;
  resp.backend_id = config.id;

  if (req.want_logprobs) {
    double q = latent.quality;
    if (latent.noise_sd > 0.0) q += rng.gaussian(0.0, latent.noise_sd);
    double frac = logistic(q - 5.0);
    // Leave a little mass for other tokens; only the ratio matters.
    double yes_mass = 0.9 * frac;
    double no_mass = 0.9 * (1.0 - frac);
    resp.first_token_logprobs = std::map<std::string, double>{
        {"Yes", std::log(std::max(yes_mass, 1e-300))},
        {"No", std::log(std::max(no_mass, 1e-300))},
    };
    resp.text = frac >= 0.5 ? "Yes" : "No";
    return resp;
  }
  if (prompt.find(kScoreDirective) != std::string::npos) {
    double s = latent.quality;
    if (latent.noise_sd > 0.0) s += rng.gaussian(0.0, latent.noise_sd);
    s = std::clamp(s, 0.0, 10.0);
    std::string cot;
    if (prompt.find(kCotDirective) != std::string::npos)
      cot = "Comparing the images against the criterion step by step.\n";
    resp.text = cot + "Score: " + format_double(s);
    return resp;
  }
  if (prompt.find(kStage1Directive) != std::string::npos) {
    resp.text = respond_stage1(req, rng, config, prompt);
    return resp;
  }
  if (prompt.find(kStage2Directive) != std::string::npos) {
    resp.text = respond_stage2(prompt);
    return resp;
  }
  if (prompt.find(kStage3Directive) != std::string::npos) {
    resp.text = respond_stage3(
        prompt, prompt.find(kCotDirective) != std::string::npos);
    return resp;
  }
  resp.text = "OK.";
  return resp;
}

SimulatedChatBackend::SimulatedChatBackend(SimulatedBackendConfig config,
                                           LatentProvider latents)
    : config_(std::move(config)), latents_(std::move(latents)) {
  if (!latents_) latents_ = constant_latent_provider(SimulatedLatent{});
}

ChatResponse SimulatedChatBackend::complete(const ChatRequest& req) {
  return simulate(req, latents_(req), config_);
}

}  // namespace editbench
