#include "editbench/core/json_io.hpp"

#include "editbench/core/error.hpp"
#include "editbench/core/taxonomy.hpp"

namespace editbench {

std::string canonical_dump(const Json& j) { return j.dump(); }

std::string op_type_name(AtomicOperationType type) {
  return std::string(operation_info(type).name);
}

AtomicOperationType op_type_from_json_name(const std::string& name) {
  auto type = operation_from_name(name);
  if (!type) throw validation_error("unknown operation type: " + name);
  return *type;
}

void to_json(Json& j, const SceneElement& e) {
  j = Json{{"id", e.id}, {"noun", e.noun}, {"attrs", e.attrs}};
}

void from_json(const Json& j, SceneElement& e) {
  j.at("id").get_to(e.id);
  j.at("noun").get_to(e.noun);
  j.at("attrs").get_to(e.attrs);
}

void to_json(Json& j, const SceneState& s) {
  SceneState canon = s;
  canon.canonicalize();
  j = Json{{"elements", canon.elements}, {"global", canon.global}};
}

void from_json(const Json& j, SceneState& s) {
  j.at("elements").get_to(s.elements);
  j.at("global").get_to(s.global);
  s.canonicalize();
}

namespace {

std::string image_kind_name(ImageKind kind) {
  switch (kind) {
    case ImageKind::file_path:
      return "file-path";
    case ImageKind::url:
      return "url";
    case ImageKind::scene:
      return "scene";
  }
  return "scene";
}

ImageKind image_kind_from_name(const std::string& name) {
  if (name == "file-path") return ImageKind::file_path;
  if (name == "url") return ImageKind::url;
  if (name == "scene") return ImageKind::scene;
  throw validation_error("unknown image kind: " + name);
}

}  // namespace

void to_json(Json& j, const ImageRef& ref) {
  j = Json{{"id", ref.id}, {"kind", image_kind_name(ref.kind)}};
  if (ref.kind == ImageKind::scene)
    j["payload"] = ref.scene.value();
  else
    j["payload"] = ref.location;
}

void from_json(const Json& j, ImageRef& ref) {
  ref = ImageRef{};
  j.at("id").get_to(ref.id);
  ref.kind = image_kind_from_name(j.at("kind").get<std::string>());
  if (ref.kind == ImageKind::scene)
    ref.scene = j.at("payload").get<SceneState>();
  else
    j.at("payload").get_to(ref.location);
  ref.validate();
}

void to_json(Json& j, const Provenance& p) {
  j = Json{{"stage", p.stage}, {"attempts", p.attempts}};
}

void from_json(const Json& j, Provenance& p) {
  j.at("stage").get_to(p.stage);
  j.at("attempts").get_to(p.attempts);
}

void to_json(Json& j, const AtomicInstruction& a) {
  j = Json{{"id", a.id},
           {"text", a.text},
           {"op_type", op_type_name(a.op_type)},
           {"simplified", a.simplified},
           {"provenance", a.provenance}};
}

void from_json(const Json& j, AtomicInstruction& a) {
  j.at("id").get_to(a.id);
  j.at("text").get_to(a.text);
  a.op_type = op_type_from_json_name(j.at("op_type").get<std::string>());
  j.at("simplified").get_to(a.simplified);
  j.at("provenance").get_to(a.provenance);
}

void to_json(Json& j, const InstructionSequence& s) {
  j = Json{{"image", s.image}, {"atoms", s.atoms}};
}

void from_json(const Json& j, InstructionSequence& s) {
  j.at("image").get_to(s.image);
  j.at("atoms").get_to(s.atoms);
}

void to_json(Json& j, const CompoundInstruction& c) {
  j = Json{{"text", c.text},
           {"level", c.level},
           {"source_atom_ids", c.source_atom_ids}};
}

void from_json(const Json& j, CompoundInstruction& c) {
  j.at("text").get_to(c.text);
  j.at("level").get_to(c.level);
  j.at("source_atom_ids").get_to(c.source_atom_ids);
  if (c.level < 1 ||
      static_cast<std::size_t>(c.level) != c.source_atom_ids.size())
    throw validation_error("CompoundInstruction: level != |source_atom_ids|");
}

void to_json(Json& j, const ScoreTriple& t) {
  j = Json{{"if_score", t.if_score},
           {"ip_score", t.ip_score},
           {"pq_score", t.pq_score}};
}

void from_json(const Json& j, ScoreTriple& t) {
  j.at("if_score").get_to(t.if_score);
  j.at("ip_score").get_to(t.ip_score);
  j.at("pq_score").get_to(t.pq_score);
}

void to_json(Json& j, const GradeSummary& g) {
  Json raw = Json::object();
  for (const auto& [metric, values] : g.raw_measurements)
    raw[std::string(metric_key(metric))] = values;
  j = Json{{"triple", g.triple},
           {"overall", g.overall},
           {"repeats_used", g.repeats_used},
           {"raw_measurements", raw}};
}

void from_json(const Json& j, GradeSummary& g) {
  j.at("triple").get_to(g.triple);
  j.at("overall").get_to(g.overall);
  j.at("repeats_used").get_to(g.repeats_used);
  g.raw_measurements.clear();
  for (const auto& [key, values] : j.at("raw_measurements").items()) {
    auto metric = metric_from_key(key);
    if (!metric) throw validation_error("unknown metric key: " + key);
    g.raw_measurements[*metric] = values.get<std::vector<double>>();
  }
  g.validate();
}

}  // namespace editbench
