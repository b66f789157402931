#include "editbench/tts/editor.hpp"

#include <cstdlib>

#include <httplib.h>

#include "editbench/core/edit_grammar.hpp"
#include "editbench/core/hash.hpp"
#include "editbench/core/json_io.hpp"
#include "editbench/core/rng.hpp"
#include "editbench/gateway/backend.hpp"
#include "editbench/tts/scene_ops.hpp"

namespace editbench {

SimulatedEditor::SimulatedEditor(SimulatedEditorConfig config)
    : config_(std::move(config)) {
  if (config_.fidelity < 0.0 || config_.fidelity > 1.0)
    throw validation_error("SimulatedEditor: fidelity must be in [0,1]");
}

EditorCapabilities SimulatedEditor::capabilities() const {
  EditorCapabilities caps;
  caps.supported_kinds = {ImageKind::scene};
  return caps;
}

ImageRef SimulatedEditor::apply(const ImageRef& image,
                                const std::string& instruction, int attempt) {
  image.validate();
  if (image.kind != ImageKind::scene)
    throw validation_error("SimulatedEditor: only scene images supported");

  Json scene_json = image.scene.value();
  DeterministicRng rng(seed_from_bytes(
      config_.id + "|" + std::to_string(config_.run_seed) + "|" +
      canonical_dump(scene_json) + "|" + instruction + "|" +
      std::to_string(attempt)));

  SceneState scene = image.scene.value();
  std::set<std::string> touched_ids;
  for (const auto& clause : split_clauses(instruction)) {
    EditCommand cmd = parse_clause(clause);
    for (const auto& id : resolve_noun(scene, cmd.noun))
      touched_ids.insert(id);
    // Draw the fidelity coin for every clause so skipping one clause does
    // not shift later draws.
    bool apply_this = rng.uniform01() < config_.fidelity ||
                      config_.fidelity >= 1.0;
    if (!apply_this) continue;
    scene = apply_command(scene, cmd).scene;
  }

  if (config_.collateral_rate > 0.0) {
    for (auto& e : scene.elements) {
      if (touched_ids.count(e.id) > 0) continue;
      if (rng.uniform01() < config_.collateral_rate)
        e.attrs["blemish"] = "warped";
    }
  }
  if (config_.artifact_rate > 0.0 &&
      rng.uniform01() < config_.artifact_rate) {
    SceneElement artifact;
    artifact.id = scene.next_element_id();
    artifact.noun = "artifact";
    artifact.attrs["kind"] = rng.chance(0.5) ? "smudge" : "seam";
    scene.elements.push_back(std::move(artifact));
  }

  return ImageRef::from_scene(std::move(scene));
}

RemoteEditor::RemoteEditor(RemoteEditorConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty())
    throw validation_error("remote editor: endpoint not configured");
}

EditorCapabilities RemoteEditor::capabilities() const {
  EditorCapabilities caps;
  caps.supported_kinds = {ImageKind::file_path, ImageKind::url,
                          ImageKind::scene};
  return caps;
}

ImageRef RemoteEditor::apply(const ImageRef& image,
                             const std::string& instruction, int attempt) {
  image.validate();
  Json body = {
      {"image", image}, {"instruction", instruction}, {"attempt", attempt}};

  httplib::Client client(config_.endpoint);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);
  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
      throw AuthError("environment variable " + config_.api_key_env +
                      " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(config_.path, headers, body.dump(),
                         "application/json");
  if (!res)
    throw TransportError("editor transport failure: " +
                         httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500)
    throw TransportError("editor retryable http status " +
                         std::to_string(res->status));
  if (res->status == 401 || res->status == 403)
    throw AuthError("editor authentication rejected (http " +
                    std::to_string(res->status) + ")");
  if (res->status != 200)
    throw backend_error("editor http status " + std::to_string(res->status));
  try {
    return Json::parse(res->body).at("image").get<ImageRef>();
  } catch (const Json::exception& e) {
    throw parse_error(std::string("malformed editor payload: ") + e.what());
  }
}

}  // namespace editbench
