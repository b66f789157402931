#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "editbench/core/error.hpp"
#include "editbench/core/types.hpp"

namespace editbench {

struct EditorCapabilities {
  std::size_t max_instruction_length = 4096;
  std::set<ImageKind> supported_kinds;
};

class EditorBackend {
 public:
  virtual ~EditorBackend() = default;
  virtual std::string id() const = 0;
  virtual EditorCapabilities capabilities() const = 0;

  // Applies one instruction (atomic or compound). `attempt` salts the
  // backend's sampling so candidates differ in Best-of-N.
  virtual ImageRef apply(const ImageRef& image, const std::string& instruction,
                         int attempt) = 0;
};

// Deterministic scene editor. With default settings it applies every clause
// faithfully; fidelity < 1 drops clauses, collateral_rate blemishes
// untouched elements, artifact_rate injects stray artifact elements. All
// misbehavior is a pure function of (id, run_seed, scene, instruction,
// attempt).
struct SimulatedEditorConfig {
  std::string id = "sim-editor";
  std::uint64_t run_seed = 0;
  double fidelity = 1.0;
  double collateral_rate = 0.0;
  double artifact_rate = 0.0;
};

class SimulatedEditor : public EditorBackend {
 public:
  explicit SimulatedEditor(SimulatedEditorConfig config = {});

  std::string id() const override { return config_.id; }
  EditorCapabilities capabilities() const override;
  ImageRef apply(const ImageRef& image, const std::string& instruction,
                 int attempt) override;

 private:
  SimulatedEditorConfig config_;
};

// HTTP editor adapter: posts {image, instruction, attempt} and expects
// {image: <ImageRef>} back.
struct RemoteEditorConfig {
  std::string id = "remote-editor";
  std::string endpoint;
  std::string path = "/v1/edits";
  std::string api_key_env;
  int timeout_seconds = 300;
};

class RemoteEditor : public EditorBackend {
 public:
  explicit RemoteEditor(RemoteEditorConfig config);

  std::string id() const override { return config_.id; }
  EditorCapabilities capabilities() const override;
  ImageRef apply(const ImageRef& image, const std::string& instruction,
                 int attempt) override;

 private:
  RemoteEditorConfig config_;
};

}  // namespace editbench
