#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace editbench {

class DeterministicRng;

// Abstract element-list image surrogate. The simulated editor, the grading
// oracle, and the offline pipeline all operate on this representation, so
// the whole harness runs without a single pixel on disk.
struct SceneElement {
  std::string id;
  std::string noun;
  std::map<std::string, std::string> attrs;

  bool operator==(const SceneElement&) const = default;
};

struct SceneState {
  std::vector<SceneElement> elements;
  std::map<std::string, std::string> global;

  bool operator==(const SceneState&) const = default;

  // Canonical form: elements ordered by id. All serialization goes through
  // this so scene hashes are stable.
  void canonicalize();

  const SceneElement* find(const std::string& element_id) const;
  SceneElement* find(const std::string& element_id);

  // Next free element id "e<k>".
  std::string next_element_id() const;
};

// Small noun/attribute vocabulary shared by the scene generator and the
// simulated instruction grammar.
const std::vector<std::string>& scene_nouns();
const std::vector<std::string>& color_words();

SceneState random_scene(DeterministicRng& rng, int min_elements = 2,
                        int max_elements = 5);

}  // namespace editbench
