#include "editbench/core/scene.hpp"

#include <algorithm>

#include "editbench/core/rng.hpp"

namespace editbench {

void SceneState::canonicalize() {
  std::sort(elements.begin(), elements.end(),
            [](const SceneElement& a, const SceneElement& b) {
              return a.id < b.id;
            });
}

const SceneElement* SceneState::find(const std::string& element_id) const {
  for (const auto& e : elements)
    if (e.id == element_id) return &e;
  return nullptr;
}

SceneElement* SceneState::find(const std::string& element_id) {
  for (auto& e : elements)
    if (e.id == element_id) return &e;
  return nullptr;
}

std::string SceneState::next_element_id() const {
  long max_suffix = 0;
  for (const auto& e : elements) {
    if (e.id.size() < 2 || e.id[0] != 'e') continue;
    long value = 0;
    bool numeric = true;
    for (std::size_t i = 1; i < e.id.size(); ++i) {
      char c = e.id[i];
      if (c < '0' || c > '9') {
        numeric = false;
        break;
      }
      value = value * 10 + (c - '0');
    }
    if (numeric) max_suffix = std::max(max_suffix, value);
  }
  return "e" + std::to_string(max_suffix + 1);
}

const std::vector<std::string>& scene_nouns() {
  static const std::vector<std::string> nouns = {
      "cat",    "dog",     "car",    "tree",   "house",  "bird",
      "lamp",   "table",   "boat",   "bicycle", "flower", "mountain",
      "bench",  "balloon", "kite",   "hat",    "clock",  "mirror",
      "guitar", "vase"};
  return nouns;
}

const std::vector<std::string>& color_words() {
  static const std::vector<std::string> colors = {
      "red",    "blue",   "green", "yellow", "black",  "white", "purple",
      "orange", "pink",   "brown", "golden", "silver", "gray"};
  return colors;
}

SceneState random_scene(DeterministicRng& rng, int min_elements,
                        int max_elements) {
  SceneState scene;
  int n = static_cast<int>(rng.uniform_int(min_elements, max_elements));
  std::vector<std::string> pool = scene_nouns();
  for (int i = 0; i < n; ++i) {
    // Unique nouns keep referents unambiguous.
    std::size_t pick =
        static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(pool.size()) - 1));
    SceneElement e;
    e.id = "e" + std::to_string(i + 1);
    e.noun = pool[pick];
    pool.erase(pool.begin() + static_cast<long>(pick));
    if (rng.chance(0.6)) e.attrs["color"] = rng.pick(color_words());
    if (rng.chance(0.3)) e.attrs["size"] = rng.chance(0.5) ? "small" : "large";
    scene.elements.push_back(std::move(e));
  }
  static const std::vector<std::string> backgrounds = {
      "park", "beach", "city street", "forest", "plain wall"};
  static const std::vector<std::string> lightings = {"daylight", "sunset",
                                                     "overcast", "studio"};
  scene.global["background"] = rng.pick(backgrounds);
  scene.global["lighting"] = rng.pick(lightings);
  scene.canonicalize();
  return scene;
}

}  // namespace editbench
