#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "editbench/gateway/gateway.hpp"
#include "editbench/gateway/simulated.hpp"
#include "editbench/pipeline/templates.hpp"

namespace editbench::test {

inline const TemplateSet& templates() {
  static TemplateSet t = TemplateSet::load(TemplateSet::default_dir());
  return t;
}

inline std::shared_ptr<Gateway> sim_gateway(
    LatentProvider latents = nullptr, SimulatedBackendConfig config = {},
    GatewayOptions options = {}) {
  auto backend = std::make_shared<SimulatedChatBackend>(std::move(config),
                                                        std::move(latents));
  return std::make_shared<Gateway>(backend, std::move(options));
}

// Unique scratch directory under the build tree.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("editbench-test-" + tag + "-" + std::to_string(::getpid()) +
              "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace editbench::test
