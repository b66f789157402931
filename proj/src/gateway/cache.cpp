#include "editbench/gateway/cache.hpp"

#include <fstream>

#include "editbench/core/error.hpp"

namespace editbench {

ResponseCache::ResponseCache(std::filesystem::path dir)
    : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw io_error("cannot create cache dir " + dir_.string());
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<ChatResponse> ResponseCache::lookup(const std::string& key) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = mem_.find(key);
    if (it != mem_.end()) {
      ChatResponse resp = it->second;
      resp.cached = true;
      return resp;
    }
  }
  auto path = path_for(key);
  std::ifstream file(path);
  if (!file) return std::nullopt;
  Json j;
  try {
    file >> j;
  } catch (const std::exception& e) {
    throw io_error("corrupt cache entry " + path.string() + ": " + e.what());
  }
  ChatResponse resp = j.at("response").get<ChatResponse>();
  {
    std::lock_guard<std::mutex> lock(mu_);
    mem_.emplace(key, resp);
  }
  resp.cached = true;
  return resp;
}

void ResponseCache::store(const std::string& key, const ChatRequest& req,
                          const ChatResponse& resp) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (!mem_.emplace(key, resp).second) return;  // already recorded
  }
  auto path = path_for(key);
  if (std::filesystem::exists(path)) return;
  Json j = Json{{"key", key}, {"request", req}, {"response", resp}};
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp);
    if (!file) throw io_error("cannot write cache entry " + tmp.string());
    file << j.dump() << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("cannot finalize cache entry " + path.string());
}

}  // namespace editbench
