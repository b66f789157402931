#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "editbench/gateway/chat.hpp"

namespace editbench {

// Append-only response cache: one JSON file per key under a directory.
// Existing entries are never rewritten.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<ChatResponse> lookup(const std::string& key);
  void store(const std::string& key, const ChatRequest& req,
             const ChatResponse& resp);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& key) const;

  std::filesystem::path dir_;
  std::mutex mu_;
  std::unordered_map<std::string, ChatResponse> mem_;
};

}  // namespace editbench
