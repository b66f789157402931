#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "editbench/core/json_io.hpp"

namespace editbench {

inline constexpr int kSchemaVersion = 1;

struct RecordEnvelope {
  std::string record_type;
  int schema_version = kSchemaVersion;
  Json payload;
  std::string content_hash;

  static RecordEnvelope make(std::string record_type, Json payload);
  void validate() const;
};

void to_json(Json& j, const RecordEnvelope& e);
void from_json(const Json& j, RecordEnvelope& e);

// Append-only JSONL store. Offsets are record indices. Appending an
// envelope whose content_hash is already present returns the existing
// offset. A truncated trailing line (crash artifact) is cut off at open and
// reported; corruption anywhere else is an error.
class JsonlStore {
 public:
  static JsonlStore open(std::filesystem::path path);

  std::size_t append(const RecordEnvelope& envelope);

  const std::vector<RecordEnvelope>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool recovered_truncation() const { return recovered_truncation_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  JsonlStore() = default;

  std::filesystem::path path_;
  std::vector<RecordEnvelope> records_;
  std::unordered_map<std::string, std::size_t> by_hash_;
  bool recovered_truncation_ = false;
};

}  // namespace editbench
