#include "editbench/store/jsonl_store.hpp"

#include <fstream>
#include <iostream>

#include "editbench/core/error.hpp"
#include "editbench/core/hash.hpp"

namespace editbench {

RecordEnvelope RecordEnvelope::make(std::string record_type, Json payload) {
  RecordEnvelope e;
  e.record_type = std::move(record_type);
  e.schema_version = kSchemaVersion;
  e.content_hash = sha256_hex(canonical_dump(payload));
  e.payload = std::move(payload);
  return e;
}

void RecordEnvelope::validate() const {
  if (record_type.empty())
    throw validation_error("envelope: empty record_type");
  if (schema_version != kSchemaVersion)
    throw validation_error("envelope: unknown schema_version " +
                           std::to_string(schema_version));
  if (content_hash != sha256_hex(canonical_dump(payload)))
    throw validation_error("envelope: content_hash does not match payload");
}

void to_json(Json& j, const RecordEnvelope& e) {
  j = Json{{"record_type", e.record_type},
           {"schema_version", e.schema_version},
           {"payload", e.payload},
           {"content_hash", e.content_hash}};
}

void from_json(const Json& j, RecordEnvelope& e) {
  j.at("record_type").get_to(e.record_type);
  j.at("schema_version").get_to(e.schema_version);
  e.payload = j.at("payload");
  j.at("content_hash").get_to(e.content_hash);
  e.validate();
}

JsonlStore JsonlStore::open(std::filesystem::path path) {
  JsonlStore store;
  store.path_ = std::move(path);
  if (store.path_.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(store.path_.parent_path(), ec);
  }

  std::ifstream file(store.path_, std::ios::binary);
  if (!file) return store;  // fresh store

  std::string line;
  std::uintmax_t good_bytes = 0;
  std::size_t line_number = 0;
  bool saw_bad_tail = false;
  while (std::getline(file, line)) {
    ++line_number;
    bool is_last = file.peek() == EOF;
    if (line.empty()) {
      if (is_last) break;
      throw io_error("store " + store.path_.string() + ": empty line " +
                     std::to_string(line_number));
    }
    RecordEnvelope envelope;
    try {
      envelope = Json::parse(line).get<RecordEnvelope>();
    } catch (const std::exception& e) {
      if (is_last) {
        saw_bad_tail = true;
        break;
      }
      throw io_error("store " + store.path_.string() + ": corrupt record at line " +
                     std::to_string(line_number) + ": " + e.what());
    }
    store.by_hash_.emplace(envelope.content_hash, store.records_.size());
    store.records_.push_back(std::move(envelope));
    good_bytes += line.size() + 1;
  }
  if (saw_bad_tail) {
    std::filesystem::resize_file(store.path_, good_bytes);
    store.recovered_truncation_ = true;
    std::cerr << "[store] " << store.path_.string()
              << ": truncated partial trailing record at line "
              << line_number << "\n";
  }
  return store;
}

std::size_t JsonlStore::append(const RecordEnvelope& envelope) {
  envelope.validate();
  auto it = by_hash_.find(envelope.content_hash);
  if (it != by_hash_.end()) return it->second;

  std::ofstream file(path_, std::ios::app | std::ios::binary);
  if (!file) throw io_error("cannot append to store " + path_.string());
  Json j = envelope;
  file << j.dump() << '\n';
  file.flush();
  if (!file) throw io_error("write failed on store " + path_.string());

  std::size_t offset = records_.size();
  by_hash_.emplace(envelope.content_hash, offset);
  records_.push_back(envelope);
  return offset;
}

}  // namespace editbench
