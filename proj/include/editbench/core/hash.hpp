#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace editbench {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view bytes);

// Short content id: first 16 hex chars of the SHA-256. Used for record and
// object identifiers; full hashes are kept for cache keys.
std::string content_id(std::string_view bytes);

// First 8 bytes of the SHA-256 as a big-endian integer. Stable seed
// derivation for deterministic streams.
std::uint64_t seed_from_bytes(std::string_view bytes);

}  // namespace editbench
