#include "editbench/core/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace editbench {

namespace {

std::array<unsigned char, 32> sha256_raw(std::string_view bytes) {
  std::array<unsigned char, 32> digest{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
            EVP_DigestFinal_ex(ctx, digest.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || len != digest.size()) throw std::runtime_error("SHA-256 failed");
  return digest;
}

constexpr char kHex[] = "0123456789abcdef";

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  auto digest = sha256_raw(bytes);
  std::string out;
  out.reserve(64);
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

std::string content_id(std::string_view bytes) {
  return sha256_hex(bytes).substr(0, 16);
}

std::uint64_t seed_from_bytes(std::string_view bytes) {
  auto digest = sha256_raw(bytes);
  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed = (seed << 8) | digest[static_cast<std::size_t>(i)];
  return seed;
}

}  // namespace editbench
