#include "thc/rng.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>
#include <vector>

namespace thc {

namespace {

void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    return true;
  }();
  (void)ready;
}

}  // namespace

Rng::Rng() { ensure_sodium(); }

Rng Rng::seeded(std::uint64_t seed) {
  ensure_sodium();
  Rng rng;
  std::array<std::uint8_t, 32> key{};
  std::uint8_t material[24] = {'t', 'h', 'c', '-', 'r', 'n', 'g', '-', 's', 'e', 'e', 'd', '-', 'v', '1', 0};
  for (int i = 0; i < 8; ++i) material[16 + i] = static_cast<std::uint8_t>(seed >> (8 * i));
  crypto_hash_sha256(key.data(), material, sizeof material);
  rng.key_ = key;
  return rng;
}

void Rng::fill(std::span<std::uint8_t> out) {
  if (!key_) {
    randombytes_buf(out.data(), out.size());
    return;
  }
  // One nonce per call keeps every request on a fresh keystream.
  std::uint8_t nonce[crypto_stream_chacha20_ietf_NONCEBYTES] = {};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
  ++counter_;
  std::memset(out.data(), 0, out.size());
  crypto_stream_chacha20_ietf_xor(out.data(), out.data(), out.size(), nonce, key_->data());
}

Rng Rng::fork(std::uint64_t label) {
  if (!key_) return Rng();
  std::uint8_t material[48];
  std::memcpy(material, key_->data(), 32);
  for (int i = 0; i < 8; ++i) material[32 + i] = static_cast<std::uint8_t>(label >> (8 * i));
  for (int i = 0; i < 8; ++i) material[40 + i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
  ++counter_;
  Rng child;
  std::array<std::uint8_t, 32> key{};
  crypto_hash_sha256(key.data(), material, sizeof material);
  child.key_ = key;
  return child;
}

}  // namespace thc
