#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace thc {

// Randomness source injected into every operation that samples.
//
// The default instance draws from the operating system CSPRNG. A seeded
// instance expands the seed with ChaCha20 and is only meant for reproducible
// tests and fixtures.
class Rng {
 public:
  Rng();
  static Rng seeded(std::uint64_t seed);

  void fill(std::span<std::uint8_t> out);
  bool deterministic() const { return key_.has_value(); }

  // Independent child stream; for seeded parents the child is seeded too.
  Rng fork(std::uint64_t label);

 private:
  std::optional<std::array<std::uint8_t, 32>> key_;
  std::uint64_t counter_ = 0;
};

}  // namespace thc
