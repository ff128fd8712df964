#pragma once

// Type-3 pairing group used by every other module. The backend is BLS12-381
// (blst); nothing outside this header and pairing.cpp touches blst types.
//
// Encodings (all fixed width):
//   Scalar  32 bytes, canonical little-endian, value < p
//   G1      48 bytes, compressed (ZCash/IETF flag bits)
//   G2      96 bytes, compressed
//   GT     576 bytes, the twelve Fp coefficients big-endian in blst order

#include <blst.h>

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "thc/bytes.hpp"
#include "thc/rng.hpp"

namespace thc {

inline constexpr std::string_view kCurveName = "BLS12-381";
inline constexpr std::uint32_t kCurveId = 0x0B1512;

// Element of Z_p, p the prime group order.
class Scalar {
 public:
  static constexpr std::size_t kBytes = 32;

  Scalar() : v_{} {}
  static Scalar from_u64(std::uint64_t v);
  static Scalar random(Rng& rng);
  static Scalar random_nonzero(Rng& rng);
  // Rejects non-canonical encodings (>= p).
  static Scalar from_bytes(std::span<const std::uint8_t> in);
  // Reduces an arbitrary-length little-endian integer mod p.
  static Scalar reduce(std::span<const std::uint8_t> in);

  std::array<std::uint8_t, kBytes> to_bytes() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  // Throws InputError on zero.
  Scalar inverse() const;
  Scalar pow(std::uint64_t e) const;

  bool is_zero() const;
  bool operator==(const Scalar& o) const;

  const blst_fr& raw() const { return v_; }

 private:
  blst_fr v_;
};

class G1 {
 public:
  static constexpr std::size_t kBytes = 48;

  G1();  // identity
  static G1 identity() { return G1(); }
  static G1 generator();
  // Hash-to-curve with an explicit domain separation tag.
  static G1 hash_to(std::string_view dst, std::span<const std::uint8_t> msg);
  static G1 from_bytes(std::span<const std::uint8_t> in);

  std::array<std::uint8_t, kBytes> to_bytes() const;

  G1 operator+(const G1& o) const;
  G1 operator-(const G1& o) const;
  G1 operator-() const;
  G1 operator*(const Scalar& k) const;
  G1& operator+=(const G1& o) { return *this = *this + o; }

  bool is_identity() const;
  bool operator==(const G1& o) const;

  const blst_p1& raw() const { return p_; }
  explicit G1(const blst_p1& p) : p_(p) {}

 private:
  blst_p1 p_;
};

class G2 {
 public:
  static constexpr std::size_t kBytes = 96;

  G2();
  static G2 identity() { return G2(); }
  static G2 generator();
  static G2 hash_to(std::string_view dst, std::span<const std::uint8_t> msg);
  static G2 from_bytes(std::span<const std::uint8_t> in);

  std::array<std::uint8_t, kBytes> to_bytes() const;

  G2 operator+(const G2& o) const;
  G2 operator-(const G2& o) const;
  G2 operator-() const;
  G2 operator*(const Scalar& k) const;
  G2& operator+=(const G2& o) { return *this = *this + o; }

  bool is_identity() const;
  bool operator==(const G2& o) const;

  const blst_p2& raw() const { return p_; }
  explicit G2(const blst_p2& p) : p_(p) {}

 private:
  blst_p2 p_;
};

// Target group, written multiplicatively.
class GT {
 public:
  static constexpr std::size_t kBytes = 576;

  GT();  // one
  static GT one() { return GT(); }
  static GT from_bytes(std::span<const std::uint8_t> in);

  std::array<std::uint8_t, kBytes> to_bytes() const;

  GT operator*(const GT& o) const;
  GT& operator*=(const GT& o) { return *this = *this * o; }
  GT inverse() const;
  GT pow(const Scalar& k) const;

  bool is_one() const;
  bool operator==(const GT& o) const;

  explicit GT(const blst_fp12& v) : v_(v) {}
  const blst_fp12& raw() const { return v_; }

 private:
  blst_fp12 v_;
};

GT pairing(const G1& a, const G2& b);

// prod e(a_i, b_i) with one shared final exponentiation. Pairs containing an
// identity element contribute the identity factor.
GT pairing_product(std::span<const std::pair<G1, G2>> pairs);

// sum k_i * P_i (Pippenger for larger inputs).
G1 multi_exp(std::span<const G1> points, std::span<const Scalar> scalars);
G2 multi_exp(std::span<const G2> points, std::span<const Scalar> scalars);

// Domain-separated hash into Z_p. The tag must be non-empty.
Scalar hash_to_scalar(std::string_view domain_tag, std::span<const std::uint8_t> payload);
inline Scalar hash_to_scalar(std::string_view domain_tag, std::string_view payload) {
  return hash_to_scalar(domain_tag, as_bytes(payload));
}

// Big-endian hex of the group order.
std::string_view group_order_hex();

}  // namespace thc
