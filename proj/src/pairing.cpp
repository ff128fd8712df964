#include "thc/pairing.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "thc/errors.hpp"

namespace thc {

namespace {

blst_scalar to_blst_scalar(const Scalar& k) {
  blst_scalar s;
  blst_scalar_from_fr(&s, &k.raw());
  return s;
}

bool scalar_bit(const blst_scalar& s, std::size_t i) { return (s.b[i / 8] >> (i % 8)) & 1; }

constexpr std::size_t kScalarBits = 255;

}  // namespace

// ---------------------------------------------------------------- Scalar

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar out;
  const std::uint64_t limbs[4] = {v, 0, 0, 0};
  blst_fr_from_uint64(&out.v_, limbs);
  return out;
}

Scalar Scalar::reduce(std::span<const std::uint8_t> in) {
  blst_scalar s;
  blst_scalar_from_le_bytes(&s, in.data(), in.size());
  Scalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

Scalar Scalar::random(Rng& rng) {
  std::array<std::uint8_t, 64> wide{};
  rng.fill(wide);
  return reduce(wide);
}

Scalar Scalar::random_nonzero(Rng& rng) {
  for (;;) {
    auto k = random(rng);
    if (!k.is_zero()) return k;
  }
}

Scalar Scalar::from_bytes(std::span<const std::uint8_t> in) {
  if (in.size() != kBytes) throw FormatError("scalar encoding must be 32 bytes");
  blst_scalar s;
  blst_scalar_from_lendian(&s, in.data());
  if (!blst_scalar_fr_check(&s)) throw FormatError("non-canonical scalar");
  Scalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

std::array<std::uint8_t, Scalar::kBytes> Scalar::to_bytes() const {
  blst_scalar s = to_blst_scalar(*this);
  std::array<std::uint8_t, kBytes> out{};
  blst_lendian_from_scalar(out.data(), &s);
  return out;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r;
  blst_fr_add(&r.v_, &v_, &o.v_);
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r;
  blst_fr_sub(&r.v_, &v_, &o.v_);
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r;
  blst_fr_mul(&r.v_, &v_, &o.v_);
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  blst_fr_cneg(&r.v_, &v_, true);
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw InputError("inverse of zero scalar");
  Scalar r;
  blst_fr_inverse(&r.v_, &v_);
  return r;
}

Scalar Scalar::pow(std::uint64_t e) const {
  Scalar acc = from_u64(1);
  Scalar base = *this;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

bool Scalar::is_zero() const {
  auto b = to_bytes();
  return std::all_of(b.begin(), b.end(), [](std::uint8_t x) { return x == 0; });
}

bool Scalar::operator==(const Scalar& o) const { return to_bytes() == o.to_bytes(); }

// ---------------------------------------------------------------- G1

G1::G1() { std::memset(&p_, 0, sizeof p_); }

G1 G1::generator() { return G1(*blst_p1_generator()); }

G1 G1::hash_to(std::string_view dst, std::span<const std::uint8_t> msg) {
  blst_p1 out;
  blst_hash_to_g1(&out, msg.data(), msg.size(), reinterpret_cast<const byte*>(dst.data()), dst.size(), nullptr, 0);
  return G1(out);
}

G1 G1::from_bytes(std::span<const std::uint8_t> in) {
  if (in.size() != kBytes) throw FormatError("G1 encoding must be 48 bytes");
  blst_p1_affine a;
  if (blst_p1_uncompress(&a, in.data()) != BLST_SUCCESS) throw FormatError("invalid G1 encoding");
  if (!blst_p1_affine_in_g1(&a)) throw FormatError("G1 point outside prime-order subgroup");
  blst_p1 p;
  blst_p1_from_affine(&p, &a);
  G1 out(p);
  auto re = out.to_bytes();
  if (!std::equal(re.begin(), re.end(), in.begin())) throw FormatError("non-canonical G1 encoding");
  return out;
}

std::array<std::uint8_t, G1::kBytes> G1::to_bytes() const {
  std::array<std::uint8_t, kBytes> out{};
  blst_p1_compress(out.data(), &p_);
  return out;
}

G1 G1::operator+(const G1& o) const {
  blst_p1 r;
  blst_p1_add_or_double(&r, &p_, &o.p_);
  return G1(r);
}

G1 G1::operator-() const {
  blst_p1 r = p_;
  blst_p1_cneg(&r, true);
  return G1(r);
}

G1 G1::operator-(const G1& o) const { return *this + (-o); }

G1 G1::operator*(const Scalar& k) const {
  blst_scalar s = to_blst_scalar(k);
  blst_p1 r;
  blst_p1_mult(&r, &p_, s.b, kScalarBits);
  return G1(r);
}

bool G1::is_identity() const { return blst_p1_is_inf(&p_); }

bool G1::operator==(const G1& o) const { return blst_p1_is_equal(&p_, &o.p_); }

// ---------------------------------------------------------------- G2

G2::G2() { std::memset(&p_, 0, sizeof p_); }

G2 G2::generator() { return G2(*blst_p2_generator()); }

G2 G2::hash_to(std::string_view dst, std::span<const std::uint8_t> msg) {
  blst_p2 out;
  blst_hash_to_g2(&out, msg.data(), msg.size(), reinterpret_cast<const byte*>(dst.data()), dst.size(), nullptr, 0);
  return G2(out);
}

G2 G2::from_bytes(std::span<const std::uint8_t> in) {
  if (in.size() != kBytes) throw FormatError("G2 encoding must be 96 bytes");
  blst_p2_affine a;
  if (blst_p2_uncompress(&a, in.data()) != BLST_SUCCESS) throw FormatError("invalid G2 encoding");
  if (!blst_p2_affine_in_g2(&a)) throw FormatError("G2 point outside prime-order subgroup");
  blst_p2 p;
  blst_p2_from_affine(&p, &a);
  G2 out(p);
  auto re = out.to_bytes();
  if (!std::equal(re.begin(), re.end(), in.begin())) throw FormatError("non-canonical G2 encoding");
  return out;
}

std::array<std::uint8_t, G2::kBytes> G2::to_bytes() const {
  std::array<std::uint8_t, kBytes> out{};
  blst_p2_compress(out.data(), &p_);
  return out;
}

G2 G2::operator+(const G2& o) const {
  blst_p2 r;
  blst_p2_add_or_double(&r, &p_, &o.p_);
  return G2(r);
}

G2 G2::operator-() const {
  blst_p2 r = p_;
  blst_p2_cneg(&r, true);
  return G2(r);
}

G2 G2::operator-(const G2& o) const { return *this + (-o); }

G2 G2::operator*(const Scalar& k) const {
  blst_scalar s = to_blst_scalar(k);
  blst_p2 r;
  blst_p2_mult(&r, &p_, s.b, kScalarBits);
  return G2(r);
}

bool G2::is_identity() const { return blst_p2_is_inf(&p_); }

bool G2::operator==(const G2& o) const { return blst_p2_is_equal(&p_, &o.p_); }

// ---------------------------------------------------------------- GT

GT::GT() : v_(*blst_fp12_one()) {}

std::array<std::uint8_t, GT::kBytes> GT::to_bytes() const {
  std::array<std::uint8_t, kBytes> out{};
  blst_bendian_from_fp12(out.data(), &v_);
  return out;
}

GT GT::from_bytes(std::span<const std::uint8_t> in) {
  if (in.size() != kBytes) throw FormatError("GT encoding must be 576 bytes");
  blst_fp12 v;
  const std::uint8_t* p = in.data();
  // Mirror of blst_bendian_from_fp12.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      blst_fp_from_bendian(&v.fp6[j].fp2[i].fp[0], p);
      p += 48;
      blst_fp_from_bendian(&v.fp6[j].fp2[i].fp[1], p);
      p += 48;
    }
  }
  GT out(v);
  auto re = out.to_bytes();
  if (!std::equal(re.begin(), re.end(), in.begin())) throw FormatError("non-canonical GT encoding");
  if (!blst_fp12_in_group(&v)) throw FormatError("GT element outside target group");
  return out;
}

GT GT::operator*(const GT& o) const {
  blst_fp12 r;
  blst_fp12_mul(&r, &v_, &o.v_);
  return GT(r);
}

GT GT::inverse() const {
  // Target group elements are unitary, so the conjugate is the inverse.
  blst_fp12 r = v_;
  blst_fp12_conjugate(&r);
  return GT(r);
}

GT GT::pow(const Scalar& k) const {
  constexpr int kWindow = 4;
  std::array<blst_fp12, 1 << kWindow> table;
  table[0] = *blst_fp12_one();
  for (int i = 1; i < (1 << kWindow); ++i) blst_fp12_mul(&table[i], &table[i - 1], &v_);

  blst_scalar s = to_blst_scalar(k);
  blst_fp12 acc = *blst_fp12_one();
  constexpr int kTopBits = 256;
  for (int w = kTopBits / kWindow - 1; w >= 0; --w) {
    for (int i = 0; i < kWindow; ++i) blst_fp12_cyclotomic_sqr(&acc, &acc);
    int digit = 0;
    for (int i = kWindow - 1; i >= 0; --i) digit = (digit << 1) | static_cast<int>(scalar_bit(s, w * kWindow + i));
    if (digit) blst_fp12_mul(&acc, &acc, &table[digit]);
  }
  return GT(acc);
}

bool GT::is_one() const { return blst_fp12_is_one(&v_); }

bool GT::operator==(const GT& o) const { return blst_fp12_is_equal(&v_, &o.v_); }

// ---------------------------------------------------------------- pairing

GT pairing(const G1& a, const G2& b) {
  std::pair<G1, G2> one[] = {{a, b}};
  return pairing_product(one);
}

GT pairing_product(std::span<const std::pair<G1, G2>> pairs) {
  std::vector<blst_p1_affine> ps;
  std::vector<blst_p2_affine> qs;
  ps.reserve(pairs.size());
  qs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a.is_identity() || b.is_identity()) continue;
    blst_p1_affine pa;
    blst_p2_affine qa;
    blst_p1_to_affine(&pa, &a.raw());
    blst_p2_to_affine(&qa, &b.raw());
    ps.push_back(pa);
    qs.push_back(qa);
  }
  if (ps.empty()) return GT::one();
  std::vector<const blst_p1_affine*> pp(ps.size());
  std::vector<const blst_p2_affine*> qp(qs.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    pp[i] = &ps[i];
    qp[i] = &qs[i];
  }
  blst_fp12 ml, out;
  blst_miller_loop_n(&ml, qp.data(), pp.data(), ps.size());
  blst_final_exp(&out, &ml);
  return GT(out);
}

namespace {

constexpr std::size_t kPippengerThreshold = 8;

template <class Point>
std::vector<std::size_t> live_terms(std::span<const Point> points, std::span<const Scalar> scalars) {
  if (points.size() != scalars.size()) throw InputError("multi_exp: length mismatch");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!points[i].is_identity() && !scalars[i].is_zero()) idx.push_back(i);
  return idx;
}

}  // namespace

G1 multi_exp(std::span<const G1> points, std::span<const Scalar> scalars) {
  auto idx = live_terms(points, scalars);
  if (idx.size() < kPippengerThreshold) {
    G1 acc;
    for (auto i : idx) acc += points[i] * scalars[i];
    return acc;
  }
  std::vector<blst_p1_affine> aff(idx.size());
  std::vector<blst_scalar> ks(idx.size());
  std::vector<const blst_p1_affine*> ap(idx.size());
  std::vector<const byte*> kp(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    blst_p1_to_affine(&aff[j], &points[idx[j]].raw());
    ks[j] = to_blst_scalar(scalars[idx[j]]);
    ap[j] = &aff[j];
    kp[j] = ks[j].b;
  }
  std::vector<limb_t> scratch(blst_p1s_mult_pippenger_scratch_sizeof(idx.size()) / sizeof(limb_t) + 1);
  blst_p1 out;
  blst_p1s_mult_pippenger(&out, ap.data(), idx.size(), kp.data(), kScalarBits, scratch.data());
  return G1(out);
}

G2 multi_exp(std::span<const G2> points, std::span<const Scalar> scalars) {
  auto idx = live_terms(points, scalars);
  if (idx.size() < kPippengerThreshold) {
    G2 acc;
    for (auto i : idx) acc += points[i] * scalars[i];
    return acc;
  }
  std::vector<blst_p2_affine> aff(idx.size());
  std::vector<blst_scalar> ks(idx.size());
  std::vector<const blst_p2_affine*> ap(idx.size());
  std::vector<const byte*> kp(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    blst_p2_to_affine(&aff[j], &points[idx[j]].raw());
    ks[j] = to_blst_scalar(scalars[idx[j]]);
    ap[j] = &aff[j];
    kp[j] = ks[j].b;
  }
  std::vector<limb_t> scratch(blst_p2s_mult_pippenger_scratch_sizeof(idx.size()) / sizeof(limb_t) + 1);
  blst_p2 out;
  blst_p2s_mult_pippenger(&out, ap.data(), idx.size(), kp.data(), kScalarBits, scratch.data());
  return G2(out);
}

Scalar hash_to_scalar(std::string_view domain_tag, std::span<const std::uint8_t> payload) {
  if (domain_tag.empty()) throw InputError("hash_to_scalar: empty domain tag");
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  static constexpr std::uint8_t kPrefix[] = {'t', 'h', 'c', '/', 'h', '2', 's', '/', 'v', '1'};
  crypto_hash_sha512_update(&st, kPrefix, sizeof kPrefix);
  std::uint8_t len[8];
  for (int i = 0; i < 8; ++i) len[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(domain_tag.size()) >> (8 * i));
  crypto_hash_sha512_update(&st, len, sizeof len);
  crypto_hash_sha512_update(&st, reinterpret_cast<const unsigned char*>(domain_tag.data()), domain_tag.size());
  crypto_hash_sha512_update(&st, payload.data(), payload.size());
  std::array<std::uint8_t, 64> digest{};
  crypto_hash_sha512_final(&st, digest.data());
  return Scalar::reduce(digest);
}

std::string_view group_order_hex() {
  return "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";
}

}  // namespace thc
