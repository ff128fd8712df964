#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thc {

using Bytes = std::vector<std::uint8_t>;

// Little-endian append-only encoder shared by every binary file format.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void raw(std::span<const std::uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }
  // u32 length followed by the bytes.
  void blob(std::span<const std::uint8_t> data);
  void str(std::string_view s);
  // 4-byte magic plus a u16 version.
  void header(std::string_view magic, std::uint16_t version);

  std::size_t size() const { return out_.size(); }
  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked decoder; every short read throws FormatError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::span<const std::uint8_t> raw(std::size_t n);
  Bytes blob();
  std::string str();
  // Returns the version after checking the magic.
  std::uint16_t header(std::string_view magic);
  // Length prefix bounded by the bytes actually left, so corrupt counts fail fast.
  std::uint32_t count(std::size_t min_item_size);

  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }
  void expect_done() const;

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(std::string_view hex);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> data);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace thc
