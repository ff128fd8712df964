#include "thc/bytes.hpp"

#include <sodium.h>

#include <fstream>
#include <iterator>

#include "thc/errors.hpp"

namespace thc {

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::blob(std::span<const std::uint8_t> data) {
  u32(static_cast<std::uint32_t>(data.size()));
  raw(data);
}

void ByteWriter::str(std::string_view s) { blob(as_bytes(s)); }

void ByteWriter::header(std::string_view magic, std::uint16_t version) {
  raw(as_bytes(magic.substr(0, 4)));
  u8(static_cast<std::uint8_t>(version));
  u8(static_cast<std::uint8_t>(version >> 8));
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
  if (n > remaining()) throw FormatError("truncated input");
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
  auto b = raw(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  auto b = raw(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

Bytes ByteReader::blob() {
  auto n = u32();
  auto b = raw(n);
  return {b.begin(), b.end()};
}

std::string ByteReader::str() {
  auto b = blob();
  return {b.begin(), b.end()};
}

std::uint16_t ByteReader::header(std::string_view magic) {
  auto m = raw(4);
  if (!std::equal(m.begin(), m.end(), magic.begin(), magic.begin() + 4))
    throw FormatError("bad magic, expected " + std::string(magic));
  auto b = raw(2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t ByteReader::count(std::size_t min_item_size) {
  auto n = u32();
  if (min_item_size != 0 && n > remaining() / min_item_size) throw FormatError("count exceeds input");
  return n;
}

void ByteReader::expect_done() const {
  if (!done()) throw FormatError("trailing bytes");
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2) throw FormatError("odd-length hex");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw FormatError("bad hex digit");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return out;
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

}  // namespace thc
