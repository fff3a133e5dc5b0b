#include "mocr/common/hash.hpp"

#include <zlib.h>

#include <stdexcept>

namespace mocr {

std::uint32_t crc32_ieee(std::string_view data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

namespace {
std::string hex_impl(std::uint64_t value, int digits) {
  static const char* kDigits = "0123456789abcdef";
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}
}  // namespace

std::string to_hex(std::uint64_t value, int digits) { return hex_impl(value, digits); }
std::string to_hex(std::uint32_t value, int digits) { return hex_impl(value, digits); }

std::uint64_t parse_hex64(std::string_view text) {
  if (text.empty() || text.size() > 16) {
    throw std::invalid_argument("parse_hex64: expected 1..16 hex digits");
  }
  std::uint64_t value = 0;
  for (char c : text) {
    value <<= 4;
    if (c >= '0' && c <= '9') {
      value |= static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      value |= static_cast<std::uint64_t>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      value |= static_cast<std::uint64_t>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("parse_hex64: invalid hex digit");
    }
  }
  return value;
}

}  // namespace mocr
