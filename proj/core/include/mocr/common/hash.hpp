#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mocr {

/// FNV-1a, 64-bit. Used for content fingerprints and battle keys.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (char c : data) {
    hash ^= static_cast<std::uint8_t>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

/// CRC-32 (IEEE 802.3, as used by zlib/PNG); backs per-record log checksums.
std::uint32_t crc32_ieee(std::string_view data);

std::string to_hex(std::uint64_t value, int digits = 16);
std::string to_hex(std::uint32_t value, int digits = 8);

/// Parses a fixed-width lowercase/uppercase hex string. Throws on bad input.
std::uint64_t parse_hex64(std::string_view text);

}  // namespace mocr
