#pragma once
// Portable 64-bit mixes of byte strings (same value on every platform and worker).

#include <cstdint>
#include <string_view>

namespace cubicff {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Absorbs 8-byte little-endian chunks; `key` separates independent hash functions.
inline std::uint64_t mix_bytes(std::string_view s, std::uint64_t key) {
  std::uint64_t h = splitmix64(key ^ (s.size() * 0xff51afd7ed558ccdULL));
  std::size_t i = 0;
  while (i < s.size()) {
    std::uint64_t chunk = 0;
    for (int b = 0; b < 8 && i < s.size(); ++b, ++i)
      chunk |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[i])) << (8 * b);
    h = splitmix64(h ^ chunk);
  }
  return splitmix64(h ^ key);
}

constexpr std::uint64_t kKeyV = 0x5851f42d4c957f2dULL;
constexpr std::uint64_t kKeyZ = 0x14057b7ef767814fULL;
constexpr std::uint64_t kKeyTau = 0xd1342543de82ef95ULL;

}  // namespace cubicff
