#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace anontx {

using Bit = std::uint8_t;
using Bits = std::vector<Bit>;
using PlayerId = int;
using PlayerSet = std::vector<PlayerId>;

inline int hamming_weight(std::span<const Bit> bits) {
  int w = 0;
  for (Bit b : bits) w += b & 1;
  return w;
}

inline Bit parity(std::span<const Bit> bits) {
  return static_cast<Bit>(hamming_weight(bits) & 1);
}

/// "0110"-style text; the serialization format for every bit string.
inline std::string to_text(std::span<const Bit> bits) {
  std::string s;
  s.reserve(bits.size());
  for (Bit b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline Bits from_text(const std::string& text) {
  Bits out;
  out.reserve(text.size());
  for (char c : text) out.push_back(c == '1' ? 1 : 0);
  return out;
}

/// Smallest c with 2^c >= n. ceil_log2(1) == 0.
constexpr int ceil_log2(std::uint64_t n) {
  int c = 0;
  while ((std::uint64_t{1} << c) < n) ++c;
  return c;
}

/// Sorted, de-duplicated copy; throws std::invalid_argument if any index is
/// outside [0, n).
PlayerSet normalize_players(PlayerSet players, int n, const char* what);

}  // namespace anontx
