#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hrcc {

// Bit sequence, one bit per element (values 0/1). First element is the first
// bit on the wire / the highest-order polynomial coefficient where a sequence
// is read as a polynomial.
using Bits = std::vector<std::uint8_t>;

inline int hamming_weight(const Bits& b) {
  int w = 0;
  for (auto x : b) w += (x != 0);
  return w;
}

inline Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
  Bits r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
  return r;
}

std::string bits_to_string(const Bits& b);

// Hex form of the bit string read as an integer (first bit = highest order),
// zero-padded at the front to a whole number of nibbles. The caller must know
// the bit count to invert exactly.
std::string bits_to_hex(const Bits& b);
Bits hex_to_bits(const std::string& hex, std::size_t nbits);

}  // namespace hrcc
