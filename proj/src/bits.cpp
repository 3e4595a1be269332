#include "hrcc/bits.hpp"

namespace hrcc {

std::string bits_to_string(const Bits& b) {
  std::string s;
  s.reserve(b.size());
  for (auto x : b) s.push_back(x ? '1' : '0');
  return s;
}

std::string bits_to_hex(const Bits& b) {
  const std::size_t n = b.size();
  const std::size_t pad = (4 - n % 4) % 4;  // leading zero bits up to a nibble
  std::string s;
  s.reserve((n + pad) / 4);
  unsigned nib = 0;
  std::size_t filled = pad;
  for (std::size_t i = 0; i < n; ++i) {
    nib = (nib << 1) | (b[i] & 1u);
    if (++filled == 4) {
      s.push_back("0123456789ABCDEF"[nib]);
      nib = 0;
      filled = 0;
    }
  }
  if (s.empty()) s = "0";
  return s;
}

Bits hex_to_bits(const std::string& hex, std::size_t nbits) {
  std::string h = hex;
  if (h.size() >= 2 && h[0] == '0' && (h[1] == 'x' || h[1] == 'X')) h = h.substr(2);
  Bits out;
  out.reserve(h.size() * 4);
  for (char c : h) {
    unsigned nib;
    if (c >= '0' && c <= '9') nib = c - '0';
    else if (c >= 'a' && c <= 'f') nib = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F') nib = 10 + (c - 'A');
    else throw std::invalid_argument("hex_to_bits: invalid digit");
    for (int j = 3; j >= 0; --j) out.push_back((nib >> j) & 1u);
  }
  if (out.size() < nbits) throw std::invalid_argument("hex_to_bits: too few digits");
  // Extra leading bits (from nibble rounding) must be zero.
  for (std::size_t i = 0; i + nbits < out.size(); ++i)
    if (out[i]) throw std::invalid_argument("hex_to_bits: value wider than bit count");
  return Bits(out.end() - static_cast<std::ptrdiff_t>(nbits), out.end());
}

}  // namespace hrcc
