#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrcc/bits.hpp"

namespace hrcc {

enum class PolyBase { octal, hex };

// Polynomial over GF(2), stored as packed coefficient words: bit k of the
// word vector is the coefficient of x^k. Normalized so the top word is
// nonzero; the zero polynomial has an empty word vector and degree() == -1.
class BinaryPolynomial {
 public:
  BinaryPolynomial() = default;
  static BinaryPolynomial zero() { return {}; }
  static BinaryPolynomial one() { return from_value(1); }
  static BinaryPolynomial from_value(std::uint64_t v);
  // bits[0] is the highest-order coefficient.
  static BinaryPolynomial from_bits_msb_first(const Bits& bits);

  bool is_zero() const { return words_.empty(); }
  int degree() const;  // -1 for the zero polynomial
  int coeff(int k) const;
  std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }
  // Coefficients of x^0..x^(count-1) packed into one word (count <= 64).
  std::uint64_t taps(int count) const;

  BinaryPolynomial operator+(const BinaryPolynomial& o) const;  // XOR
  BinaryPolynomial operator*(const BinaryPolynomial& o) const;
  friend bool operator==(const BinaryPolynomial&, const BinaryPolynomial&) = default;

  std::string to_hex() const;    // "0x..." highest-to-lowest coefficient
  std::string to_octal() const;  // no prefix

 private:
  void trim();
  std::vector<std::uint64_t> words_;
};

// Parses a numeral whose binary expansion, highest to lowest order, gives the
// coefficients (bit k of the value = coefficient of x^k). Hex values may
// carry a 0x prefix. Throws std::invalid_argument on bad digits.
BinaryPolynomial parse_poly(const std::string& text, PolyBase base);

// Remainder of a modulo p over GF(2). Throws std::domain_error when p = 0.
BinaryPolynomial poly_mod(const BinaryPolynomial& a, const BinaryPolynomial& p);
// Quotient/remainder pair.
std::pair<BinaryPolynomial, BinaryPolynomial> poly_divmod(const BinaryPolynomial& a,
                                                          const BinaryPolynomial& p);

// Systematic CRC: returns message followed by deg(p) parity bits so the whole
// sequence, read as a polynomial (first bit = highest order), is divisible by
// p. Requires deg(p) >= 1 and constant term 1.
Bits crc_append(const Bits& message, const BinaryPolynomial& p);

// True iff the sequence, read as a polynomial, is divisible by p.
bool crc_check(const Bits& sequence, const BinaryPolynomial& p);

}  // namespace hrcc
