#include "hrcc/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hrcc {

void BinaryPolynomial::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

BinaryPolynomial BinaryPolynomial::from_value(std::uint64_t v) {
  BinaryPolynomial p;
  if (v) p.words_.push_back(v);
  return p;
}

BinaryPolynomial BinaryPolynomial::from_bits_msb_first(const Bits& bits) {
  BinaryPolynomial p;
  const std::size_t n = bits.size();
  p.words_.assign((n + 63) / 64, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i]) {
      const std::size_t k = n - 1 - i;  // power of x
      p.words_[k / 64] |= (std::uint64_t{1} << (k % 64));
    }
  }
  p.trim();
  return p;
}

int BinaryPolynomial::degree() const {
  if (words_.empty()) return -1;
  const int top = static_cast<int>(words_.size()) - 1;
  return top * 64 + (63 - std::countl_zero(words_.back()));
}

int BinaryPolynomial::coeff(int k) const {
  if (k < 0) return 0;
  const std::size_t w = static_cast<std::size_t>(k) / 64;
  if (w >= words_.size()) return 0;
  return static_cast<int>((words_[w] >> (k % 64)) & 1u);
}

std::uint64_t BinaryPolynomial::taps(int count) const {
  std::uint64_t v = low_word();
  if (count < 64) v &= (std::uint64_t{1} << count) - 1;
  return v;
}

BinaryPolynomial BinaryPolynomial::operator+(const BinaryPolynomial& o) const {
  BinaryPolynomial r;
  r.words_.resize(std::max(words_.size(), o.words_.size()), 0);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] ^= words_[i];
  for (std::size_t i = 0; i < o.words_.size(); ++i) r.words_[i] ^= o.words_[i];
  r.trim();
  return r;
}

BinaryPolynomial BinaryPolynomial::operator*(const BinaryPolynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  BinaryPolynomial r;
  r.words_.assign(words_.size() + o.words_.size(), 0);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      const int b = std::countr_zero(w);
      w &= w - 1;
      const std::size_t shift = i * 64 + static_cast<std::size_t>(b);
      const std::size_t wi = shift / 64;
      const int bo = static_cast<int>(shift % 64);
      for (std::size_t j = 0; j < o.words_.size(); ++j) {
        r.words_[wi + j] ^= o.words_[j] << bo;
        if (bo) r.words_[wi + j + 1] ^= o.words_[j] >> (64 - bo);
      }
    }
  }
  r.trim();
  return r;
}

std::string BinaryPolynomial::to_hex() const {
  if (is_zero()) return "0x0";
  std::string s = "0x";
  bool started = false;
  for (int i = static_cast<int>(words_.size()) - 1; i >= 0; --i) {
    for (int nib = 15; nib >= 0; --nib) {
      const unsigned d = (words_[static_cast<std::size_t>(i)] >> (nib * 4)) & 0xF;
      if (!started && d == 0) continue;
      started = true;
      s.push_back("0123456789ABCDEF"[d]);
    }
  }
  return s;
}

std::string BinaryPolynomial::to_octal() const {
  if (is_zero()) return "0";
  const int deg = degree();
  std::string s;
  for (int k = (deg / 3) * 3; k >= 0; k -= 3) {
    const unsigned d = static_cast<unsigned>(coeff(k + 2) << 2 | coeff(k + 1) << 1 | coeff(k));
    s.push_back(static_cast<char>('0' + d));
  }
  return s;
}

BinaryPolynomial parse_poly(const std::string& text, PolyBase base) {
  std::string t = text;
  if (base == PolyBase::hex && t.size() >= 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X'))
    t = t.substr(2);
  if (t.empty()) throw std::invalid_argument("parse_poly: empty numeral");
  Bits bits;
  const int per = (base == PolyBase::hex) ? 4 : 3;
  for (char c : t) {
    unsigned d;
    if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') d = 10 + static_cast<unsigned>(c - 'a');
    else if (c >= 'A' && c <= 'F') d = 10 + static_cast<unsigned>(c - 'A');
    else throw std::invalid_argument("parse_poly: invalid digit");
    if (base == PolyBase::octal && d > 7) throw std::invalid_argument("parse_poly: invalid octal digit");
    for (int j = per - 1; j >= 0; --j) bits.push_back((d >> j) & 1u);
  }
  return BinaryPolynomial::from_bits_msb_first(bits);
}

std::pair<BinaryPolynomial, BinaryPolynomial> poly_divmod(const BinaryPolynomial& a,
                                                          const BinaryPolynomial& p) {
  if (p.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
  BinaryPolynomial rem = a;
  BinaryPolynomial quot;
  const int dp = p.degree();
  int dr = rem.degree();
  while (dr >= dp) {
    const int shift = dr - dp;
    BinaryPolynomial x_shift;
    {
      Bits b(static_cast<std::size_t>(shift) + 1, 0);
      b[0] = 1;
      x_shift = BinaryPolynomial::from_bits_msb_first(b);
    }
    quot = quot + x_shift;
    rem = rem + (p * x_shift);
    dr = rem.degree();
  }
  return {quot, rem};
}

BinaryPolynomial poly_mod(const BinaryPolynomial& a, const BinaryPolynomial& p) {
  return poly_divmod(a, p).second;
}

namespace {

// Remainder of the sequence (as a polynomial) modulo p, via an m-bit LFSR.
std::uint64_t bit_remainder(const Bits& seq, const BinaryPolynomial& p) {
  const int m = p.degree();
  const std::uint64_t low = p.taps(m);  // p without the x^m term
  const std::uint64_t mask = (m >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
  std::uint64_t rem = 0;
  for (auto bit : seq) {
    const std::uint64_t fb = ((rem >> (m - 1)) & 1u) ^ (bit & 1u);
    rem = (rem << 1) & mask;
    if (fb) rem ^= low;
  }
  return rem;
}

}  // namespace

Bits crc_append(const Bits& message, const BinaryPolynomial& p) {
  const int m = p.degree();
  if (m < 1 || p.coeff(0) != 1) throw std::domain_error("crc_append: need deg >= 1 and constant term 1");
  if (m > 63) throw std::domain_error("crc_append: CRC degree > 63 unsupported");
  Bits padded = message;
  padded.insert(padded.end(), static_cast<std::size_t>(m), 0);
  const std::uint64_t rem = bit_remainder(padded, p);
  Bits out = message;
  for (int k = m - 1; k >= 0; --k) out.push_back(static_cast<std::uint8_t>((rem >> k) & 1u));
  return out;
}

bool crc_check(const Bits& sequence, const BinaryPolynomial& p) {
  const int m = p.degree();
  if (m < 1) throw std::domain_error("crc_check: need deg >= 1");
  if (m > 63) throw std::domain_error("crc_check: CRC degree > 63 unsupported");
  if (sequence.size() <= static_cast<std::size_t>(m))
    throw std::domain_error("crc_check: sequence no longer than CRC degree");
  return bit_remainder(sequence, p) == 0;
}

}  // namespace hrcc
