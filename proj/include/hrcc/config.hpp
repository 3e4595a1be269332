#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrcc/polynomial.hpp"

namespace hrcc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TermMode { zt, tb };
enum class DecoderVariant { zt, tb_single, tb_multi, tb_wava };

std::string to_string(TermMode m);
std::string to_string(DecoderVariant v);
TermMode term_mode_from_string(const std::string& s);
DecoderVariant variant_from_string(const std::string& s);
bool variant_matches_mode(DecoderVariant v, TermMode m);

// Parity-check matrix of an (n, n-1, v) systematic code. polys[i] is the
// polynomial attached to code stream i; stream 0 is the parity stream. The
// octal text form lists streams from n-1 down to 0, e.g. "33,25,37,31".
struct ParityCheck {
  std::vector<BinaryPolynomial> polys;
  int n = 0;
  int v = 0;

  static ParityCheck from_octal_csv(const std::string& csv);
  std::string to_octal_csv() const;
  std::uint32_t taps(int stream) const;  // bit k = coefficient of x^k
  void validate() const;
};

struct CodeConfig {
  ParityCheck H;
  int K = 0;                // information bits
  int m = 0;                // CRC degree
  BinaryPolynomial crc;     // degree m, constant term 1
  TermMode mode = TermMode::zt;

  int n() const { return H.n; }
  int v() const { return H.v; }
  int term_steps() const;       // ZT: ceil(v/(n-1)); TB: 0
  int term_input_bits() const;  // (n-1) * term_steps
  int data_steps() const { return (K + m) / (n() - 1); }
  int steps() const { return data_steps() + term_steps(); }
  int block_bits() const { return steps() * n(); }  // N
  int data_stages() const { return data_steps() * n(); }
  double rate() const { return static_cast<double>(K) / block_bits(); }

  void validate() const;  // throws ConfigError naming the offending field
};

struct StopRule {
  std::uint64_t min_errors = 100;
  std::uint64_t max_trials = 10'000'000;
};

struct RunConfig {
  CodeConfig code;
  std::uint64_t seed = 1;
  DecoderVariant variant = DecoderVariant::zt;
  std::vector<double> snr_db;
  StopRule stop;
  std::uint64_t list_cap = 0;  // 0 = logical maximum 2^(K+m)
  int workers = 1;

  void validate() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json_text(const std::string& text);
std::string run_config_to_json_text(const RunConfig& rc);  // canonical form

}  // namespace hrcc
