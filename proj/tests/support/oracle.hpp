#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "hrcc/bits.hpp"
#include "hrcc/config.hpp"

// Brute-force oracles used only by tests. Everything here is built directly
// from the parity-check definition (a sliding window of the last v output
// vectors), independent of the encoder, trellis, and decoder implementations
// it is used to check.
namespace oracle {

class WindowMachine {
 public:
  explicit WindowMachine(const hrcc::ParityCheck& H);

  int n() const { return n_; }
  int v() const { return v_; }

  // Output n-bit vectors (bit j = stream j) satisfying the time-t parity
  // check given the window of past outputs.
  std::vector<unsigned> valid_outputs(std::uint64_t window) const;
  std::uint64_t next_window(std::uint64_t window, unsigned y) const;
  // True when continuing with all-zero outputs satisfies every later check.
  bool zero_terminated(std::uint64_t window) const;

  // Output sequences (wire order) of exactly `steps` primal steps.
  std::set<hrcc::Bits> zt_paths(int steps) const;    // rest start, terminated end
  std::set<hrcc::Bits> tb_paths(int steps) const;    // cyclic consistency, steps >= v
  std::set<hrcc::Bits> from_rest(int steps) const;   // rest start, free end

 private:
  void dfs(std::uint64_t window, int remaining, hrcc::Bits& prefix,
           const std::function<bool(std::uint64_t)>& accept, std::set<hrcc::Bits>& out) const;

  hrcc::ParityCheck H_;
  int n_, v_;
  std::uint64_t window_mask_;
};

struct BruteMl {
  hrcc::Bits data;
  hrcc::Bits codeword;
  double metric = 0.0;
};

// Codebooks via the library encoders (data -> codeword), all 2^K messages.
std::vector<std::pair<hrcc::Bits, hrcc::Bits>> zt_codebook(const hrcc::CodeConfig& cfg);
std::vector<std::pair<hrcc::Bits, hrcc::Bits>> tb_codebook(const hrcc::CodeConfig& cfg);

// Minimum squared-Euclidean-metric entry over the codebook, summed in stage
// order; ties keep the first entry in codebook order.
BruteMl brute_ml(const std::vector<std::pair<hrcc::Bits, hrcc::Bits>>& codebook,
                 const std::vector<double>& received, double amplitude);

// Schoolbook remainder on bit arrays (first bit = highest order).
hrcc::Bits naive_mod(const hrcc::Bits& value, const hrcc::Bits& divisor);

}  // namespace oracle
