#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrcc/bits.hpp"
#include "hrcc/config.hpp"

namespace hrcc {

// Irreducible error event: a trellis segment that starts and ends at the same
// primal state and avoids every state in {0..sigma} in between. Building
// block for all low-weight codewords.
struct ErrorEvent {
  int sigma = 0;
  int len = 0;     // primal steps
  int weight = 0;  // output Hamming weight
  Bits inputs;     // (n-1)*len bits
  Bits outputs;    // n*len bits
};

// All zero-state events with output weight < d_tilde and length <= max_len.
std::vector<ErrorEvent> collect_iee_zt(const ParityCheck& H, int d_tilde, int max_len);
// Events at every state sigma per the nested avoidance rule.
std::vector<ErrorEvent> collect_iee_tb(const ParityCheck& H, int d_tilde, int max_len);

struct PathRecord {
  Bits inputs;  // (n-1)*steps bits
  int weight = 0;
};

using PathEmit = std::function<void(const Bits& inputs, int weight)>;

// Streams every zero-to-zero path of exactly `steps` primal steps with output
// weight < d_tilde (events placed between zero runs; the all-zero path is not
// emitted). Termination-region inputs are free, matching the raw trellis.
void enumerate_zt_paths(const std::vector<ErrorEvent>& events, int n, int steps, int d_tilde,
                        const PathEmit& emit);
// Streams every tail-biting path of exactly `steps` primal steps with output
// weight < d_tilde, each exactly once (event concatenation at the path's
// minimal state plus its distinct circular step-shifts).
void enumerate_tb_paths(const std::vector<ErrorEvent>& events, int n, int steps, int d_tilde,
                        const PathEmit& emit);

std::vector<PathRecord> reconstruct_zt_paths(const std::vector<ErrorEvent>& events, int n,
                                             int steps, int d_tilde);
std::vector<PathRecord> reconstruct_tb_paths(const std::vector<ErrorEvent>& events, int n,
                                             int steps, int d_tilde);

// Undetected-codeword counts by output weight, up to (excluding) d_tilde.
struct DistanceSpectrum {
  int d_tilde = 0;
  std::map<int, std::uint64_t> counts;
  int min_distance() const { return counts.empty() ? d_tilde : counts.begin()->first; }
};

// Thrown when the weight threshold cannot separate/populate the candidates.
struct CrcSearchInsufficient : std::runtime_error {
  explicit CrcSearchInsufficient(int suggested)
      : std::runtime_error("weight threshold too small; retry with d_tilde >= " +
                           std::to_string(suggested)),
        suggested_d_tilde(suggested) {}
  int suggested_d_tilde;
};

struct CrcSearchOutcome {
  BinaryPolynomial winner;
  DistanceSpectrum spectrum;                 // winner's spectrum
  std::vector<BinaryPolynomial> co_winners;  // all candidates tied before the hex tie-break
};

// Picks the degree-m candidate (monic, constant term 1) maximizing the
// minimum distance of the undetected set: paths whose first `prefix_bits`
// input bits form a polynomial divisible by the candidate. Ties compare
// spectra lexicographically; a residual tie reports co-winners and returns
// the numerically smallest. Paths with an all-zero prefix carry no data error
// and are ignored. Throws CrcSearchInsufficient when some candidate has no
// undetected path below d_tilde.
CrcSearchOutcome search_dso_crc(const std::vector<PathRecord>& paths, int m, int prefix_bits,
                                int d_tilde);

struct DsoDesign {
  BinaryPolynomial crc;
  DistanceSpectrum spectrum;
  std::vector<BinaryPolynomial> co_winners;
  int d_tilde_used = 0;
  double elapsed_seconds = 0.0;
};

struct DsoOptions {
  int d_tilde_override = 0;  // 0 = automatic schedule
  int max_len_override = 0;  // 0 = blocklength steps
};

// Full design driver: collects events, reconstructs paths and searches, with
// an automatic weight-threshold schedule (start at the code's free distance
// plus 2m, grow geometrically until every candidate is populated and the
// winner is determined).
DsoDesign design_dso_crc(const ParityCheck& H, int K, int m, TermMode mode,
                         const DsoOptions& opts = {});

}  // namespace hrcc
