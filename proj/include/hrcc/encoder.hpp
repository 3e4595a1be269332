#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hrcc/bits.hpp"
#include "hrcc/config.hpp"

namespace hrcc {

struct EncodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TerminationTable;  // trellis.hpp

// Systematic feedback encoder realized from the parity check. The state is
// the v partial sums of the observer canonical form; zero at rest. Wire order
// per step: parity bit (stream 0) first, systematic streams 1..n-1 after,
// which is also the dual-trellis stage order.
class ConvEncoder {
 public:
  explicit ConvEncoder(const ParityCheck& H);  // throws EncodeError if h^(0) has constant term 0

  int n() const { return n_; }
  int v() const { return v_; }
  int num_states() const { return 1 << v_; }
  const ParityCheck& parity_check() const { return H_; }

  // inputs: n-1 bits (inputs[0] feeds stream 1); outputs: n bits, wire order.
  std::uint32_t step(std::uint32_t state, const std::uint8_t* inputs, std::uint8_t* outputs) const;
  std::uint32_t step_state(std::uint32_t state, const std::uint8_t* inputs) const;

  // State update is linear: next = A state ^ B inputs (GF(2), column-major).
  const std::vector<std::uint64_t>& state_update_cols() const { return a_cols_; }
  const std::vector<std::uint64_t>& input_update_cols() const { return b_cols_; }

 private:
  ParityCheck H_;
  int n_, v_;
  std::uint32_t state_mask_;
  std::vector<std::uint32_t> taps_;  // per stream, bit k = coeff of x^k
  std::vector<std::uint64_t> a_cols_, b_cols_;
};

struct TbEncoding {
  Bits codeword;
  std::uint32_t initial_state = 0;
};

// CRC-append then encode from the zero state, then drive the encoder back to
// zero with the termination table's input pattern. Output length is the
// blocklength N of the configuration.
Bits zt_encode(const Bits& data, const CodeConfig& cfg, const ConvEncoder& enc,
               const TerminationTable& term);
Bits zt_encode(const Bits& data, const CodeConfig& cfg);

// Tail-biting encode: finds the initial state whose final state equals it.
// The default path solves the affine relation final = A^S initial ^ f(data);
// the exhaustive variant tries every initial state and is the reference
// implementation. Both return the smallest qualifying initial state and throw
// EncodeError when none exists.
TbEncoding tb_encode(const Bits& data, const CodeConfig& cfg, const ConvEncoder& enc);
TbEncoding tb_encode(const Bits& data, const CodeConfig& cfg);
TbEncoding tb_encode_exhaustive(const Bits& data, const CodeConfig& cfg, const ConvEncoder& enc);

// Raw block encode helpers (no CRC): payload has (n-1)*steps bits.
Bits encode_payload(const ConvEncoder& enc, const Bits& payload, std::uint32_t initial_state,
                    std::uint32_t* final_state);

}  // namespace hrcc
