#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrcc/bits.hpp"
#include "hrcc/config.hpp"
#include "hrcc/encoder.hpp"

namespace hrcc {

struct TrellisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Largest stream index whose polynomial has constant term 1; the dual-trellis
// stage at that index has a single forced branch per state. Throws when no
// stream qualifies (the dual trellis is undefined).
int compute_lambda(const ParityCheck& H);

// Dual trellis of the parity check: n stages per primal step, (v+1)-bit
// states, at most two branches per state. Stored as one repeating period of n
// stage-transition tables; stage t of the length-N trellis uses table t mod n.
// States at primal-step boundaries (t mod n == 0) have the top bit clear, so
// boundary states are exactly the ids 0..2^v-1.
class DualTrellis {
 public:
  DualTrellis(const ParityCheck& H, int length_stages);

  int n() const { return n_; }
  int v() const { return v_; }
  int lambda() const { return lambda_; }
  int length() const { return length_; }                 // N, dual stages
  int state_count() const { return 1 << (v_ + 1); }
  int boundary_count() const { return 1 << v_; }

  bool state_valid(int stage_pos, int state) const {
    return valid_[static_cast<std::size_t>(stage_pos)][static_cast<std::size_t>(state)] != 0;
  }
  // Successor of `state` at stage position `pos` via output bit y, -1 if the
  // branch does not exist.
  int succ(int pos, int state, int y) const {
    return succ_[static_cast<std::size_t>(pos)][(static_cast<std::size_t>(state) << 1) | static_cast<unsigned>(y)];
  }

  struct InBranch {
    std::int16_t pred;
    std::int8_t label;
  };
  // Incoming branches of `state` as seen after the transition out of stage
  // position `pos` (i.e. `state` sits at position (pos+1) mod n).
  const InBranch* incoming(int pos, int state, int* count) const {
    const auto& e = in_[static_cast<std::size_t>(pos)][static_cast<std::size_t>(state)];
    *count = e.count;
    return e.br.data();
  }

  // Walks `count` stages from `state` (at stage position start_pos) along the
  // given output labels; returns the final state or -1 if a branch is absent.
  int walk(int state, const std::uint8_t* labels, int count, int start_pos = 0) const;

  bool has_root_node() const { return has_root_; }
  int root_in_degree() const { return has_root_ ? boundary_count() : 0; }

  friend DualTrellis augment_root_node(DualTrellis t);

 private:
  struct InList {
    std::array<InBranch, 2> br;
    std::uint8_t count = 0;
  };
  int n_, v_, lambda_, length_;
  bool has_root_ = false;
  std::vector<std::vector<std::uint8_t>> valid_;  // [pos][state]
  std::vector<std::vector<std::int16_t>> succ_;   // [pos][state*2+y]
  std::vector<std::vector<InList>> in_;           // [pos][target state]
};

DualTrellis build_dual_trellis(const ParityCheck& H, int length_stages);

// Appends the terminal root node used by tail-biting list decoding: a single
// node reachable from every valid final boundary state through a zero-metric
// branch, so traceback starts from one place. Purely a flag on the structure;
// decoding realizes the zero-weight branches.
DualTrellis augment_root_node(DualTrellis t);

// Input/output patterns driving the encoder from each state to state zero in
// exactly ceil(v/(n-1)) primal steps. Built by solving the linear reachability
// system, which makes the pattern linear in the state (state 0 gets the
// all-zero tail). Throws TrellisError when some state cannot reach zero
// within the step budget.
struct TerminationTable {
  int steps = 0;
  std::vector<Bits> inputs;   // per state, (n-1)*steps bits
  std::vector<Bits> outputs;  // per state, n*steps bits
};
TerminationTable build_termination_table(const ConvEncoder& enc);

// One pinned trellis per boundary state: trellis i admits exactly the paths
// that start and end at boundary state i. The period structure is shared; the
// pin is enforced at the boundary stages during the forward pass and
// traceback.
struct MultiTrellisForest {
  DualTrellis trellis;
  std::vector<int> start_states;
};
MultiTrellisForest build_multi_trellis_forest(const ParityCheck& H, int length_stages);

// Boundary dual state reached from dual state 0 by any encoder path ending in
// encoder state sigma. Verified against every single-step transition and for
// bijectivity; throws TrellisError if the correspondence is inconsistent.
std::vector<int> boundary_state_of_encoder_state(const ConvEncoder& enc, const DualTrellis& t);

// One period of the trellis in DOT format, states labeled by bit vectors,
// branches labeled output-bit/weight.
std::string trellis_to_dot(const DualTrellis& t);

}  // namespace hrcc
