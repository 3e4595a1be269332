#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hrcc/bits.hpp"
#include "hrcc/config.hpp"
#include "hrcc/encoder.hpp"
#include "hrcc/trellis.hpp"

namespace hrcc {

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Squared Euclidean distance between the received value and the BPSK point of
// output bit y (bit 0 maps to +amplitude).
inline double branch_metric(double received, int y, double amplitude) {
  const double d = received - amplitude * (1.0 - 2.0 * y);
  return d * d;
}

// Forward add-compare-select results over a span of dual-trellis stages.
// Layer t holds the cumulative metric of the best path from a start state
// into each state at stage t; survivor branches support traceback. Ties keep
// the lower predecessor state, then output bit 0.
struct MetricTable {
  int stages = 0;
  int S = 0;
  std::vector<double> cum;          // (stages+1) * S
  std::vector<std::int16_t> pred;   // stages * S, -1 when unreachable
  std::vector<std::int8_t> label;   // stages * S

  double cum_at(int t, int s) const { return cum[static_cast<std::size_t>(t) * S + s]; }
  std::int16_t pred_at(int t, int s) const {  // survivor into (t, s), t >= 1
    return pred[static_cast<std::size_t>(t - 1) * S + s];
  }
  std::int8_t label_at(int t, int s) const { return label[static_cast<std::size_t>(t - 1) * S + s]; }
};

// initial_boundary_metrics has one entry per boundary state (2^v); pass zeros
// for an unconstrained start. `stages` may be shorter than the trellis length
// (the zero-termination decoder stops at the data region).
void viterbi_forward(const DualTrellis& t, std::span<const double> received,
                     std::span<const double> initial_boundary_metrics, double amplitude,
                     int stages, MetricTable& out);
MetricTable viterbi_forward(const DualTrellis& t, std::span<const double> received,
                            std::span<const double> initial_boundary_metrics, double amplitude,
                            int stages = -1);

struct TrellisPath {
  Bits labels;                      // output bits, one per stage
  std::vector<std::int16_t> states; // stages+1 states
  int start_state = 0;
  int end_state = 0;                // terminal boundary state
  double metric = 0.0;              // includes terminal offset and initial metric
};

// Serial list enumeration of trellis paths in nondecreasing metric order
// (tree-trellis bookkeeping on a min-heap). Terminal choices are unrolled
// lazily as a sorted sibling chain, so each popped path inserts at most one
// sibling plus its detour opportunities. Insertions exclude the mandatory
// rank-1 seed.
class SlvdEnumerator {
 public:
  struct Terminal {
    int table = 0;  // index into `tables`
    int state = 0;  // boundary state at the last stage
    double score = 0.0;
  };

  SlvdEnumerator(const DualTrellis& t, std::vector<const MetricTable*> tables,
                 std::span<const double> bm_pairs,  // 2 entries per stage: y=0, y=1
                 std::vector<Terminal> terminals);

  std::optional<TrellisPath> next();
  std::uint64_t insertions() const { return insertions_; }
  std::uint64_t pops() const { return pops_; }

 private:
  static constexpr std::uint8_t kChain = 0;
  static constexpr std::uint8_t kDetour = 1;
  struct Node {
    double metric;
    std::uint32_t parent;
    std::int32_t stage;       // detour: stage whose incoming branch is replaced
    std::uint32_t chain_rank; // index into terminals_ (inherited by detours)
    std::int16_t alt_pred;
    std::int8_t alt_label;
    std::uint8_t kind;
  };
  struct HeapEntry {
    double metric;
    std::uint64_t seq;
    std::uint32_t node;
    bool operator>(const HeapEntry& o) const {
      if (metric != o.metric) return metric > o.metric;
      return seq > o.seq;
    }
  };

  void push_node(Node n);
  void reconstruct(std::uint32_t idx, TrellisPath& out) const;
  void push_children(std::uint32_t idx, const TrellisPath& path);

  const DualTrellis& t_;
  std::vector<const MetricTable*> tables_;
  std::span<const double> bm_;
  std::vector<Terminal> terminals_;
  std::vector<Node> nodes_;
  std::vector<HeapEntry> heap_;
  std::uint64_t seq_ = 0;
  std::uint64_t insertions_ = 0;
  std::uint64_t pops_ = 0;
};

struct DecodeResult {
  enum class Status { found, list_exhausted };
  Bits data;  // K bits; empty when the list was exhausted
  Status status = Status::list_exhausted;
  std::uint64_t list_rank = 0;
  std::uint64_t insertions = 0;
  double final_metric = std::numeric_limits<double>::infinity();
  bool tb_satisfied = false;
  bool wava_terminated_early = false;
};

struct DecoderOptions {
  std::uint64_t list_cap = 0;  // 0 = logical maximum 2^(K+m)
};

// Per-code decoder with reusable scratch buffers. Not thread-safe; use one
// instance per worker.
class ListDecoder {
 public:
  explicit ListDecoder(const CodeConfig& cfg);

  const CodeConfig& config() const { return cfg_; }
  const DualTrellis& trellis() const { return trellis_; }

  DecodeResult decode(DecoderVariant variant, std::span<const double> received, double amplitude,
                      const DecoderOptions& opts = {});
  DecodeResult decode_zt(std::span<const double> received, double amplitude,
                         const DecoderOptions& opts = {});
  DecodeResult decode_tb_single(std::span<const double> received, double amplitude,
                                const DecoderOptions& opts = {});
  DecodeResult decode_tb_multi(std::span<const double> received, double amplitude,
                               const DecoderOptions& opts = {});
  DecodeResult decode_tb_wava(std::span<const double> received, double amplitude,
                              const DecoderOptions& opts = {});

  // Input bits carried by a path (systematic stage labels, data region only).
  Bits path_inputs(const TrellisPath& path) const;

 private:
  std::uint64_t effective_cap(const DecoderOptions& opts) const;
  void compute_branch_metrics(std::span<const double> received, double amplitude);
  DecodeResult run_list(SlvdEnumerator& en, bool require_tb, std::uint64_t cap,
                        std::uint64_t rank_offset);

  CodeConfig cfg_;
  ConvEncoder enc_;
  DualTrellis trellis_;
  TerminationTable term_;          // zt mode
  std::vector<int> dual_of_enc_;   // zt: encoder state -> boundary dual state
  std::vector<int> enc_of_dual_;   // inverse
  std::vector<double> bm_;         // scratch: 2 per stage
  std::vector<MetricTable> tables_;
};

}  // namespace hrcc
