#include "hrcc/decoder.hpp"

#include <algorithm>
#include <cmath>

namespace hrcc {

void viterbi_forward(const DualTrellis& t, std::span<const double> received,
                     std::span<const double> initial_boundary_metrics, double amplitude,
                     int stages, MetricTable& out) {
  if (stages < 0) stages = t.length();
  if (static_cast<int>(received.size()) < stages)
    throw DecodeError("viterbi_forward: received vector shorter than the stage count");
  if (static_cast<int>(initial_boundary_metrics.size()) != t.boundary_count())
    throw DecodeError("viterbi_forward: need one initial metric per boundary state");
  const int S = t.state_count();
  const double inf = std::numeric_limits<double>::infinity();

  out.stages = stages;
  out.S = S;
  out.cum.assign(static_cast<std::size_t>(stages + 1) * S, inf);
  out.pred.assign(static_cast<std::size_t>(stages) * S, -1);
  out.label.assign(static_cast<std::size_t>(stages) * S, 0);

  for (int s = 0; s < t.boundary_count(); ++s) out.cum[static_cast<std::size_t>(s)] = initial_boundary_metrics[static_cast<std::size_t>(s)];

  for (int st = 0; st < stages; ++st) {
    const int pos = st % t.n();
    const int npos = (st + 1) % t.n();
    const double bm0 = branch_metric(received[static_cast<std::size_t>(st)], 0, amplitude);
    const double bm1 = branch_metric(received[static_cast<std::size_t>(st)], 1, amplitude);
    const double* prev = out.cum.data() + static_cast<std::size_t>(st) * S;
    double* next = out.cum.data() + static_cast<std::size_t>(st + 1) * S;
    std::int16_t* pr = out.pred.data() + static_cast<std::size_t>(st) * S;
    std::int8_t* lb = out.label.data() + static_cast<std::size_t>(st) * S;
    for (int s = 0; s < S; ++s) {
      if (!t.state_valid(npos, s)) continue;
      int count = 0;
      const auto* in = t.incoming(pos, s, &count);
      double best = inf;
      std::int16_t bp = -1;
      std::int8_t bl = 0;
      for (int i = 0; i < count; ++i) {
        const double c = prev[in[i].pred];
        if (c == inf) continue;
        const double m = c + (in[i].label ? bm1 : bm0);
        if (m < best) {
          best = m;
          bp = in[i].pred;
          bl = in[i].label;
        }
      }
      next[s] = best;
      pr[s] = bp;
      lb[s] = bl;
    }
  }
}

MetricTable viterbi_forward(const DualTrellis& t, std::span<const double> received,
                            std::span<const double> initial_boundary_metrics, double amplitude,
                            int stages) {
  MetricTable out;
  viterbi_forward(t, received, initial_boundary_metrics, amplitude, stages, out);
  return out;
}

SlvdEnumerator::SlvdEnumerator(const DualTrellis& t, std::vector<const MetricTable*> tables,
                               std::span<const double> bm_pairs, std::vector<Terminal> terminals)
    : t_(t), tables_(std::move(tables)), bm_(bm_pairs) {
  std::erase_if(terminals, [](const Terminal& tm) {
    return tm.score == std::numeric_limits<double>::infinity();
  });
  std::sort(terminals.begin(), terminals.end(), [](const Terminal& a, const Terminal& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.table != b.table) return a.table < b.table;
    return a.state < b.state;
  });
  terminals_ = std::move(terminals);
  if (!terminals_.empty()) {
    // The rank-1 seed is the obligatory first path, not a detour opportunity.
    nodes_.push_back(Node{terminals_[0].score, 0, tables_[static_cast<std::size_t>(terminals_[0].table)]->stages, 0, -1, 0, kChain});
    heap_.push_back(HeapEntry{terminals_[0].score, seq_++, 0});
  }
}

void SlvdEnumerator::push_node(Node n) {
  nodes_.push_back(n);
  heap_.push_back(HeapEntry{n.metric, seq_++, static_cast<std::uint32_t>(nodes_.size() - 1)});
  std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  ++insertions_;
}

void SlvdEnumerator::reconstruct(std::uint32_t idx, TrellisPath& out) const {
  std::vector<std::uint32_t> detours;
  std::uint32_t cur = idx;
  while (nodes_[cur].kind == kDetour) {
    detours.push_back(cur);
    cur = nodes_[cur].parent;
  }
  const Terminal& term = terminals_[nodes_[cur].chain_rank];
  const MetricTable& tbl = *tables_[static_cast<std::size_t>(term.table)];
  const int stages = tbl.stages;

  out.labels.assign(static_cast<std::size_t>(stages), 0);
  out.states.assign(static_cast<std::size_t>(stages) + 1, 0);
  int t = stages;
  int s = term.state;
  out.states[static_cast<std::size_t>(t)] = static_cast<std::int16_t>(s);
  auto follow_survivor = [&]() {
    const std::int16_t p = tbl.pred_at(t, s);
    if (p < 0) throw DecodeError("slvd: survivor missing during traceback");
    out.labels[static_cast<std::size_t>(t - 1)] = static_cast<std::uint8_t>(tbl.label_at(t, s));
    out.states[static_cast<std::size_t>(t - 1)] = p;
    s = p;
    --t;
  };
  for (auto it = detours.rbegin(); it != detours.rend(); ++it) {  // decreasing stage
    const Node& d = nodes_[*it];
    while (t > d.stage) follow_survivor();
    out.labels[static_cast<std::size_t>(t - 1)] = static_cast<std::uint8_t>(d.alt_label);
    out.states[static_cast<std::size_t>(t - 1)] = d.alt_pred;
    s = d.alt_pred;
    --t;
  }
  while (t > 0) follow_survivor();

  out.start_state = out.states[0];
  out.end_state = term.state;
  out.metric = nodes_[idx].metric;
}

void SlvdEnumerator::push_children(std::uint32_t idx, const TrellisPath& path) {
  const Node node = nodes_[idx];
  const Terminal& term = terminals_[node.chain_rank];
  const MetricTable& tbl = *tables_[static_cast<std::size_t>(term.table)];
  if (node.kind == kChain) {
    const std::uint32_t r = node.chain_rank;
    if (r + 1 < terminals_.size()) {
      const Terminal& sib = terminals_[r + 1];
      push_node(Node{sib.score, 0, tables_[static_cast<std::size_t>(sib.table)]->stages, r + 1, -1, 0, kChain});
    }
  }
  const int hi = (node.kind == kChain) ? tbl.stages : node.stage - 1;
  const double inf = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= hi; ++t) {
    const int s = path.states[static_cast<std::size_t>(t)];
    int count = 0;
    const auto* in = t_.incoming((t - 1) % t_.n(), s, &count);
    if (count < 2) continue;
    for (int i = 0; i < count; ++i) {
      if (in[i].pred == path.states[static_cast<std::size_t>(t - 1)] &&
          in[i].label == static_cast<std::int8_t>(path.labels[static_cast<std::size_t>(t - 1)]))
        continue;  // the branch the path already uses
      const double c = tbl.cum_at(t - 1, in[i].pred);
      if (c == inf) continue;
      const double bm = bm_[static_cast<std::size_t>(2 * (t - 1)) + static_cast<std::size_t>(in[i].label)];
      const double delta = c + bm - tbl.cum_at(t, s);
      push_node(Node{node.metric + delta, idx, t, node.chain_rank, in[i].pred,
                     in[i].label, kDetour});
    }
  }
}

std::optional<TrellisPath> SlvdEnumerator::next() {
  if (heap_.empty()) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
  const HeapEntry top = heap_.back();
  heap_.pop_back();
  TrellisPath path;
  reconstruct(top.node, path);
  push_children(top.node, path);
  ++pops_;
  return path;
}

ListDecoder::ListDecoder(const CodeConfig& cfg)
    : cfg_(cfg),
      enc_(cfg.H),
      trellis_(cfg.mode == TermMode::tb
                   ? augment_root_node(DualTrellis(cfg.H, cfg.block_bits()))
                   : DualTrellis(cfg.H, cfg.block_bits())) {
  cfg_.validate();
  if (cfg_.mode == TermMode::zt) {
    term_ = build_termination_table(enc_);
    dual_of_enc_ = boundary_state_of_encoder_state(enc_, trellis_);
    enc_of_dual_.assign(dual_of_enc_.size(), -1);
    for (std::size_t e = 0; e < dual_of_enc_.size(); ++e)
      enc_of_dual_[static_cast<std::size_t>(dual_of_enc_[e])] = static_cast<int>(e);
  }
}

std::uint64_t ListDecoder::effective_cap(const DecoderOptions& opts) const {
  if (opts.list_cap) return opts.list_cap;
  const int bits = cfg_.K + cfg_.m;
  if (bits >= 63) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << bits;
}

void ListDecoder::compute_branch_metrics(std::span<const double> received, double amplitude) {
  const int N = cfg_.block_bits();
  if (static_cast<int>(received.size()) != N)
    throw DecodeError("decode: received vector length != blocklength");
  bm_.resize(static_cast<std::size_t>(2 * N));
  for (int t = 0; t < N; ++t) {
    bm_[static_cast<std::size_t>(2 * t)] = branch_metric(received[static_cast<std::size_t>(t)], 0, amplitude);
    bm_[static_cast<std::size_t>(2 * t) + 1] = branch_metric(received[static_cast<std::size_t>(t)], 1, amplitude);
  }
}

Bits ListDecoder::path_inputs(const TrellisPath& path) const {
  Bits in;
  in.reserve(static_cast<std::size_t>(cfg_.K + cfg_.m));
  const int data_stages = cfg_.data_stages();
  for (int t = 0; t < data_stages; ++t)
    if (t % cfg_.n() != 0) in.push_back(path.labels[static_cast<std::size_t>(t)]);
  return in;
}

DecodeResult ListDecoder::run_list(SlvdEnumerator& en, bool require_tb, std::uint64_t cap,
                                   std::uint64_t rank_offset) {
  DecodeResult res;
  while (en.pops() + rank_offset < cap) {
    auto path = en.next();
    if (!path) break;
    const bool tb_ok = path->start_state == path->end_state;
    if (require_tb && !tb_ok) continue;
    const Bits inputs = path_inputs(*path);
    if (!crc_check(inputs, cfg_.crc)) continue;
    res.status = DecodeResult::Status::found;
    res.data.assign(inputs.begin(), inputs.begin() + cfg_.K);
    res.list_rank = en.pops() + rank_offset;
    res.insertions = en.insertions();
    res.final_metric = path->metric;
    res.tb_satisfied = require_tb ? tb_ok : false;
    return res;
  }
  res.status = DecodeResult::Status::list_exhausted;
  res.list_rank = en.pops() + rank_offset;
  res.insertions = en.insertions();
  return res;
}

DecodeResult ListDecoder::decode(DecoderVariant variant, std::span<const double> received,
                                 double amplitude, const DecoderOptions& opts) {
  switch (variant) {
    case DecoderVariant::zt: return decode_zt(received, amplitude, opts);
    case DecoderVariant::tb_single: return decode_tb_single(received, amplitude, opts);
    case DecoderVariant::tb_multi: return decode_tb_multi(received, amplitude, opts);
    case DecoderVariant::tb_wava: return decode_tb_wava(received, amplitude, opts);
  }
  throw DecodeError("decode: unknown variant");
}

DecodeResult ListDecoder::decode_zt(std::span<const double> received, double amplitude,
                                    const DecoderOptions& opts) {
  if (cfg_.mode != TermMode::zt) throw DecodeError("decode_zt: config mode is not zt");
  compute_branch_metrics(received, amplitude);
  const int data_stages = cfg_.data_stages();
  const int B = trellis_.boundary_count();
  std::vector<double> init(static_cast<std::size_t>(B), std::numeric_limits<double>::infinity());
  init[0] = 0.0;
  tables_.resize(1);
  viterbi_forward(trellis_, received, init, amplitude, data_stages, tables_[0]);

  // Each end state owes the metric of its canonical termination tail; SLVD
  // then enumerates exactly the codebook.
  std::vector<SlvdEnumerator::Terminal> terminals;
  terminals.reserve(static_cast<std::size_t>(B));
  for (int d = 0; d < B; ++d) {
    const double c = tables_[0].cum_at(data_stages, d);
    if (c == std::numeric_limits<double>::infinity()) continue;
    const Bits& tail = term_.outputs[static_cast<std::size_t>(enc_of_dual_[static_cast<std::size_t>(d)])];
    double tail_metric = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i)
      tail_metric += bm_[2 * (static_cast<std::size_t>(data_stages) + i) + tail[i]];
    terminals.push_back({0, d, c + tail_metric});
  }
  SlvdEnumerator en(trellis_, {&tables_[0]},
                    std::span<const double>(bm_.data(), static_cast<std::size_t>(2 * data_stages)),
                    std::move(terminals));
  return run_list(en, /*require_tb=*/false, effective_cap(opts), 0);
}

DecodeResult ListDecoder::decode_tb_single(std::span<const double> received, double amplitude,
                                           const DecoderOptions& opts) {
  if (cfg_.mode != TermMode::tb) throw DecodeError("decode_tb_single: config mode is not tb");
  if (!trellis_.has_root_node()) throw DecodeError("decode_tb_single: trellis lacks the root node");
  compute_branch_metrics(received, amplitude);
  const int B = trellis_.boundary_count();
  std::vector<double> init(static_cast<std::size_t>(B), 0.0);
  tables_.resize(1);
  viterbi_forward(trellis_, received, init, amplitude, trellis_.length(), tables_[0]);

  std::vector<SlvdEnumerator::Terminal> terminals;
  terminals.reserve(static_cast<std::size_t>(B));
  for (int d = 0; d < B; ++d) terminals.push_back({0, d, tables_[0].cum_at(trellis_.length(), d)});
  SlvdEnumerator en(trellis_, {&tables_[0]}, bm_, std::move(terminals));
  return run_list(en, /*require_tb=*/true, effective_cap(opts), 0);
}

DecodeResult ListDecoder::decode_tb_multi(std::span<const double> received, double amplitude,
                                          const DecoderOptions& opts) {
  if (cfg_.mode != TermMode::tb) throw DecodeError("decode_tb_multi: config mode is not tb");
  compute_branch_metrics(received, amplitude);
  const int B = trellis_.boundary_count();
  tables_.resize(static_cast<std::size_t>(B));
  std::vector<const MetricTable*> table_ptrs(static_cast<std::size_t>(B));
  std::vector<SlvdEnumerator::Terminal> terminals;
  terminals.reserve(static_cast<std::size_t>(B));
  std::vector<double> init(static_cast<std::size_t>(B));
  for (int i = 0; i < B; ++i) {
    std::fill(init.begin(), init.end(), std::numeric_limits<double>::infinity());
    init[static_cast<std::size_t>(i)] = 0.0;
    viterbi_forward(trellis_, received, init, amplitude, trellis_.length(), tables_[static_cast<std::size_t>(i)]);
    table_ptrs[static_cast<std::size_t>(i)] = &tables_[static_cast<std::size_t>(i)];
    terminals.push_back({i, i, tables_[static_cast<std::size_t>(i)].cum_at(trellis_.length(), i)});
  }
  SlvdEnumerator en(trellis_, std::move(table_ptrs), bm_, std::move(terminals));
  DecodeResult res = run_list(en, /*require_tb=*/true, effective_cap(opts), 0);
  return res;
}

DecodeResult ListDecoder::decode_tb_wava(std::span<const double> received, double amplitude,
                                         const DecoderOptions& opts) {
  if (cfg_.mode != TermMode::tb) throw DecodeError("decode_tb_wava: config mode is not tb");
  if (!trellis_.has_root_node()) throw DecodeError("decode_tb_wava: trellis lacks the root node");
  compute_branch_metrics(received, amplitude);
  const int B = trellis_.boundary_count();
  const int N = trellis_.length();
  std::vector<double> init(static_cast<std::size_t>(B), 0.0);
  tables_.resize(1);
  viterbi_forward(trellis_, received, init, amplitude, N, tables_[0]);

  // First trellis iteration: accept the optimal traceback when it is already
  // tail-biting and CRC-clean.
  {
    int best_state = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < B; ++d) {
      const double c = tables_[0].cum_at(N, d);
      if (c < best) {
        best = c;
        best_state = d;
      }
    }
    if (best_state < 0) throw DecodeError("decode_tb_wava: no reachable terminal state");
    TrellisPath path;
    path.labels.assign(static_cast<std::size_t>(N), 0);
    path.states.assign(static_cast<std::size_t>(N) + 1, 0);
    int s = best_state;
    path.states[static_cast<std::size_t>(N)] = static_cast<std::int16_t>(s);
    for (int t = N; t > 0; --t) {
      path.labels[static_cast<std::size_t>(t - 1)] = static_cast<std::uint8_t>(tables_[0].label_at(t, s));
      s = tables_[0].pred_at(t, s);
      path.states[static_cast<std::size_t>(t - 1)] = static_cast<std::int16_t>(s);
    }
    const Bits inputs = path_inputs(path);
    if (path.states[0] == best_state && crc_check(inputs, cfg_.crc)) {
      DecodeResult res;
      res.status = DecodeResult::Status::found;
      res.data.assign(inputs.begin(), inputs.begin() + cfg_.K);
      res.list_rank = 1;
      res.insertions = 0;
      res.final_metric = best;
      res.tb_satisfied = true;
      res.wava_terminated_early = true;
      return res;
    }
  }

  // Second iteration wraps the final metrics into the initial metrics; list
  // decoding then runs on the wrapped table.
  for (int d = 0; d < B; ++d) init[static_cast<std::size_t>(d)] = tables_[0].cum_at(N, d);
  tables_.resize(2);
  viterbi_forward(trellis_, received, init, amplitude, N, tables_[1]);
  std::vector<SlvdEnumerator::Terminal> terminals;
  terminals.reserve(static_cast<std::size_t>(B));
  for (int d = 0; d < B; ++d) terminals.push_back({0, d, tables_[1].cum_at(N, d)});
  std::vector<const MetricTable*> ptrs{&tables_[1]};
  SlvdEnumerator en(trellis_, std::move(ptrs), bm_, std::move(terminals));
  DecodeResult res = run_list(en, /*require_tb=*/true, effective_cap(opts), 0);
  res.wava_terminated_early = false;
  return res;
}

}  // namespace hrcc
