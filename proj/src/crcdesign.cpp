#include "hrcc/crcdesign.hpp"

#include <algorithm>
#include <chrono>

#include "hrcc/encoder.hpp"

namespace hrcc {

namespace {

int output_weight(const std::uint8_t* out, int n) {
  int w = 0;
  for (int i = 0; i < n; ++i) w += out[i];
  return w;
}

struct EventCollector {
  const ConvEncoder& enc;
  int d_tilde;
  int max_len;
  int sigma;
  std::vector<ErrorEvent>* out;
  Bits in_buf, out_buf;

  void run() {
    in_buf.assign(static_cast<std::size_t>((enc.n() - 1) * max_len), 0);
    out_buf.assign(static_cast<std::size_t>(enc.n() * max_len), 0);
    dfs(static_cast<std::uint32_t>(sigma), 0, 0);
  }

  void dfs(std::uint32_t state, int len, int weight) {
    if (len >= max_len) return;
    const int k = enc.n() - 1;
    std::uint8_t in[32], outs[32];
    for (unsigned u = 0; u < (1u << k); ++u) {
      for (int j = 0; j < k; ++j) in[j] = static_cast<std::uint8_t>((u >> j) & 1u);
      const std::uint32_t next = enc.step(state, in, outs);
      const int w2 = weight + output_weight(outs, enc.n());
      if (w2 >= d_tilde) continue;
      std::copy(in, in + k, in_buf.begin() + static_cast<std::ptrdiff_t>(len * k));
      std::copy(outs, outs + enc.n(), out_buf.begin() + static_cast<std::ptrdiff_t>(len * enc.n()));
      if (next == static_cast<std::uint32_t>(sigma)) {
        if (w2 == 0) {
          if (sigma == 0) continue;  // resting step, not an event
          throw std::runtime_error("IEE collection: zero-weight loop at a nonzero state");
        }
        ErrorEvent ev;
        ev.sigma = sigma;
        ev.len = len + 1;
        ev.weight = w2;
        ev.inputs.assign(in_buf.begin(), in_buf.begin() + static_cast<std::ptrdiff_t>((len + 1) * k));
        ev.outputs.assign(out_buf.begin(),
                          out_buf.begin() + static_cast<std::ptrdiff_t>((len + 1) * enc.n()));
        out->push_back(std::move(ev));
        continue;  // the event ends here; a revisit may not pass through sigma
      }
      if (next <= static_cast<std::uint32_t>(sigma)) continue;  // forbidden intermediate
      dfs(next, len + 1, w2);
    }
  }
};

void sort_events(std::vector<ErrorEvent>& evs) {
  std::sort(evs.begin(), evs.end(), [](const ErrorEvent& a, const ErrorEvent& b) {
    if (a.sigma != b.sigma) return a.sigma < b.sigma;
    if (a.len != b.len) return a.len < b.len;
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.inputs < b.inputs;
  });
}

}  // namespace

std::vector<ErrorEvent> collect_iee_zt(const ParityCheck& H, int d_tilde, int max_len) {
  if (d_tilde < 1) throw std::invalid_argument("collect_iee_zt: d_tilde must be >= 1");
  ConvEncoder enc(H);
  std::vector<ErrorEvent> out;
  EventCollector{enc, d_tilde, max_len, 0, &out}.run();
  sort_events(out);
  return out;
}

std::vector<ErrorEvent> collect_iee_tb(const ParityCheck& H, int d_tilde, int max_len) {
  if (d_tilde < 1) throw std::invalid_argument("collect_iee_tb: d_tilde must be >= 1");
  ConvEncoder enc(H);
  std::vector<ErrorEvent> out;
  for (int sigma = 0; sigma < enc.num_states(); ++sigma)
    EventCollector{enc, d_tilde, max_len, sigma, &out}.run();
  sort_events(out);
  return out;
}

namespace {

// Zero-terminated placement: events at state 0 separated by zero runs.
struct ZtEnumerator {
  const std::vector<const ErrorEvent*>& evs;
  int k;  // input bits per step
  int steps;
  int d_tilde;
  const PathEmit& emit;
  Bits buf;

  void run() {
    buf.assign(static_cast<std::size_t>(k * steps), 0);
    rec(0, 0, false);
  }

  void rec(int pos, int weight, bool used_any) {
    if (used_any) emit(buf, weight);  // remaining steps stay zero
    for (int gap = 0; pos + gap < steps; ++gap) {
      for (const ErrorEvent* e : evs) {
        if (weight + e->weight >= d_tilde) continue;
        const int at = pos + gap;
        if (at + e->len > steps) continue;
        std::copy(e->inputs.begin(), e->inputs.end(),
                  buf.begin() + static_cast<std::ptrdiff_t>(at * k));
        rec(at + e->len, weight + e->weight, true);
        std::fill(buf.begin() + static_cast<std::ptrdiff_t>(at * k),
                  buf.begin() + static_cast<std::ptrdiff_t>((at + e->len) * k), 0);
      }
    }
  }
};

// Tail-biting enumeration: compositions of events at the path's minimal
// boundary state (gaps only at state 0), kept only in their canonical
// junction rotation, then emitted with every distinct circular step-shift.
struct TbEnumerator {
  const std::vector<const ErrorEvent*>& evs;  // events at one sigma, indexable
  int k;
  int steps;
  int d_tilde;
  bool gaps_allowed;
  const PathEmit& emit;

  struct Unit {
    int event;
    int gap;
    bool operator==(const Unit&) const = default;
    auto operator<=>(const Unit&) const = default;
  };
  std::vector<Unit> units;
  Bits buf, rot;

  void run() {
    buf.assign(static_cast<std::size_t>(k * steps), 0);
    rot.assign(static_cast<std::size_t>(k * steps), 0);
    rec(0, 0);
  }

  void rec(int pos, int weight) {
    for (std::size_t ei = 0; ei < evs.size(); ++ei) {
      const ErrorEvent* e = evs[ei];
      if (weight + e->weight >= d_tilde) continue;
      if (pos + e->len > steps) continue;
      const int max_gap = gaps_allowed ? steps - pos - e->len : 0;
      for (int gap = 0; gap <= max_gap; ++gap) {
        units.push_back({static_cast<int>(ei), gap});
        const int end = pos + e->len + gap;
        if (end == steps) finalize(weight + e->weight);
        else rec(end, weight + e->weight);
        units.pop_back();
      }
    }
  }

  bool is_canonical_rotation() const {
    const std::size_t m = units.size();
    for (std::size_t r = 1; r < m; ++r) {
      for (std::size_t i = 0; i < m; ++i) {
        const Unit& a = units[i];
        const Unit& b = units[(i + r) % m];
        if (b < a) return false;  // a strictly smaller rotation exists
        if (a < b) break;
      }
    }
    return true;
  }

  void finalize(int weight) {
    if (!is_canonical_rotation()) return;
    std::fill(buf.begin(), buf.end(), 0);
    int pos = 0;
    for (const Unit& u : units) {
      const ErrorEvent* e = evs[static_cast<std::size_t>(u.event)];
      std::copy(e->inputs.begin(), e->inputs.end(),
                buf.begin() + static_cast<std::ptrdiff_t>(pos * k));
      pos += e->len + u.gap;
    }
    // Distinct circular shifts = minimal step period of the input string.
    int period = steps;
    for (int q = 1; q < steps; ++q) {
      if (steps % q != 0) continue;
      bool eq = true;
      const int shift = q * k;
      const int L = steps * k;
      for (int i = 0; i < L && eq; ++i) eq = (buf[static_cast<std::size_t>(i)] ==
                                             buf[static_cast<std::size_t>((i + shift) % L)]);
      if (eq) {
        period = q;
        break;
      }
    }
    emit(buf, weight);
    const int L = steps * k;
    for (int r = 1; r < period; ++r) {
      const int shift = r * k;
      for (int i = 0; i < L; ++i)
        rot[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>((i + shift) % L)];
      emit(rot, weight);
    }
  }
};

}  // namespace

void enumerate_zt_paths(const std::vector<ErrorEvent>& events, int n, int steps, int d_tilde,
                        const PathEmit& emit) {
  std::vector<const ErrorEvent*> evs;
  for (const auto& e : events)
    if (e.sigma == 0 && e.len <= steps && e.weight < d_tilde) evs.push_back(&e);
  ZtEnumerator{evs, n - 1, steps, d_tilde, emit}.run();
}

void enumerate_tb_paths(const std::vector<ErrorEvent>& events, int n, int steps, int d_tilde,
                        const PathEmit& emit) {
  int max_sigma = -1;
  for (const auto& e : events) max_sigma = std::max(max_sigma, e.sigma);
  for (int sigma = 0; sigma <= max_sigma; ++sigma) {
    std::vector<const ErrorEvent*> evs;
    for (const auto& e : events)
      if (e.sigma == sigma && e.len <= steps && e.weight < d_tilde) evs.push_back(&e);
    if (evs.empty()) continue;
    TbEnumerator{evs, n - 1, steps, d_tilde, sigma == 0, emit}.run();
  }
}

std::vector<PathRecord> reconstruct_zt_paths(const std::vector<ErrorEvent>& events, int n,
                                             int steps, int d_tilde) {
  std::vector<PathRecord> out;
  enumerate_zt_paths(events, n, steps, d_tilde,
                     [&](const Bits& b, int w) { out.push_back({b, w}); });
  return out;
}

std::vector<PathRecord> reconstruct_tb_paths(const std::vector<ErrorEvent>& events, int n,
                                             int steps, int d_tilde) {
  std::vector<PathRecord> out;
  enumerate_tb_paths(events, n, steps, d_tilde,
                     [&](const Bits& b, int w) { out.push_back({b, w}); });
  return out;
}

namespace {

// Byte-at-a-time remainder tables for one CRC candidate.
struct DivisibilityChecker {
  int m;
  std::uint32_t poly;             // bit m..0
  std::vector<std::uint16_t> hi;  // (r * x^8) mod p for r < 2^m
  std::array<std::uint16_t, 256> lo{};  // b mod p for byte b

  explicit DivisibilityChecker(std::uint32_t p, int deg) : m(deg), poly(p) {
    auto mod_small = [&](std::uint32_t val, int bits) {
      for (int b = bits - 1; b >= m; --b)
        if ((val >> b) & 1u) val ^= poly << (b - m);
      return static_cast<std::uint16_t>(val);
    };
    hi.resize(std::size_t{1} << m);
    for (std::uint32_t r = 0; r < (std::uint32_t{1} << m); ++r) hi[r] = mod_small(r << 8, m + 8);
    for (std::uint32_t b = 0; b < 256; ++b) lo[b] = mod_small(b, 8);
  }

  bool divides(const std::uint8_t* bytes, std::size_t count) const {
    std::uint16_t rem = 0;
    if (m >= 8) {
      for (std::size_t i = 0; i < count; ++i) rem = hi[rem] ^ bytes[i];
    } else {
      for (std::size_t i = 0; i < count; ++i) rem = lo[hi[rem] ^ bytes[i]];
    }
    return rem == 0;
  }
};

// Packs the first prefix_bits of a path into bytes (MSB first, zero padded;
// trailing zero padding multiplies by x^k and cannot mask divisibility since
// candidates have constant term 1). Returns false when the prefix is all-zero.
bool pack_prefix(const Bits& bits, int prefix_bits, std::vector<std::uint8_t>& bytes) {
  bool nonzero = false;
  std::fill(bytes.begin(), bytes.end(), 0);
  for (int i = 0; i < prefix_bits; ++i) {
    if (bits[static_cast<std::size_t>(i)]) {
      nonzero = true;
      bytes[static_cast<std::size_t>(i) / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
  }
  return nonzero;
}

struct CandidateSpectra {
  int m;
  int d_tilde;
  int prefix_bits;
  std::vector<DivisibilityChecker> checkers;
  std::vector<std::vector<std::uint64_t>> counts;  // [candidate][weight]
  std::vector<std::uint8_t> bytes;

  CandidateSpectra(int deg, int dt, int prefix) : m(deg), d_tilde(dt), prefix_bits(prefix) {
    const std::size_t num = std::size_t{1} << (m - 1);
    checkers.reserve(num);
    for (std::size_t i = 0; i < num; ++i)
      checkers.emplace_back(candidate_poly(static_cast<std::uint32_t>(i), m), m);
    counts.assign(num, std::vector<std::uint64_t>(static_cast<std::size_t>(dt), 0));
    bytes.assign(static_cast<std::size_t>(prefix + 7) / 8, 0);
  }

  static std::uint32_t candidate_poly(std::uint32_t inner, int m) {
    return (std::uint32_t{1} << m) | (inner << 1) | 1u;
  }

  void add(const Bits& inputs, int weight) {
    if (!pack_prefix(inputs, prefix_bits, bytes)) return;
    for (std::size_t c = 0; c < checkers.size(); ++c)
      if (checkers[c].divides(bytes.data(), bytes.size()))
        ++counts[c][static_cast<std::size_t>(weight)];
  }
};

// Lexicographic spectrum order: larger minimum distance first, then fewer
// codewords at each weight. 0 = tie.
int compare_spectra(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (a[d] != b[d]) return a[d] < b[d] ? -1 : 1;
  }
  return 0;
}

CrcSearchOutcome pick_winner(const CandidateSpectra& sp) {
  const std::size_t num = sp.checkers.size();
  for (std::size_t c = 0; c < num; ++c) {
    bool any = false;
    for (auto v : sp.counts[c]) any = any || v;
    if (!any) throw CrcSearchInsufficient(sp.d_tilde + std::max(2, sp.d_tilde / 2));
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < num; ++c)
    if (compare_spectra(sp.counts[c], sp.counts[best]) < 0) best = c;
  CrcSearchOutcome out;
  for (std::size_t c = 0; c < num; ++c)
    if (compare_spectra(sp.counts[c], sp.counts[best]) == 0)
      out.co_winners.push_back(
          BinaryPolynomial::from_value(CandidateSpectra::candidate_poly(static_cast<std::uint32_t>(c), sp.m)));
  out.winner = out.co_winners.front();  // candidates scanned in ascending hex order
  out.spectrum.d_tilde = sp.d_tilde;
  for (std::size_t d = 0; d < sp.counts[best].size(); ++d)
    if (sp.counts[best][d]) out.spectrum.counts[static_cast<int>(d)] = sp.counts[best][d];
  return out;
}

}  // namespace

CrcSearchOutcome search_dso_crc(const std::vector<PathRecord>& paths, int m, int prefix_bits,
                                int d_tilde) {
  if (m < 1 || m > 16) throw std::invalid_argument("search_dso_crc: CRC degree out of range");
  CandidateSpectra sp(m, d_tilde, prefix_bits);
  for (const auto& p : paths) sp.add(p.inputs, p.weight);
  return pick_winner(sp);
}

DsoDesign design_dso_crc(const ParityCheck& H, int K, int m, TermMode mode,
                         const DsoOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if ((K + m) % (H.n - 1) != 0)
    throw ConfigError("design: (K+m) must be divisible by (n-1)");
  const int data_steps = (K + m) / (H.n - 1);
  const int term_steps = (mode == TermMode::zt) ? (H.v + H.n - 2) / (H.n - 1) : 0;
  const int steps = data_steps + term_steps;
  const int max_len = opts.max_len_override ? opts.max_len_override : steps;
  const int prefix_bits = K + m;

  auto collect = [&](int dt) {
    return mode == TermMode::zt ? collect_iee_zt(H, dt, max_len) : collect_iee_tb(H, dt, max_len);
  };
  auto enumerate = [&](const std::vector<ErrorEvent>& evs, int dt, const PathEmit& emit) {
    if (mode == TermMode::zt) enumerate_zt_paths(evs, H.n, steps, dt, emit);
    else enumerate_tb_paths(evs, H.n, steps, dt, emit);
  };

  // Free-distance bootstrap for the threshold schedule.
  int dfree = 0;
  for (int dt = 4; dt <= 1 << 12; dt *= 2) {
    const auto evs = collect(dt);
    if (!evs.empty()) {
      dfree = evs[0].weight;
      for (const auto& e : evs) dfree = std::min(dfree, e.weight);
      break;
    }
  }
  if (dfree == 0) throw std::runtime_error("design: no error event found; degenerate code");

  int d_tilde = opts.d_tilde_override ? opts.d_tilde_override : std::max(dfree + 2 * m, dfree + 1);
  bool tie_round_done = false;
  DsoDesign result;
  for (int round = 0; round < 16; ++round) {
    const auto evs = collect(d_tilde);
    CandidateSpectra sp(m, d_tilde, prefix_bits);
    enumerate(evs, d_tilde, [&](const Bits& b, int w) { sp.add(b, w); });
    try {
      CrcSearchOutcome out = pick_winner(sp);
      if (out.co_winners.size() > 1 && !tie_round_done && !opts.d_tilde_override) {
        tie_round_done = true;  // one extra growth round to try separating the tie
        d_tilde += std::max(2, d_tilde / 2);
        continue;
      }
      result.crc = out.winner;
      result.spectrum = out.spectrum;
      result.co_winners = std::move(out.co_winners);
      result.d_tilde_used = d_tilde;
      result.elapsed_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return result;
    } catch (const CrcSearchInsufficient& e) {
      if (opts.d_tilde_override) throw;
      d_tilde = e.suggested_d_tilde;
    }
  }
  throw CrcSearchInsufficient(d_tilde);
}

}  // namespace hrcc
