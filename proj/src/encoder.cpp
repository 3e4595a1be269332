#include "hrcc/encoder.hpp"

#include <algorithm>

#include "hrcc/gf2.hpp"
#include "hrcc/trellis.hpp"

namespace hrcc {

ConvEncoder::ConvEncoder(const ParityCheck& H) : H_(H), n_(H.n), v_(H.v) {
  H_.validate();
  if (H_.polys[0].coeff(0) != 1)
    throw EncodeError("systematic encoder needs h^(0) with constant term 1 (got " +
                      H_.polys[0].to_octal() + " octal); no causal realization exists");
  state_mask_ = (v_ >= 32) ? ~0u : ((1u << v_) - 1u);
  taps_.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) taps_[static_cast<std::size_t>(j)] = H_.taps(j);

  // Extract the linear state update by stepping basis vectors.
  std::vector<std::uint8_t> zin(static_cast<std::size_t>(n_ - 1), 0);
  a_cols_.resize(static_cast<std::size_t>(v_));
  for (int i = 0; i < v_; ++i) a_cols_[static_cast<std::size_t>(i)] = step_state(1u << i, zin.data());
  b_cols_.resize(static_cast<std::size_t>(n_ - 1));
  for (int j = 0; j < n_ - 1; ++j) {
    std::vector<std::uint8_t> in(static_cast<std::size_t>(n_ - 1), 0);
    in[static_cast<std::size_t>(j)] = 1;
    b_cols_[static_cast<std::size_t>(j)] = step_state(0, in.data());
  }
}

std::uint32_t ConvEncoder::step(std::uint32_t state, const std::uint8_t* inputs,
                                std::uint8_t* outputs) const {
  unsigned parity = state & 1u;
  for (int j = 1; j < n_; ++j) parity ^= (taps_[static_cast<std::size_t>(j)] & 1u) & inputs[j - 1];
  outputs[0] = static_cast<std::uint8_t>(parity);
  std::uint32_t acc = parity ? taps_[0] : 0u;
  for (int j = 1; j < n_; ++j) {
    outputs[j] = inputs[j - 1];
    if (inputs[j - 1]) acc ^= taps_[static_cast<std::size_t>(j)];
  }
  return ((state >> 1) ^ (acc >> 1)) & state_mask_;
}

std::uint32_t ConvEncoder::step_state(std::uint32_t state, const std::uint8_t* inputs) const {
  std::uint8_t out[32];
  return step(state, inputs, out);
}

Bits encode_payload(const ConvEncoder& enc, const Bits& payload, std::uint32_t initial_state,
                    std::uint32_t* final_state) {
  const int k = enc.n() - 1;
  if (payload.size() % static_cast<std::size_t>(k) != 0)
    throw EncodeError("payload length not divisible by n-1");
  const std::size_t steps = payload.size() / static_cast<std::size_t>(k);
  Bits out(steps * static_cast<std::size_t>(enc.n()));
  std::uint32_t s = initial_state;
  for (std::size_t t = 0; t < steps; ++t)
    s = enc.step(s, payload.data() + t * static_cast<std::size_t>(k),
                 out.data() + t * static_cast<std::size_t>(enc.n()));
  if (final_state) *final_state = s;
  return out;
}

Bits zt_encode(const Bits& data, const CodeConfig& cfg, const ConvEncoder& enc,
               const TerminationTable& term) {
  if (cfg.mode != TermMode::zt) throw EncodeError("zt_encode: config mode is not zt");
  cfg.validate();
  if (data.size() != static_cast<std::size_t>(cfg.K)) throw EncodeError("zt_encode: data length != K");
  const Bits payload = crc_append(data, cfg.crc);
  std::uint32_t s = 0;
  Bits out = encode_payload(enc, payload, 0, &s);
  const Bits& tail_in = term.inputs[s];
  std::uint32_t fin = s;
  Bits tail_out = encode_payload(enc, tail_in, s, &fin);
  if (fin != 0) throw EncodeError("zt_encode: termination did not reach the zero state");
  out.insert(out.end(), tail_out.begin(), tail_out.end());
  if (out.size() != static_cast<std::size_t>(cfg.block_bits()))
    throw EncodeError("zt_encode: internal length mismatch");
  return out;
}

Bits zt_encode(const Bits& data, const CodeConfig& cfg) {
  ConvEncoder enc(cfg.H);
  TerminationTable term = build_termination_table(enc);
  return zt_encode(data, cfg, enc, term);
}

namespace {

std::uint32_t tb_final_from(const ConvEncoder& enc, const Bits& payload, std::uint32_t init) {
  const int k = enc.n() - 1;
  std::uint32_t s = init;
  for (std::size_t t = 0; t < payload.size() / static_cast<std::size_t>(k); ++t)
    s = enc.step_state(s, payload.data() + t * static_cast<std::size_t>(k));
  return s;
}

}  // namespace

TbEncoding tb_encode(const Bits& data, const CodeConfig& cfg, const ConvEncoder& enc) {
  if (cfg.mode != TermMode::tb) throw EncodeError("tb_encode: config mode is not tb");
  cfg.validate();
  if (data.size() != static_cast<std::size_t>(cfg.K)) throw EncodeError("tb_encode: data length != K");
  const Bits payload = crc_append(data, cfg.crc);
  const unsigned steps = static_cast<unsigned>(cfg.steps());

  // final(x) = A^S x ^ f0, tail-biting wants (A^S ^ I) x = f0.
  const std::uint64_t f0 = tb_final_from(enc, payload, 0);
  std::vector<std::uint64_t> m = gf2::mat_pow(enc.state_update_cols(), steps);
  for (int i = 0; i < enc.v(); ++i) m[static_cast<std::size_t>(i)] ^= std::uint64_t{1} << i;
  const auto sol = gf2::solve(m, enc.v(), f0);
  if (!sol) throw EncodeError("tb_encode: no initial state satisfies the tail-biting condition");
  std::uint64_t best = sol->particular;
  if (!sol->nullspace.empty()) {
    // Non-unique tail-biting state; report the smallest for determinism.
    const std::size_t dims = sol->nullspace.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dims); ++mask) {
      std::uint64_t x = sol->particular;
      for (std::size_t i = 0; i < dims; ++i)
        if ((mask >> i) & 1u) x ^= sol->nullspace[i];
      best = std::min(best, x);
    }
  }
  const auto init = static_cast<std::uint32_t>(best);
  std::uint32_t fin = 0;
  Bits out = encode_payload(enc, payload, init, &fin);
  if (fin != init) throw EncodeError("tb_encode: affine solution failed the replay check");
  return {std::move(out), init};
}

TbEncoding tb_encode(const Bits& data, const CodeConfig& cfg) {
  ConvEncoder enc(cfg.H);
  return tb_encode(data, cfg, enc);
}

TbEncoding tb_encode_exhaustive(const Bits& data, const CodeConfig& cfg, const ConvEncoder& enc) {
  if (cfg.mode != TermMode::tb) throw EncodeError("tb_encode: config mode is not tb");
  cfg.validate();
  const Bits payload = crc_append(data, cfg.crc);
  for (std::uint32_t init = 0; init < static_cast<std::uint32_t>(enc.num_states()); ++init) {
    if (tb_final_from(enc, payload, init) == init) {
      std::uint32_t fin = 0;
      Bits out = encode_payload(enc, payload, init, &fin);
      return {std::move(out), init};
    }
  }
  throw EncodeError("tb_encode: no initial state satisfies the tail-biting condition");
}

}  // namespace hrcc
