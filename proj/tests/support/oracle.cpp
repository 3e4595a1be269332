#include "support/oracle.hpp"

#include <functional>
#include <stdexcept>

#include "hrcc/decoder.hpp"
#include "hrcc/encoder.hpp"
#include "hrcc/polynomial.hpp"
#include "hrcc/trellis.hpp"

namespace oracle {

WindowMachine::WindowMachine(const hrcc::ParityCheck& H) : H_(H), n_(H.n), v_(H.v) {
  if (n_ * v_ > 60) throw std::invalid_argument("WindowMachine: window too wide");
  window_mask_ = (std::uint64_t{1} << (n_ * v_)) - 1;
}

// Window layout: group k-1 (bits (k-1)*n .. ) holds the output vector of time
// t-k, bit j of a group = stream j.
std::vector<unsigned> WindowMachine::valid_outputs(std::uint64_t window) const {
  unsigned history = 0;
  for (int k = 1; k <= v_; ++k) {
    const unsigned past = static_cast<unsigned>((window >> ((k - 1) * n_)) & ((1u << n_) - 1));
    for (int j = 0; j < n_; ++j)
      history ^= static_cast<unsigned>(H_.polys[static_cast<std::size_t>(j)].coeff(k)) &
                 ((past >> j) & 1u);
  }
  std::vector<unsigned> outs;
  for (unsigned y = 0; y < (1u << n_); ++y) {
    unsigned now = 0;
    for (int j = 0; j < n_; ++j)
      now ^= static_cast<unsigned>(H_.polys[static_cast<std::size_t>(j)].coeff(0)) & ((y >> j) & 1u);
    if ((now ^ history) == 0) outs.push_back(y);
  }
  return outs;
}

std::uint64_t WindowMachine::next_window(std::uint64_t window, unsigned y) const {
  return ((window << n_) | y) & window_mask_;
}

bool WindowMachine::zero_terminated(std::uint64_t window) const {
  for (int tau = 1; tau <= v_; ++tau) {
    unsigned sum = 0;
    for (int k = tau; k <= v_; ++k) {
      const int group = k - tau;
      const unsigned past = static_cast<unsigned>((window >> (group * n_)) & ((1u << n_) - 1));
      for (int j = 0; j < n_; ++j)
        sum ^= static_cast<unsigned>(H_.polys[static_cast<std::size_t>(j)].coeff(k)) &
               ((past >> j) & 1u);
    }
    if (sum) return false;
  }
  return true;
}

void WindowMachine::dfs(std::uint64_t window, int remaining, hrcc::Bits& prefix,
                        const std::function<bool(std::uint64_t)>& accept,
                        std::set<hrcc::Bits>& out) const {
  if (remaining == 0) {
    if (accept(window)) out.insert(prefix);
    return;
  }
  for (unsigned y : valid_outputs(window)) {
    for (int j = 0; j < n_; ++j) prefix.push_back(static_cast<std::uint8_t>((y >> j) & 1u));
    dfs(next_window(window, y), remaining - 1, prefix, accept, out);
    prefix.resize(prefix.size() - static_cast<std::size_t>(n_));
  }
}

std::set<hrcc::Bits> WindowMachine::zt_paths(int steps) const {
  std::set<hrcc::Bits> out;
  hrcc::Bits prefix;
  dfs(0, steps, prefix, [this](std::uint64_t w) { return zero_terminated(w); }, out);
  return out;
}

std::set<hrcc::Bits> WindowMachine::tb_paths(int steps) const {
  if (steps < v_) throw std::invalid_argument("tb_paths: need steps >= v");
  std::set<hrcc::Bits> out;
  for (std::uint64_t w0 = 0; w0 <= window_mask_; ++w0) {
    hrcc::Bits prefix;
    dfs(w0, steps, prefix, [w0](std::uint64_t w) { return w == w0; }, out);
  }
  return out;
}

std::set<hrcc::Bits> WindowMachine::from_rest(int steps) const {
  std::set<hrcc::Bits> out;
  hrcc::Bits prefix;
  dfs(0, steps, prefix, [](std::uint64_t) { return true; }, out);
  return out;
}

std::vector<std::pair<hrcc::Bits, hrcc::Bits>> zt_codebook(const hrcc::CodeConfig& cfg) {
  hrcc::ConvEncoder enc(cfg.H);
  hrcc::TerminationTable term = hrcc::build_termination_table(enc);
  std::vector<std::pair<hrcc::Bits, hrcc::Bits>> book;
  book.reserve(std::size_t{1} << cfg.K);
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << cfg.K); ++d) {
    hrcc::Bits data(static_cast<std::size_t>(cfg.K));
    for (int i = 0; i < cfg.K; ++i)
      data[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((d >> (cfg.K - 1 - i)) & 1u);
    book.emplace_back(data, hrcc::zt_encode(data, cfg, enc, term));
  }
  return book;
}

std::vector<std::pair<hrcc::Bits, hrcc::Bits>> tb_codebook(const hrcc::CodeConfig& cfg) {
  hrcc::ConvEncoder enc(cfg.H);
  std::vector<std::pair<hrcc::Bits, hrcc::Bits>> book;
  book.reserve(std::size_t{1} << cfg.K);
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << cfg.K); ++d) {
    hrcc::Bits data(static_cast<std::size_t>(cfg.K));
    for (int i = 0; i < cfg.K; ++i)
      data[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((d >> (cfg.K - 1 - i)) & 1u);
    book.emplace_back(data, hrcc::tb_encode(data, cfg, enc).codeword);
  }
  return book;
}

BruteMl brute_ml(const std::vector<std::pair<hrcc::Bits, hrcc::Bits>>& codebook,
                 const std::vector<double>& received, double amplitude) {
  BruteMl best;
  bool first = true;
  for (const auto& [data, cw] : codebook) {
    double metric = 0.0;
    for (std::size_t i = 0; i < cw.size(); ++i)
      metric += hrcc::branch_metric(received[i], cw[i], amplitude);
    if (first || metric < best.metric) {
      best = {data, cw, metric};
      first = false;
    }
  }
  return best;
}

hrcc::Bits naive_mod(const hrcc::Bits& value, const hrcc::Bits& divisor) {
  // divisor must be normalized (leading 1)
  std::size_t dlead = 0;
  while (dlead < divisor.size() && divisor[dlead] == 0) ++dlead;
  if (dlead == divisor.size()) throw std::domain_error("naive_mod: zero divisor");
  const std::size_t dlen = divisor.size() - dlead;
  hrcc::Bits rem = value;
  for (std::size_t i = 0; i + dlen <= rem.size(); ++i) {
    if (!rem[i]) continue;
    for (std::size_t j = 0; j < dlen; ++j) rem[i + j] ^= divisor[dlead + j];
  }
  // strip to degree < deg(divisor)
  const std::size_t keep = dlen - 1;
  if (rem.size() <= keep) return rem;
  return hrcc::Bits(rem.end() - static_cast<std::ptrdiff_t>(keep), rem.end());
}

}  // namespace oracle
