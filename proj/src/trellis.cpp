#include "hrcc/trellis.hpp"

#include <numeric>
#include <sstream>

#include "hrcc/gf2.hpp"

namespace hrcc {

int compute_lambda(const ParityCheck& H) {
  int lambda = -1;
  for (int j = 0; j < H.n; ++j)
    if (H.polys[static_cast<std::size_t>(j)].coeff(0) == 1) lambda = j;
  if (lambda < 0)
    throw TrellisError("dual trellis undefined: no stream polynomial has constant term 1");
  return lambda;
}

DualTrellis::DualTrellis(const ParityCheck& H, int length_stages)
    : n_(H.n), v_(H.v), lambda_(compute_lambda(H)), length_(length_stages) {
  H.validate();
  if (length_ <= 0 || length_ % n_ != 0)
    throw TrellisError("dual trellis length must be a positive multiple of n");
  const int S = state_count();
  std::vector<std::uint32_t> taps(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) taps[static_cast<std::size_t>(j)] = H.taps(j);

  valid_.assign(static_cast<std::size_t>(n_), std::vector<std::uint8_t>(static_cast<std::size_t>(S), 1));
  for (int pos = 0; pos < n_; ++pos) {
    for (int s = 0; s < S; ++s) {
      bool ok = true;
      if (pos == 0) ok = ((s >> v_) & 1) == 0;
      else if (pos > lambda_) ok = (s & 1) == 0;  // constraint already consumed this period
      valid_[static_cast<std::size_t>(pos)][static_cast<std::size_t>(s)] = ok ? 1 : 0;
    }
  }

  succ_.assign(static_cast<std::size_t>(n_), std::vector<std::int16_t>(static_cast<std::size_t>(S) * 2, -1));
  in_.assign(static_cast<std::size_t>(n_), std::vector<InList>(static_cast<std::size_t>(S)));
  for (int pos = 0; pos < n_; ++pos) {
    const int next_pos = (pos + 1) % n_;
    for (int s = 0; s < S; ++s) {
      if (!state_valid(pos, s)) continue;
      for (int y = 0; y <= 1; ++y) {
        if (pos == lambda_ && y != (s & 1)) continue;  // forced branch
        int a = y ? (s ^ static_cast<int>(taps[static_cast<std::size_t>(pos)])) : s;
        int t = (pos == n_ - 1) ? (a >> 1) : a;  // boundary rotation drops the settled bit
        if (pos == n_ - 1 && (a & 1) != 0) continue;    // unreachable along valid paths
        if (!state_valid(next_pos, t)) continue;
        succ_[static_cast<std::size_t>(pos)][(static_cast<std::size_t>(s) << 1) | static_cast<unsigned>(y)] =
            static_cast<std::int16_t>(t);
        auto& lst = in_[static_cast<std::size_t>(pos)][static_cast<std::size_t>(t)];
        if (lst.count >= 2) throw TrellisError("dual trellis in-degree exceeds 2");
        lst.br[lst.count++] = {static_cast<std::int16_t>(s), static_cast<std::int8_t>(y)};
      }
    }
    // Deterministic incoming order: lower predecessor first, then label 0.
    for (int s = 0; s < S; ++s) {
      auto& lst = in_[static_cast<std::size_t>(pos)][static_cast<std::size_t>(s)];
      if (lst.count == 2) {
        auto a = lst.br[0], b = lst.br[1];
        if (b.pred < a.pred || (b.pred == a.pred && b.label < a.label)) std::swap(lst.br[0], lst.br[1]);
      }
    }
  }
}

int DualTrellis::walk(int state, const std::uint8_t* labels, int count, int start_pos) const {
  int s = state;
  for (int i = 0; i < count; ++i) {
    s = succ((start_pos + i) % n_, s, labels[i]);
    if (s < 0) return -1;
  }
  return s;
}

DualTrellis build_dual_trellis(const ParityCheck& H, int length_stages) {
  return DualTrellis(H, length_stages);
}

DualTrellis augment_root_node(DualTrellis t) {
  if (t.has_root_) throw TrellisError("trellis already has a root node");
  t.has_root_ = true;
  return t;
}

TerminationTable build_termination_table(const ConvEncoder& enc) {
  const int v = enc.v();
  const int k = enc.n() - 1;
  const int steps = (v + k - 1) / k;
  const int nin = k * steps;

  // final = A^steps sigma ^ M u with column t*k+j of M = A^(steps-1-t) B_j.
  std::vector<std::uint64_t> m(static_cast<std::size_t>(nin));
  for (int t = 0; t < steps; ++t) {
    const auto a_pow = gf2::mat_pow(enc.state_update_cols(), static_cast<unsigned>(steps - 1 - t));
    for (int j = 0; j < k; ++j)
      m[static_cast<std::size_t>(t * k + j)] = gf2::apply(a_pow, enc.input_update_cols()[static_cast<std::size_t>(j)]);
  }
  const auto a_steps = gf2::mat_pow(enc.state_update_cols(), static_cast<unsigned>(steps));

  // Solve per state basis vector; the table is then linear in the state.
  std::vector<std::uint64_t> u_basis(static_cast<std::size_t>(v));
  for (int i = 0; i < v; ++i) {
    const std::uint64_t rhs = a_steps[static_cast<std::size_t>(i)];
    const auto sol = gf2::solve(m, v, rhs);
    if (!sol)
      throw TrellisError("termination: state cannot reach zero within ceil(v/(n-1)) steps");
    u_basis[static_cast<std::size_t>(i)] = sol->particular;
  }

  TerminationTable table;
  table.steps = steps;
  const int num_states = enc.num_states();
  table.inputs.resize(static_cast<std::size_t>(num_states));
  table.outputs.resize(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    std::uint64_t u = 0;
    for (int i = 0; i < v; ++i)
      if ((s >> i) & 1) u ^= u_basis[static_cast<std::size_t>(i)];
    Bits in(static_cast<std::size_t>(nin));
    for (int b = 0; b < nin; ++b) in[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((u >> b) & 1u);
    std::uint32_t fin = 0;
    Bits out = encode_payload(enc, in, static_cast<std::uint32_t>(s), &fin);
    if (fin != 0) throw TrellisError("termination: replay did not reach the zero state");
    table.inputs[static_cast<std::size_t>(s)] = std::move(in);
    table.outputs[static_cast<std::size_t>(s)] = std::move(out);
  }
  return table;
}

MultiTrellisForest build_multi_trellis_forest(const ParityCheck& H, int length_stages) {
  MultiTrellisForest f{DualTrellis(H, length_stages), {}};
  f.start_states.resize(static_cast<std::size_t>(f.trellis.boundary_count()));
  std::iota(f.start_states.begin(), f.start_states.end(), 0);
  return f;
}

std::vector<int> boundary_state_of_encoder_state(const ConvEncoder& enc, const DualTrellis& t) {
  const int num = enc.num_states();
  const int k = enc.n() - 1;
  std::vector<int> dual(static_cast<std::size_t>(num), -1);
  std::vector<int> depth(static_cast<std::size_t>(num), -1);
  dual[0] = 0;
  depth[0] = 0;
  // BFS over encoder states, carrying the dual boundary state alongside.
  std::vector<std::uint32_t> queue{0};
  std::uint8_t in[32], out[32];
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const std::uint32_t s = queue[qi];
    for (unsigned u = 0; u < (1u << k); ++u) {
      for (int j = 0; j < k; ++j) in[j] = static_cast<std::uint8_t>((u >> j) & 1u);
      const std::uint32_t ns = enc.step(s, in, out);
      const int nd = t.walk(dual[s], out, enc.n());
      if (nd < 0) throw TrellisError("state map: encoder output rejected by the dual trellis");
      if (dual[ns] < 0) {
        dual[ns] = nd;
        depth[ns] = depth[s] + 1;
        queue.push_back(ns);
      } else if (dual[ns] != nd) {
        throw TrellisError("state map: inconsistent encoder/dual state correspondence");
      }
    }
  }
  for (int s = 0; s < num; ++s)
    if (dual[static_cast<std::size_t>(s)] < 0)
      throw TrellisError("state map: encoder state unreachable from zero");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(num), 0);
  for (int s = 0; s < num; ++s) {
    const int d = dual[static_cast<std::size_t>(s)];
    if (d >= num || seen[static_cast<std::size_t>(d)]) throw TrellisError("state map: not a bijection");
    seen[static_cast<std::size_t>(d)] = 1;
  }
  return dual;
}

std::string trellis_to_dot(const DualTrellis& t) {
  std::ostringstream os;
  const int S = t.state_count();
  auto label = [&](int s) {
    std::string bits;
    for (int b = t.v(); b >= 0; --b) bits.push_back(((s >> b) & 1) ? '1' : '0');
    return bits;
  };
  os << "digraph dual_trellis {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
  for (int pos = 0; pos <= t.n(); ++pos) {
    const int p = pos % t.n();
    os << "  { rank=same;";
    for (int s = 0; s < S; ++s)
      if (t.state_valid(p, s)) os << " j" << pos << "_s" << s << " [label=\"" << label(s) << "\"];";
    os << " }\n";
  }
  for (int pos = 0; pos < t.n(); ++pos) {
    for (int s = 0; s < S; ++s) {
      if (!t.state_valid(pos, s)) continue;
      for (int y = 0; y <= 1; ++y) {
        const int ns = t.succ(pos, s, y);
        if (ns < 0) continue;
        os << "  j" << pos << "_s" << s << " -> j" << (pos + 1) << "_s" << ns << " [label=\"" << y
           << "/" << y << "\"" << (y ? ", style=dashed" : "") << "];\n";
      }
    }
  }
  if (t.has_root_node()) {
    os << "  root [shape=doublecircle, label=\"root\"];\n";
    for (int s = 0; s < t.boundary_count(); ++s)
      os << "  j" << t.n() << "_s" << s << " -> root [label=\"-/0\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace hrcc
