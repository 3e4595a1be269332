#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hrcc::gf2 {

// Column-major GF(2) matrix: bit r of cols[c] is the entry at (row r, col c).

inline std::uint64_t apply(const std::vector<std::uint64_t>& cols, std::uint64_t x) {
  std::uint64_t y = 0;
  for (std::size_t c = 0; c < cols.size(); ++c)
    if ((x >> c) & 1u) y ^= cols[c];
  return y;
}

// Columns of A*B (both column-major, compatible shapes).
inline std::vector<std::uint64_t> mat_mul(const std::vector<std::uint64_t>& a,
                                          const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> r(b.size());
  for (std::size_t c = 0; c < b.size(); ++c) r[c] = apply(a, b[c]);
  return r;
}

inline std::vector<std::uint64_t> mat_pow(std::vector<std::uint64_t> a, unsigned k) {
  const std::size_t n = a.size();
  std::vector<std::uint64_t> r(n);
  for (std::size_t c = 0; c < n; ++c) r[c] = std::uint64_t{1} << c;  // identity
  while (k) {
    if (k & 1u) r = mat_mul(a, r);
    a = mat_mul(a, a);
    k >>= 1;
  }
  return r;
}

struct Solution {
  std::uint64_t particular = 0;
  std::vector<std::uint64_t> nullspace;  // basis vectors
};

// Solves M x = rhs. Returns nullopt when inconsistent. The particular solution
// has all free variables zero; nullspace gives the full solution set.
inline std::optional<Solution> solve(const std::vector<std::uint64_t>& cols, int rows,
                                     std::uint64_t rhs) {
  const int nc = static_cast<int>(cols.size());
  std::vector<std::uint64_t> row(static_cast<std::size_t>(rows), 0);
  for (int r = 0; r < rows; ++r) {
    std::uint64_t bits = 0;
    for (int c = 0; c < nc; ++c) bits |= ((cols[static_cast<std::size_t>(c)] >> r) & 1u) << c;
    bits |= ((rhs >> r) & 1u) << nc;  // augmented column
    row[static_cast<std::size_t>(r)] = bits;
  }
  std::vector<int> pivot_col;
  int rank = 0;
  for (int c = 0; c < nc && rank < rows; ++c) {
    int pr = -1;
    for (int r = rank; r < rows; ++r)
      if ((row[static_cast<std::size_t>(r)] >> c) & 1u) { pr = r; break; }
    if (pr < 0) continue;
    std::swap(row[static_cast<std::size_t>(pr)], row[static_cast<std::size_t>(rank)]);
    for (int r = 0; r < rows; ++r)
      if (r != rank && ((row[static_cast<std::size_t>(r)] >> c) & 1u))
        row[static_cast<std::size_t>(r)] ^= row[static_cast<std::size_t>(rank)];
    pivot_col.push_back(c);
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if ((row[static_cast<std::size_t>(r)] >> nc) & 1u) return std::nullopt;

  Solution s;
  for (int i = 0; i < rank; ++i)
    if ((row[static_cast<std::size_t>(i)] >> nc) & 1u)
      s.particular |= std::uint64_t{1} << pivot_col[static_cast<std::size_t>(i)];
  std::vector<bool> is_pivot(static_cast<std::size_t>(nc), false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  for (int f = 0; f < nc; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::uint64_t vec = std::uint64_t{1} << f;
    for (int i = 0; i < rank; ++i)
      if ((row[static_cast<std::size_t>(i)] >> f) & 1u)
        vec |= std::uint64_t{1} << pivot_col[static_cast<std::size_t>(i)];
    s.nullspace.push_back(vec);
  }
  return s;
}

}  // namespace hrcc::gf2
