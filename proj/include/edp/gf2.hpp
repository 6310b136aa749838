#pragma once

// Bit-packed F_2 rows (up to 64 columns) for the hot loops of the exhaustive
// search. Column j of a row lives in bit (cols - 1 - j), so integer order on
// packed rows coincides with lexicographic order on the coordinate tuple.

#include "edp/field.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace edp::gf2 {

using Row = std::uint64_t;

inline Row pack(const FpVector& v) {
  Row r = 0;
  for (Index j = 0; j < v.cols(); ++j) r = (r << 1) | static_cast<Row>(v(j) & 1);
  return r;
}

inline FpVector unpack(Row r, int cols) {
  FpVector v(cols);
  for (int j = 0; j < cols; ++j) v(j) = static_cast<Scalar>((r >> (cols - 1 - j)) & 1U);
  return v;
}

/// Reduced echelon form on packed rows; same canonical basis as edp::rref over F_2.
struct Echelon {
  int cols = 0;
  std::vector<Row> basis;
  std::vector<int> pivots;

  int rank() const { return static_cast<int>(basis.size()); }

  Row reduce(Row v) const {
    for (size_t i = 0; i < basis.size(); ++i) {
      if ((v >> (cols - 1 - pivots[i])) & 1U) v ^= basis[i];
    }
    return v;
  }
  bool contains(Row v) const { return reduce(v) == 0; }
};

inline Echelon rref(std::vector<Row> rows, int cols) {
  Echelon e;
  e.cols = cols;
  size_t next = 0;
  for (int col = 0; col < cols && next < rows.size(); ++col) {
    const Row bit = Row{1} << (cols - 1 - col);
    size_t sel = next;
    while (sel < rows.size() && !(rows[sel] & bit)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[next]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r != next && (rows[r] & bit)) rows[r] ^= rows[next];
    }
    e.pivots.push_back(col);
    ++next;
  }
  rows.resize(next);
  e.basis = std::move(rows);
  return e;
}

/// Symplectic product of packed (a|b) rows on n positions.
inline int symp_product(Row u, Row v, int n) {
  const Row low = (n == 64) ? ~Row{0} : ((Row{1} << n) - 1);
  const Row ua = u >> n, ub = u & low;
  const Row va = v >> n, vb = v & low;
  return std::popcount((ua & vb) ^ (ub & va)) & 1;
}

inline int symp_weight(Row v, int n) {
  const Row low = (n == 64) ? ~Row{0} : ((Row{1} << n) - 1);
  return std::popcount((v >> n) | (v & low));
}

}  // namespace edp::gf2
