#pragma once

// Prime-field arithmetic and the small dense linear algebra over F_p that the
// rest of the library is built on. Matrices are plain Eigen integer matrices
// whose entries are kept reduced into [0, p).

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edp {

using Scalar = std::int32_t;
using Index = Eigen::Index;
using FpMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FpVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// The prime field F_p for 2 <= p <= 251.
class PrimeField {
 public:
  static constexpr int kMaxModulus = 251;

  explicit PrimeField(int p) : p_(p) {
    if (p < 2 || p > kMaxModulus) {
      throw std::invalid_argument("field modulus " + std::to_string(p) + " outside [2, 251]");
    }
    for (int q = 2; q * q <= p; ++q) {
      if (p % q == 0) {
        throw std::invalid_argument("field modulus " + std::to_string(p) + " is not prime");
      }
    }
  }

  int modulus() const { return p_; }

  Scalar reduce(long long x) const {
    long long r = x % p_;
    return static_cast<Scalar>(r < 0 ? r + p_ : r);
  }
  Scalar add(Scalar x, Scalar y) const { return reduce(static_cast<long long>(x) + y); }
  Scalar sub(Scalar x, Scalar y) const { return reduce(static_cast<long long>(x) - y); }
  Scalar mul(Scalar x, Scalar y) const { return reduce(static_cast<long long>(x) * y); }
  Scalar neg(Scalar x) const { return reduce(-static_cast<long long>(x)); }

  Scalar inv(Scalar y) const {
    y = reduce(y);
    if (y == 0) {
      throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
    }
    // Fermat: y^(p-2).
    long long result = 1;
    long long base = y;
    for (int e = p_ - 2; e > 0; e >>= 1) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
    }
    return static_cast<Scalar>(result);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  int p_;
};

/// Reduces every entry of an integer matrix expression into [0, p).
template <typename Derived>
FpMatrix reduced(const Eigen::MatrixBase<Derived>& m, const PrimeField& f) {
  return m.template cast<Scalar>().unaryExpr([&f](Scalar x) { return f.reduce(x); });
}

/// Reduced row echelon form of a row space: nonzero rows only, pivot columns
/// strictly increasing, pivots equal to 1, and pivot columns zero elsewhere.
struct Echelon {
  FpMatrix basis;
  std::vector<Index> pivots;

  Index rank() const { return static_cast<Index>(pivots.size()); }
  Index cols() const { return basis.cols(); }

  friend bool operator==(const Echelon& x, const Echelon& y) {
    return x.basis.rows() == y.basis.rows() && x.basis.cols() == y.basis.cols() &&
           x.basis == y.basis;
  }
};

namespace detail {

inline void row_axpy(FpMatrix& m, Index dst, Index src, Scalar factor, const PrimeField& f,
                     Index from_col = 0) {
  if (factor == 0) return;
  for (Index c = from_col; c < m.cols(); ++c) {
    if (m(src, c) != 0) {
      m(dst, c) = f.reduce(m(dst, c) + static_cast<long long>(factor) * m(src, c));
    }
  }
}

inline void row_scale(FpMatrix& m, Index r, Scalar factor, const PrimeField& f) {
  for (Index c = 0; c < m.cols(); ++c) m(r, c) = f.mul(m(r, c), factor);
}

}  // namespace detail

/// Gauss-Jordan elimination over F_p.
template <typename Derived>
Echelon rref(const Eigen::MatrixBase<Derived>& input, const PrimeField& f) {
  FpMatrix m = reduced(input, f);
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row) m.row(sel).swap(m.row(row));
    if (m(row, col) != 1) detail::row_scale(m, row, f.inv(m(row, col)), f);
    for (Index r = 0; r < m.rows(); ++r) {
      if (r != row && m(r, col) != 0) detail::row_axpy(m, r, row, f.neg(m(r, col)), f, col);
    }
    pivots.push_back(col);
    ++row;
  }
  Echelon out;
  out.basis = m.topRows(row);
  out.pivots = std::move(pivots);
  return out;
}

template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& m, const PrimeField& f) {
  return rref(m, f).rank();
}

/// Reduces v against an echelon basis. The result is zero on every pivot column
/// and is the canonical representative of v modulo the row space.
template <typename Derived>
FpVector reduce_modulo(const Echelon& e, const Eigen::MatrixBase<Derived>& v, const PrimeField& f) {
  FpVector out = reduced(v, f);
  for (Index i = 0; i < e.rank(); ++i) {
    const Scalar coeff = out(e.pivots[i]);
    if (coeff == 0) continue;
    for (Index c = e.pivots[i]; c < out.cols(); ++c) {
      if (e.basis(i, c) != 0) {
        out(c) = f.reduce(out(c) - static_cast<long long>(coeff) * e.basis(i, c));
      }
    }
  }
  return out;
}

template <typename Derived>
bool in_row_space(const Echelon& e, const Eigen::MatrixBase<Derived>& v, const PrimeField& f) {
  return reduce_modulo(e, v, f).isZero();
}

/// Basis of the right null space {x : m x^T = 0}, one basis vector per row.
template <typename Derived>
FpMatrix kernel(const Eigen::MatrixBase<Derived>& m, const PrimeField& f) {
  const Echelon e = rref(m, f);
  const Index cols = m.cols();
  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (Index c : e.pivots) is_pivot[static_cast<size_t>(c)] = true;

  FpMatrix out = FpMatrix::Zero(cols - e.rank(), cols);
  Index row = 0;
  for (Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    out(row, free) = 1;
    for (Index i = 0; i < e.rank(); ++i) out(row, e.pivots[i]) = f.neg(e.basis(i, free));
    ++row;
  }
  return out;
}

template <typename DA, typename DB>
FpMatrix stack(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("stack: column count mismatch");
  FpMatrix out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a.template cast<Scalar>();
  out.bottomRows(b.rows()) = b.template cast<Scalar>();
  return out;
}

/// Basis (in reduced form) of row(a) + row(b).
template <typename DA, typename DB>
FpMatrix span_sum(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                  const PrimeField& f) {
  return rref(stack(a, b), f).basis;
}

/// Basis (in reduced form) of row(a) ∩ row(b), by the double-kernel identity
/// A ∩ B = (A^⊥ + B^⊥)^⊥ for the Euclidean form.
template <typename DA, typename DB>
FpMatrix intersect(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                   const PrimeField& f) {
  if (a.cols() != b.cols()) throw std::invalid_argument("intersect: column count mismatch");
  const FpMatrix both_perp = stack(kernel(a, f), kernel(b, f));
  return rref(kernel(both_perp, f), f).basis;
}

}  // namespace edp
