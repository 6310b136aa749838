#pragma once

// Symplectic geometry of F_p^{2n}: vectors (a|b) standing for Pauli operators
// modulo phase, subspaces in canonical reduced form, and the operations the
// stabilizer and entanglement-assisted constructions need.

#include "edp/field.hpp"

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edp {

/// An element (a|b) of F_p^{2n}. Coordinates are stored as a_1..a_n, b_1..b_n.
class SympVector {
 public:
  SympVector(PrimeField field, FpVector coords);

  static SympVector zero(PrimeField field, int n);
  static SympVector from_parts(PrimeField field, const FpVector& a, const FpVector& b);
  /// Parses "<a-digits>|<b-digits>", e.g. "101|011".
  static SympVector parse(PrimeField field, std::string_view text);
  /// Single-position operator with x-part `a` and z-part `b` at position `pos`.
  static SympVector single(PrimeField field, int n, int pos, Scalar a, Scalar b);

  const PrimeField& field() const { return field_; }
  int num_positions() const { return static_cast<int>(coords_.cols() / 2); }
  const FpVector& coords() const { return coords_; }
  Scalar x(int i) const { return coords_(i); }
  Scalar z(int i) const { return coords_(num_positions() + i); }
  bool is_zero() const { return coords_.isZero(); }

  std::string to_string() const;

  SympVector operator+(const SympVector& o) const;
  SympVector operator-(const SympVector& o) const;
  SympVector scaled(Scalar s) const;

  friend bool operator==(const SympVector& u, const SympVector& v) {
    return u.field_ == v.field_ && u.coords_.cols() == v.coords_.cols() && u.coords_ == v.coords_;
  }
  /// Lexicographic on (a|b) as integer tuples.
  friend std::strong_ordering operator<=>(const SympVector& u, const SympVector& v);

 private:
  PrimeField field_;
  FpVector coords_;
};

/// An F_p-linear subspace of F_p^{2n} held by its reduced echelon basis.
class SympSubspace {
 public:
  SympSubspace(PrimeField field, int n, const FpMatrix& rows);

  static SympSubspace zero(PrimeField field, int n);
  static SympSubspace full(PrimeField field, int n);
  static SympSubspace span(PrimeField field, int n, std::span<const SympVector> generators);

  const PrimeField& field() const { return field_; }
  int num_positions() const { return n_; }
  int dim() const { return static_cast<int>(echelon_.rank()); }
  const FpMatrix& basis() const { return echelon_.basis; }
  const Echelon& echelon() const { return echelon_; }
  SympVector basis_vector(int i) const;
  std::vector<SympVector> basis_vectors() const;

  bool contains(const SympVector& v) const;
  /// Canonical representative of v modulo this subspace.
  SympVector reduce(const SympVector& v) const;
  bool contains(const SympSubspace& other) const;

  friend bool operator==(const SympSubspace& x, const SympSubspace& y) {
    return x.field_ == y.field_ && x.n_ == y.n_ && x.echelon_ == y.echelon_;
  }

 private:
  PrimeField field_;
  int n_;
  Echelon echelon_;
};

using GramMatrix = FpMatrix;

/// <a_u, b_v> - <b_u, a_v> mod p.
Scalar symp_product(const SympVector& u, const SympVector& v);
int symp_weight(const SympVector& v);

/// (a|b) -> (a|-b).
SympVector star(const SympVector& v);
SympSubspace star(const SympSubspace& s);

/// Rows (-b | a) so that rows * v^T gives the symplectic products with v.
FpMatrix symp_check_matrix(const FpMatrix& rows, int n, const PrimeField& f);

SympSubspace symp_dual(const SympSubspace& s);
bool is_self_orthogonal(const SympSubspace& s);
GramMatrix gram(const SympSubspace& s);

/// Deletes the given 0-based positions from both halves of every basis vector.
SympSubspace puncture(const SympSubspace& s, std::span<const int> positions);
SympVector puncture(const SympVector& v, std::span<const int> positions);

struct SymplecticExtension {
  SympSubspace extended;  // self-orthogonal, on n + added positions
  int added = 0;          // appended positions n .. n + added - 1
};

/// Appends the minimal number of coordinates making `d` self-orthogonal while
/// keeping its puncturing on the appended positions equal to `d`.
SymplecticExtension symp_extend(const SympSubspace& d);

/// rank(gram(s)); always even.
int gram_rank(const SympSubspace& s);

}  // namespace edp
