#pragma once

// Entanglement-assisted codes and their packaging as breeding protocols: ebit
// counts, distance of an arbitrary subspace, conversion of pure stabilizer
// codes by puncturing, and construction from any subspace by extension.

#include "edp/stabilizer_code.hpp"

#include <optional>
#include <vector>

namespace edp {

struct EaqeccParams {
  int p = 2;
  int n = 0;        // noisy positions
  int gross_k = 0;  // logical pairs produced
  int c = 0;        // preshared pairs consumed
  std::optional<int> d;

  int net_yield() const { return gross_k - c; }
};

/// An extended stabilizer code on N = n + c positions, with c positions that
/// carry preshared perfect pairs. With c = 0 this is a hashing protocol.
struct BreedingProtocolSpec {
  StabilizerCode extended_code;
  std::vector<int> ebit_positions;   // 0-based, sorted
  std::vector<int> noisy_positions;  // 0-based, sorted
  EaqeccParams params;
  /// Distance recomputed from the punctured subspace, when enumeration was feasible.
  std::optional<int> recomputed_d;

  PositionMask ebit_mask() const { return mask_of(ebit_positions); }
  PositionMask noisy_mask() const { return mask_of(noisy_positions); }
  bool distance_mismatch() const { return recomputed_d.has_value() && recomputed_d != params.d; }
};

/// rank(gram(D)) / 2: the number of preshared pairs needed to make D self-orthogonal.
int ebit_count(const SympSubspace& d);

/// min weight over D^⊥s \ D, nullopt when that set is empty.
std::optional<int> eaqecc_distance(const SympSubspace& d);

class ConversionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Punctures a pure code at the given 0-based positions (|punctured| < d).
BreedingProtocolSpec convert_pure(const StabilizerCode& code, std::vector<int> punctured);

/// Positions n - c .. n - 1.
std::vector<int> last_positions(int n, int c);

/// Extends D to a self-orthogonal code on n + c positions; the appended
/// positions hold the preshared pairs.
BreedingProtocolSpec build_from_subspace(const SympSubspace& d);

/// Hashing protocol from a stabilizer code: no preshared pairs.
BreedingProtocolSpec hashing_spec(const StabilizerCode& code);

}  // namespace edp
