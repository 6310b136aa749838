#pragma once

// Stabilizer codes as validated self-orthogonal subspaces, their parameters,
// syndromes, logical classes, and an exact coset-leader decoder with erasures.

#include "edp/symplectic.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace edp {

/// Thrown by make_code when generators fail to commute.
class CodeConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DistanceInfo {
  std::optional<int> d;                 // nullopt when C^⊥s = C
  std::optional<int> min_dual_weight;   // min weight over C^⊥s \ {0}
  bool pure = false;
};

class StabilizerCode {
 public:
  StabilizerCode(SympSubspace stab);

  const PrimeField& field() const { return stab_.field(); }
  int n() const { return stab_.num_positions(); }
  int k() const { return n() - stab_.dim(); }
  int num_generators() const { return stab_.dim(); }
  const SympSubspace& stabilizer() const { return stab_; }
  const SympSubspace& dual() const { return dual_; }

  /// Exhaustive; computed on first use and shared between copies.
  const DistanceInfo& distance_info() const;

 private:
  struct LazyDistance {
    std::once_flag once;
    DistanceInfo value;
  };

  SympSubspace stab_;
  SympSubspace dual_;
  std::shared_ptr<LazyDistance> distance_;
};

/// Validates self-orthogonality (naming the first failing pair) and reduces.
StabilizerCode make_code(PrimeField field, int n, std::span<const SympVector> generators);

/// Minimum weight over dual \ code, and over dual \ {0}, by enumeration of the
/// dual. Refuses (std::length_error) above ~2^26 dual vectors.
DistanceInfo subspace_distance(const SympSubspace& code, const SympSubspace& dual);

DistanceInfo distance(const StabilizerCode& code);

struct Syndrome {
  FpVector values;

  friend bool operator==(const Syndrome& x, const Syndrome& y) {
    return x.values.cols() == y.values.cols() && x.values == y.values;
  }
};

/// s_i = <h_i, err> for the stored reduced basis h_1..h_m.
Syndrome syndrome(const StabilizerCode& code, const SympVector& err);

/// 0-based positions as a bit mask (n <= 64).
using PositionMask = std::uint64_t;

PositionMask mask_of(std::span<const int> positions);

struct ErrorPattern {
  SympVector error;
  PositionMask erased = 0;
};

struct LogicalClass {
  enum class Kind { identity, logical, non_correctable };
  Kind kind = Kind::identity;
  SympVector representative;  // canonical reduction of the residual modulo C

  bool is_identity() const { return kind == Kind::identity; }
};

LogicalClass logical_class(const StabilizerCode& code, const SympVector& residual);

/// Exact coset-leader decoder. Returns, among vectors vanishing on the frozen
/// positions with the requested syndrome, one of minimal weight outside the
/// erased positions, ties broken lexicographically on (a|b).
///
/// Uses per-erasure-mask syndrome tables when p^{2n} <= 2^20 and bounded
/// enumeration by increasing weight otherwise. Tables are built lazily under
/// a lock and then read concurrently.
class SyndromeDecoder {
 public:
  enum class Mode { automatic, table, search };

  explicit SyndromeDecoder(StabilizerCode code, PositionMask frozen = 0, Mode mode = Mode::automatic);

  const StabilizerCode& code() const { return code_; }
  PositionMask frozen() const { return frozen_; }
  bool uses_tables() const { return use_tables_; }

  /// Throws std::domain_error when no admissible vector has syndrome s.
  SympVector decode(const Syndrome& s, PositionMask erased = 0) const;

  std::uint64_t syndrome_index(const Syndrome& s) const;

 private:
  struct Table {
    std::vector<std::int64_t> leader;  // index into enumeration order, -1 if unreachable
  };

  const Table& table_for(PositionMask erased) const;
  Table build_table(PositionMask erased) const;
  SympVector vector_at(std::int64_t ordinal) const;
  SympVector search(const Syndrome& s, PositionMask erased) const;

  StabilizerCode code_;
  PositionMask frozen_;
  bool use_tables_;
  FpMatrix check_;  // rows (-b|a) of the generators
  std::vector<int> free_coords_;

  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<PositionMask, std::unique_ptr<Table>> tables_;
};

/// One-shot convenience wrapper around SyndromeDecoder.
SympVector decode(const StabilizerCode& code, const Syndrome& s, PositionMask erased = 0);

}  // namespace edp
