#include "edp/stabilizer_code.hpp"

#include "edp/gf2.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace edp {

namespace {

constexpr double kMaxDistanceEnumeration = 67108864.0;  // 2^26
constexpr double kMaxTableEnumeration = 1048576.0;      // 2^20

double power(int base, int exp) {
  double r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Rows of `dual` whose span complements `code` inside it.
FpMatrix complement_rows(const SympSubspace& code, const SympSubspace& dual) {
  const PrimeField& f = code.field();
  FpMatrix acc = code.basis();
  std::vector<Index> picked;
  Index current = code.dim();
  for (Index i = 0; i < dual.basis().rows(); ++i) {
    FpMatrix trial = stack(acc, dual.basis().row(i));
    const Index r = rank(trial, f);
    if (r > current) {
      acc = std::move(trial);
      current = r;
      picked.push_back(i);
    }
  }
  FpMatrix out(static_cast<Index>(picked.size()), dual.basis().cols());
  for (size_t j = 0; j < picked.size(); ++j) out.row(static_cast<Index>(j)) = dual.basis().row(picked[j]);
  return out;
}

int weight_of(const std::vector<Scalar>& v, int n, PositionMask ignore = 0) {
  int w = 0;
  for (int i = 0; i < n; ++i) {
    if ((ignore >> i) & 1U) continue;
    w += (v[static_cast<size_t>(i)] != 0 || v[static_cast<size_t>(n + i)] != 0) ? 1 : 0;
  }
  return w;
}

std::vector<gf2::Row> packed_rows(const FpMatrix& m) {
  std::vector<gf2::Row> out;
  for (Index r = 0; r < m.rows(); ++r) out.push_back(gf2::pack(m.row(r)));
  return out;
}

// Minimum weight over span(rows) + offset, skipping the zero combination when
// offset is zero. Gray-code order: each step flips one row.
int min_weight_binary(const std::vector<gf2::Row>& rows, gf2::Row offset, int n, bool skip_zero) {
  int best = std::numeric_limits<int>::max();
  gf2::Row v = offset;
  if (!skip_zero) best = gf2::symp_weight(v, n);
  const std::uint64_t count = std::uint64_t{1} << rows.size();
  for (std::uint64_t i = 1; i < count && best > 1; ++i) {
    v ^= rows[static_cast<size_t>(std::countr_zero(i))];
    best = std::min(best, gf2::symp_weight(v, n));
  }
  return best;
}

DistanceInfo binary_distance(const FpMatrix& outer, const FpMatrix& inside, const FpMatrix& dual, int n) {
  DistanceInfo info;
  const auto in_rows = packed_rows(inside);
  if (outer.rows() > 0) {
    const auto out_rows = packed_rows(outer);
    int best = std::numeric_limits<int>::max();
    gf2::Row l = 0;
    const std::uint64_t count = std::uint64_t{1} << out_rows.size();
    for (std::uint64_t i = 1; i < count && best > 1; ++i) {
      l ^= out_rows[static_cast<size_t>(std::countr_zero(i))];
      best = std::min(best, min_weight_binary(in_rows, l, n, false));
    }
    info.d = best;
  }
  if (dual.rows() > 0) info.min_dual_weight = min_weight_binary(packed_rows(dual), 0, n, true);
  info.pure = info.d.has_value() && info.min_dual_weight == info.d;
  return info;
}

// Calls visit(vector) for every F_p-combination of `rows` (including zero),
// stepping an odometer so each step adds one row. visit returns false to stop.
template <typename Visit>
void for_each_combination(const FpMatrix& rows, const PrimeField& f, Visit&& visit) {
  const Index m = rows.rows();
  const Index len = rows.cols();
  const int p = f.modulus();
  std::vector<Scalar> v(static_cast<size_t>(len), 0);
  std::vector<int> digit(static_cast<size_t>(m), 0);
  if (!visit(v, static_cast<Index>(-1))) return;
  for (;;) {
    Index j = 0;
    for (; j < m; ++j) {
      for (Index c = 0; c < len; ++c) {
        if (rows(j, c) != 0) v[static_cast<size_t>(c)] = f.add(v[static_cast<size_t>(c)], rows(j, c));
      }
      if (++digit[static_cast<size_t>(j)] < p) break;
      digit[static_cast<size_t>(j)] = 0;
    }
    if (j == m) return;
    if (!visit(v, j)) return;
  }
}

}  // namespace

StabilizerCode::StabilizerCode(SympSubspace stab)
    : stab_(std::move(stab)), dual_(symp_dual(stab_)), distance_(std::make_shared<LazyDistance>()) {
  if (!dual_.contains(stab_)) throw CodeConstructionError("stabilizer subspace is not self-orthogonal");
}

const DistanceInfo& StabilizerCode::distance_info() const {
  std::call_once(distance_->once, [this] { distance_->value = subspace_distance(stab_, dual_); });
  return distance_->value;
}

StabilizerCode make_code(PrimeField field, int n, std::span<const SympVector> generators) {
  for (size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].num_positions() != n || !(generators[i].field() == field)) {
      throw CodeConstructionError("generator " + std::to_string(i + 1) + " is not in F_" +
                                  std::to_string(field.modulus()) + "^" + std::to_string(2 * n));
    }
  }
  for (size_t i = 0; i < generators.size(); ++i) {
    for (size_t j = i + 1; j < generators.size(); ++j) {
      if (symp_product(generators[i], generators[j]) != 0) {
        throw CodeConstructionError("generators " + std::to_string(i + 1) + " (" +
                                    generators[i].to_string() + ") and " + std::to_string(j + 1) +
                                    " (" + generators[j].to_string() + ") do not commute");
      }
    }
  }
  return StabilizerCode(SympSubspace::span(field, n, generators));
}

DistanceInfo subspace_distance(const SympSubspace& code, const SympSubspace& dual) {
  const PrimeField& f = code.field();
  const int n = code.num_positions();
  if (power(f.modulus(), dual.dim()) > kMaxDistanceEnumeration) {
    throw std::length_error("distance enumeration over " + std::to_string(f.modulus()) + "^" +
                            std::to_string(dual.dim()) + " vectors exceeds the 2^26 limit");
  }

  // D^⊥s ∩ D and a complement L of it inside D^⊥s: v ∈ D^⊥s \ D exactly when
  // v = l + r with l ∈ span(L) \ {0}, r ∈ D^⊥s ∩ D.
  const FpMatrix inside = intersect(code.basis(), dual.basis(), f);
  const SympSubspace inner(f, n, inside);
  const FpMatrix outer = complement_rows(inner, dual);
  if (f.modulus() == 2 && 2 * n <= 64) return binary_distance(outer, inside, dual.basis(), n);

  DistanceInfo info;
  if (outer.rows() > 0) {
    int best = std::numeric_limits<int>::max();
    for_each_combination(outer, f, [&](const std::vector<Scalar>& l, Index step) {
      if (step < 0) return true;  // l = 0
      for_each_combination(inside, f, [&](const std::vector<Scalar>& r, Index) {
        std::vector<Scalar> v(l.size());
        for (size_t c = 0; c < v.size(); ++c) v[c] = f.add(l[c], r[c]);
        best = std::min(best, weight_of(v, n));
        return best > 1;
      });
      return best > 1;
    });
    info.d = best;
  }

  // Minimum over D^⊥s \ {0}.
  if (dual.dim() > 0) {
    int best = std::numeric_limits<int>::max();
    for_each_combination(dual.basis(), f, [&](const std::vector<Scalar>& v, Index step) {
      if (step >= 0) best = std::min(best, weight_of(v, n));
      return best > 1;
    });
    info.min_dual_weight = best;
  }
  info.pure = info.d.has_value() && info.min_dual_weight == info.d;
  return info;
}

DistanceInfo distance(const StabilizerCode& code) { return code.distance_info(); }

Syndrome syndrome(const StabilizerCode& code, const SympVector& err) {
  if (err.num_positions() != code.n() || !(err.field() == code.field())) {
    throw std::invalid_argument("syndrome: error has " + std::to_string(err.num_positions()) +
                                " positions, code has " + std::to_string(code.n()));
  }
  const FpMatrix check = symp_check_matrix(code.stabilizer().basis(), code.n(), code.field());
  FpVector s = (check * err.coords().transpose()).transpose();
  return {reduced(s, code.field())};
}

PositionMask mask_of(std::span<const int> positions) {
  PositionMask m = 0;
  for (int pos : positions) {
    if (pos < 0 || pos >= 64) throw std::out_of_range("position out of range for mask");
    m |= PositionMask{1} << pos;
  }
  return m;
}

LogicalClass logical_class(const StabilizerCode& code, const SympVector& residual) {
  LogicalClass out{LogicalClass::Kind::identity, code.stabilizer().reduce(residual)};
  if (!code.dual().contains(residual)) {
    out.kind = LogicalClass::Kind::non_correctable;
  } else if (!out.representative.is_zero()) {
    out.kind = LogicalClass::Kind::logical;
  }
  return out;
}

SyndromeDecoder::SyndromeDecoder(StabilizerCode code, PositionMask frozen, Mode mode)
    : code_(std::move(code)),
      frozen_(frozen),
      check_(symp_check_matrix(code_.stabilizer().basis(), code_.n(), code_.field())) {
  const int n = code_.n();
  for (int c = 0; c < 2 * n; ++c) {
    if (!((frozen_ >> (c % n)) & 1U)) free_coords_.push_back(c);
  }
  const bool small = power(code_.field().modulus(), static_cast<int>(free_coords_.size())) <=
                     kMaxTableEnumeration;
  switch (mode) {
    case Mode::automatic: use_tables_ = small; break;
    case Mode::table:
      if (!small) throw std::length_error("syndrome table would exceed 2^20 entries");
      use_tables_ = true;
      break;
    case Mode::search: use_tables_ = false; break;
  }
}

std::uint64_t SyndromeDecoder::syndrome_index(const Syndrome& s) const {
  std::uint64_t idx = 0;
  const auto p = static_cast<std::uint64_t>(code_.field().modulus());
  for (Index i = 0; i < s.values.cols(); ++i) idx = idx * p + static_cast<std::uint64_t>(s.values(i));
  return idx;
}

SympVector SyndromeDecoder::vector_at(std::int64_t ordinal) const {
  const int p = code_.field().modulus();
  FpVector c = FpVector::Zero(2 * code_.n());
  for (size_t j = free_coords_.size(); j-- > 0;) {
    c(free_coords_[j]) = static_cast<Scalar>(ordinal % p);
    ordinal /= p;
  }
  return {code_.field(), std::move(c)};
}

SyndromeDecoder::Table SyndromeDecoder::build_table(PositionMask erased) const {
  const PrimeField& f = code_.field();
  const int p = f.modulus();
  const int n = code_.n();
  const Index m = check_.rows();
  const auto free_count = free_coords_.size();

  std::uint64_t syndromes = 1;
  for (Index i = 0; i < m; ++i) syndromes *= static_cast<std::uint64_t>(p);
  Table t;
  t.leader.assign(syndromes, -1);
  std::vector<int> best(syndromes, std::numeric_limits<int>::max());

  std::vector<Scalar> v(static_cast<size_t>(2 * n), 0);
  std::vector<Scalar> s(static_cast<size_t>(m), 0);
  std::vector<int> digit(free_count, 0);
  auto record = [&](std::int64_t ordinal) {
    std::uint64_t idx = 0;
    for (Index i = 0; i < m; ++i) idx = idx * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(s[static_cast<size_t>(i)]);
    const int w = weight_of(v, n, erased);
    if (w < best[idx]) {
      best[idx] = w;
      t.leader[idx] = ordinal;
    }
  };

  // Ordinal digits are big-endian over free coordinates, so ordinal order is
  // lexicographic order and the first minimum found is the tie-break winner.
  std::int64_t ordinal = 0;
  record(ordinal);
  for (;;) {
    size_t j = free_count;
    bool done = true;
    while (j-- > 0) {
      const auto col = static_cast<Index>(free_coords_[j]);
      v[static_cast<size_t>(col)] = f.add(v[static_cast<size_t>(col)], 1);
      for (Index i = 0; i < m; ++i) {
        if (check_(i, col) != 0) s[static_cast<size_t>(i)] = f.add(s[static_cast<size_t>(i)], check_(i, col));
      }
      if (++digit[j] < p) {
        done = false;
        break;
      }
      digit[j] = 0;
    }
    if (done) break;
    record(++ordinal);
  }
  return t;
}

const SyndromeDecoder::Table& SyndromeDecoder::table_for(PositionMask erased) const {
  {
    std::shared_lock lock(mutex_);
    auto it = tables_.find(erased);
    if (it != tables_.end()) return *it->second;
  }
  auto built = std::make_unique<Table>(build_table(erased));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = tables_.try_emplace(erased, std::move(built));
  return *it->second;
}

SympVector SyndromeDecoder::search(const Syndrome& s, PositionMask erased) const {
  const PrimeField& f = code_.field();
  const int p = f.modulus();
  const int n = code_.n();

  std::vector<int> open;  // non-erased, non-frozen positions
  for (int i = 0; i < n; ++i) {
    if (!((frozen_ >> i) & 1U) && !((erased >> i) & 1U)) open.push_back(i);
  }

  FpVector coords = FpVector::Zero(2 * n);
  std::optional<SympVector> best;
  // Assigns positions in order; `budget` counts remaining nonzero open positions.
  std::function<void(int, int)> rec = [&](int pos, int budget) {
    if (pos == n) {
      if (budget != 0) return;
      SympVector cand(f, coords);
      if (syndrome(code_, cand) == s && (!best || cand < *best)) best = std::move(cand);
      return;
    }
    const bool frozen = (frozen_ >> pos) & 1U;
    const bool erased_here = (erased >> pos) & 1U;
    if (frozen) {
      rec(pos + 1, budget);
      return;
    }
    for (Scalar a = 0; a < p; ++a) {
      for (Scalar b = 0; b < p; ++b) {
        const bool nonzero = a != 0 || b != 0;
        if (!erased_here && nonzero && budget == 0) continue;
        coords(pos) = a;
        coords(n + pos) = b;
        rec(pos + 1, (!erased_here && nonzero) ? budget - 1 : budget);
      }
    }
    coords(pos) = 0;
    coords(n + pos) = 0;
  };
  for (int w = 0; w <= static_cast<int>(open.size()); ++w) {
    rec(0, w);
    if (best) return *best;
  }
  throw std::domain_error("syndrome is not reachable by any admissible error");
}

SympVector SyndromeDecoder::decode(const Syndrome& s, PositionMask erased) const {
  if (s.values.cols() != code_.num_generators()) {
    throw std::invalid_argument("syndrome length " + std::to_string(s.values.cols()) +
                                " does not match " + std::to_string(code_.num_generators()) +
                                " generators");
  }
  if (!use_tables_) return search(s, erased);
  const Table& t = table_for(erased);
  const std::int64_t ordinal = t.leader[syndrome_index(s)];
  if (ordinal < 0) throw std::domain_error("syndrome is not reachable by any admissible error");
  return vector_at(ordinal);
}

SympVector decode(const StabilizerCode& code, const Syndrome& s, PositionMask erased) {
  return SyndromeDecoder(code).decode(s, erased);
}

}  // namespace edp
