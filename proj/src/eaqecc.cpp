#include "edp/eaqecc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace edp {

namespace {

std::optional<int> try_distance(const SympSubspace& d) {
  try {
    return eaqecc_distance(d);
  } catch (const std::length_error&) {
    return std::nullopt;
  }
}

std::vector<int> complement(int n, const std::vector<int>& taken) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(taken.begin(), taken.end(), i)) out.push_back(i);
  }
  return out;
}

}  // namespace

int ebit_count(const SympSubspace& d) { return gram_rank(d) / 2; }

std::optional<int> eaqecc_distance(const SympSubspace& d) {
  return subspace_distance(d, symp_dual(d)).d;
}

std::vector<int> last_positions(int n, int c) {
  if (c < 0 || c > n) throw std::out_of_range("cannot take last " + std::to_string(c) + " of " + std::to_string(n));
  std::vector<int> out(static_cast<size_t>(c));
  std::iota(out.begin(), out.end(), n - c);
  return out;
}

BreedingProtocolSpec convert_pure(const StabilizerCode& code, std::vector<int> punctured) {
  std::sort(punctured.begin(), punctured.end());
  if (std::adjacent_find(punctured.begin(), punctured.end()) != punctured.end()) {
    throw ConversionError("puncture set has repeated positions");
  }
  for (int pos : punctured) {
    if (pos < 0 || pos >= code.n()) {
      throw ConversionError("puncture position " + std::to_string(pos + 1) + " outside 1.." +
                            std::to_string(code.n()));
    }
  }
  const DistanceInfo& info = code.distance_info();
  if (!info.d) throw ConversionError("code has undefined distance");
  if (!info.pure) throw ConversionError("code is not pure");
  const int c = static_cast<int>(punctured.size());
  if (c >= *info.d) {
    throw ConversionError("puncturing " + std::to_string(c) + " positions needs c < d = " +
                          std::to_string(*info.d));
  }

  const SympSubspace d = puncture(code.stabilizer(), punctured);
  const int needed = ebit_count(d);
  if (needed != c || d.dim() != code.stabilizer().dim()) {
    throw std::logic_error("punctured pure code needs " + std::to_string(needed) +
                           " ebits, expected " + std::to_string(c));
  }

  BreedingProtocolSpec spec{code, punctured, complement(code.n(), punctured),
                            EaqeccParams{code.field().modulus(), code.n() - c, code.k(), c, info.d},
                            try_distance(d)};
  return spec;
}

BreedingProtocolSpec build_from_subspace(const SympSubspace& d) {
  SymplecticExtension ext = symp_extend(d);
  const int n = d.num_positions();
  StabilizerCode code(std::move(ext.extended));
  std::vector<int> ebits(static_cast<size_t>(ext.added));
  std::iota(ebits.begin(), ebits.end(), n);
  const std::optional<int> dist = try_distance(d);
  BreedingProtocolSpec spec{code, ebits, complement(code.n(), ebits),
                            EaqeccParams{d.field().modulus(), n, code.k(), ext.added, dist}, dist};
  return spec;
}

BreedingProtocolSpec hashing_spec(const StabilizerCode& code) {
  std::vector<int> all(static_cast<size_t>(code.n()));
  std::iota(all.begin(), all.end(), 0);
  const auto& info = code.distance_info();
  return {code, {}, all, EaqeccParams{code.field().modulus(), code.n(), code.k(), 0, info.d}, info.d};
}

}  // namespace edp
