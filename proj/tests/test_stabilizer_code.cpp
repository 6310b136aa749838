#include "edp/catalog.hpp"
#include "edp/stabilizer_code.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace edp;
using edp::oracle::Tuple;

namespace {

SympVector V(int p, const char* s) { return SympVector::parse(PrimeField(p), s); }

StabilizerCode code_of(int p, std::initializer_list<const char*> rows) {
  std::vector<SympVector> gens;
  for (const char* r : rows) gens.push_back(V(p, r));
  return make_code(PrimeField(p), gens.front().num_positions(), gens);
}

StabilizerCode six42() { return code_of(2, {"111111|000000", "000000|111111"}); }

const StabilizerCode& catalog_code(const std::string& name) { return find_entry(builtin_catalog(), name)->code; }

SympVector to_vector(const PrimeField& f, const Tuple& t) {
  FpVector v(static_cast<Index>(t.size()));
  for (size_t i = 0; i < t.size(); ++i) v(static_cast<Index>(i)) = t[i];
  return {f, v};
}

// Random self-orthogonal code: extend a random subspace.
StabilizerCode random_code(std::mt19937_64& rng, const PrimeField& f, int n, int rows) {
  return StabilizerCode(symp_extend(oracle::random_subspace(rng, f, n, rows)).extended);
}

int restricted_weight(const Tuple& t, PositionMask erased) {
  const size_t n = t.size() / 2;
  int w = 0;
  for (size_t i = 0; i < n; ++i) w += !((erased >> i) & 1U) && (t[i] != 0 || t[n + i] != 0);
  return w;
}

// Lexicographically first minimal-weight vector per syndrome, frozen positions zero.
std::map<Tuple, Tuple> brute_leaders(const StabilizerCode& code, PositionMask erased, PositionMask frozen = 0) {
  const PrimeField& f = code.field();
  const int n = code.n();
  std::map<Tuple, Tuple> best;
  for (const Tuple& t : oracle::all_tuples(2 * n, f.modulus())) {
    bool on_frozen = false;
    for (int i = 0; i < n; ++i) {
      if (((frozen >> i) & 1U) && (t[static_cast<size_t>(i)] || t[static_cast<size_t>(n + i)])) on_frozen = true;
    }
    if (on_frozen) continue;
    const FpVector s = syndrome(code, to_vector(f, t)).values;
    const Tuple key(s.data(), s.data() + s.size());
    auto it = best.find(key);
    if (it == best.end() || restricted_weight(t, erased) < restricted_weight(it->second, erased)) best[key] = t;
  }
  return best;
}

void expect_decoder_matches_brute_force(const SyndromeDecoder& dec, PositionMask erased) {
  const StabilizerCode& code = dec.code();
  for (const auto& [s, leader] : brute_leaders(code, erased, dec.frozen())) {
    Syndrome syn;
    syn.values = FpVector(static_cast<Index>(s.size()));
    for (size_t i = 0; i < s.size(); ++i) syn.values(static_cast<Index>(i)) = s[i];
    EXPECT_EQ(oracle::tuple_of(dec.decode(syn, erased)), leader) << "erased mask " << erased;
  }
}

}  // namespace

TEST(MakeCode, Examples) {
  EXPECT_EQ(six42().k(), 4);
  EXPECT_EQ(code_of(2, {"1|0"}).k(), 0);
  EXPECT_THROW(code_of(2, {"1|0", "0|1"}), CodeConstructionError);
}

TEST(MakeCode, ErrorNamesOffendingPair) {
  try {
    code_of(2, {"11|00", "00|11", "10|00", "00|10"});
    FAIL() << "expected a construction error";
  } catch (const CodeConstructionError& e) {
    const std::string what = e.what();
    // First failing pair in scan order: XX against Z1.
    EXPECT_NE(what.find("generators 1 (11|00) and 4 (00|10)"), std::string::npos) << what;
  }
}

TEST(Distance, Examples) {
  const DistanceInfo six = six42().distance_info();
  EXPECT_EQ(six.d, 2);
  EXPECT_TRUE(six.pure);

  const DistanceInfo trivial = distance(code_of(2, {"1|0"}));
  EXPECT_FALSE(trivial.d.has_value());

  const DistanceInfo five = catalog_code("five_qubit").distance_info();
  EXPECT_EQ(five.d, 3);
  EXPECT_TRUE(five.pure);
}

TEST(Distance, MatchesBruteForceOnRandomCodes) {
  for (int p : {2, 3}) {
    const PrimeField f(p);
    std::mt19937_64 rng(700 + p);
    const int max_n = p == 2 ? 4 : 3;
    for (int iter = 0; iter < 60; ++iter) {
      const int n = 1 + iter % max_n;
      const StabilizerCode code = random_code(rng, f, n, 1 + iter % n);
      if (code.n() > (p == 2 ? 6 : 4)) continue;
      const auto span = oracle::span_set(code.stabilizer().basis(), p);
      const oracle::BruteDistance brute = oracle::brute_distance(span, code.n(), p);
      const DistanceInfo& info = code.distance_info();
      EXPECT_EQ(info.d, brute.d);
      EXPECT_EQ(info.min_dual_weight, brute.min_dual);
      EXPECT_EQ(info.pure, brute.d.has_value() && brute.d == brute.min_dual);
    }
  }
}

TEST(Syndrome, Examples) {
  const StabilizerCode c = six42();
  const PrimeField f(2);
  EXPECT_TRUE(syndrome(c, SympVector::zero(f, 6)).values.isZero());
  FpVector expected(2);
  expected << 0, 1;
  EXPECT_EQ(syndrome(c, V(2, "100000|000000")).values, expected);
  EXPECT_TRUE(syndrome(c, V(2, "111111|111111")).values.isZero());
  EXPECT_THROW(syndrome(c, V(2, "10|00")), std::invalid_argument);
}

TEST(Syndrome, IsLinear) {
  std::mt19937_64 rng(31);
  for (int p : {2, 3, 5}) {
    const PrimeField f(p);
    for (int iter = 0; iter < 100; ++iter) {
      const StabilizerCode code = random_code(rng, f, 3, 2);
      const SympVector e1 = oracle::random_vector(rng, f, code.n()), e2 = oracle::random_vector(rng, f, code.n());
      const FpVector sum = syndrome(code, e1).values + syndrome(code, e2).values;
      EXPECT_EQ(syndrome(code, e1 + e2).values, reduced(sum, f));
    }
  }
}

TEST(Decode, Examples) {
  const StabilizerCode c = six42();
  const PrimeField f(2);
  EXPECT_EQ(decode(c, syndrome(c, SympVector::zero(f, 6))), SympVector::zero(f, 6));
  const SympVector x1 = V(2, "100000|000000");
  EXPECT_EQ(decode(c, syndrome(c, x1), mask_of(std::vector<int>{0})), x1);

  const StabilizerCode& five = catalog_code("five_qubit");
  const SympVector x2 = V(2, "01000|00000");
  EXPECT_EQ(decode(five, syndrome(five, x2)), x2);
}

TEST(Decode, UnreachableSyndromeThrows) {
  const StabilizerCode c = six42();
  const SyndromeDecoder dec(c, mask_of(std::vector<int>{0, 1, 2, 3, 4, 5}));
  Syndrome s;
  s.values = FpVector::Ones(2);
  EXPECT_THROW(dec.decode(s), std::domain_error);
}

TEST(Decode, OptimalAgainstFullEnumeration) {
  for (const CatalogEntry& e : builtin_catalog()) {
    if (e.n > 6) continue;
    const SyndromeDecoder dec(e.code);
    for (PositionMask erased = 0; erased < (PositionMask{1} << e.n); ++erased) {
      if (std::popcount(erased) > 2) continue;
      expect_decoder_matches_brute_force(dec, erased);
    }
  }
}

TEST(Decode, FrozenPositionsStayClean) {
  const StabilizerCode c = six42();
  const SyndromeDecoder dec(c, mask_of(std::vector<int>{5}));
  expect_decoder_matches_brute_force(dec, 0);
  expect_decoder_matches_brute_force(dec, mask_of(std::vector<int>{2}));
}

TEST(Decode, TableAndSearchModesAgree) {
  std::mt19937_64 rng(41);
  for (int p : {2, 3}) {
    const PrimeField f(p);
    for (int iter = 0; iter < 20; ++iter) {
      const StabilizerCode code = random_code(rng, f, 3, 2);
      const SyndromeDecoder table(code, 0, SyndromeDecoder::Mode::table);
      const SyndromeDecoder search(code, 0, SyndromeDecoder::Mode::search);
      EXPECT_TRUE(table.uses_tables());
      EXPECT_FALSE(search.uses_tables());
      for (int trial = 0; trial < 30; ++trial) {
        const Syndrome s = syndrome(code, oracle::random_vector(rng, f, code.n()));
        const PositionMask erased = rng() & ((PositionMask{1} << code.n()) - 1) & 0b101;
        EXPECT_EQ(table.decode(s, erased), search.decode(s, erased));
      }
    }
  }
}

TEST(Decode, OptimalOnRandomTernaryCodes) {
  std::mt19937_64 rng(43);
  const PrimeField f(3);
  for (int iter = 0; iter < 6; ++iter) {
    const StabilizerCode code = random_code(rng, f, 3, 1 + iter % 3);
    if (code.n() > 4) continue;
    const SyndromeDecoder dec(code);
    expect_decoder_matches_brute_force(dec, 0);
    expect_decoder_matches_brute_force(dec, 1);
  }
}

TEST(LogicalClass, Examples) {
  const StabilizerCode c = six42();
  EXPECT_TRUE(logical_class(c, V(2, "111111|000000")).is_identity());
  EXPECT_EQ(logical_class(c, V(2, "110000|000000")).kind, LogicalClass::Kind::logical);
  EXPECT_EQ(logical_class(c, V(2, "100000|000000")).kind, LogicalClass::Kind::non_correctable);
}

// Exhaustive round trips for catalog codes with n <= 6.
TEST(Guarantees, ErrorsBelowHalfDistanceAreCorrected) {
  for (const CatalogEntry& e : builtin_catalog()) {
    if (e.n > 6) continue;
    const PrimeField& f = e.code.field();
    for (const Tuple& t : oracle::all_tuples(2 * e.n, f.modulus())) {
      if (2 * oracle::tuple_weight(t) >= e.d) continue;
      const SympVector err = to_vector(f, t);
      EXPECT_TRUE(logical_class(e.code, err - decode(e.code, syndrome(e.code, err))).is_identity()) << e.name;
    }
  }
}

TEST(Guarantees, MixedErrorsAndErasuresAreCorrected) {
  for (const CatalogEntry& e : builtin_catalog()) {
    if (e.n > 6) continue;
    const PrimeField& f = e.code.field();
    const SyndromeDecoder dec(e.code);
    for (PositionMask erased = 0; erased < (PositionMask{1} << e.n); ++erased) {
      const int ne = std::popcount(erased);
      if (ne >= e.d) continue;
      for (const Tuple& t : oracle::all_tuples(2 * e.n, f.modulus())) {
        const int outside = restricted_weight(t, erased);
        if (2 * outside + ne >= e.d) continue;
        const SympVector err = to_vector(f, t);
        EXPECT_TRUE(logical_class(e.code, err - dec.decode(syndrome(e.code, err), erased)).is_identity())
            << e.name << " erased " << erased << " error " << err.to_string();
      }
    }
  }
}
