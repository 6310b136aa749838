#include "edp/symplectic.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace edp;
using edp::oracle::random_subspace;
using edp::oracle::random_vector;

namespace {

SympVector V(int p, const char* s) { return SympVector::parse(PrimeField(p), s); }

SympSubspace S(int p, std::initializer_list<const char*> rows) {
  std::vector<SympVector> gens;
  for (const char* r : rows) gens.push_back(V(p, r));
  return SympSubspace::span(PrimeField(p), gens.front().num_positions(), gens);
}

const std::vector<int> kLast6{5};

}  // namespace

TEST(SympVector, ParseAndPrint) {
  const SympVector v = V(3, "120|021");
  EXPECT_EQ(v.num_positions(), 3);
  EXPECT_EQ(v.x(0), 1);
  EXPECT_EQ(v.z(2), 1);
  EXPECT_EQ(v.to_string(), "120|021");
  EXPECT_THROW(V(2, "102|000"), std::invalid_argument);
  EXPECT_THROW(V(2, "10|000"), std::invalid_argument);
  EXPECT_THROW(V(2, "10000"), std::invalid_argument);
}

TEST(SymplecticProduct, Examples) {
  EXPECT_EQ(symp_product(V(2, "10|00"), V(2, "00|10")), 1);
  EXPECT_EQ(symp_product(V(5, "20|10"), V(5, "10|30")), 0);
  EXPECT_EQ(symp_product(V(3, "12|01"), V(3, "12|01")), 0);
  EXPECT_THROW(symp_product(V(2, "1|0"), V(2, "10|00")), std::invalid_argument);
  EXPECT_THROW(symp_product(V(2, "1|0"), V(3, "1|0")), std::invalid_argument);
}

TEST(SymplecticWeight, Examples) {
  EXPECT_EQ(symp_weight(V(2, "101|011")), 3);
  EXPECT_EQ(symp_weight(SympVector::zero(PrimeField(2), 4)), 0);
  EXPECT_EQ(symp_weight(V(3, "02|00")), 1);
}

TEST(Star, Examples) {
  EXPECT_EQ(star(V(3, "12|21")), V(3, "12|12"));
  const SympVector v = V(2, "1101|0111");
  EXPECT_EQ(star(v), v);
  const SympVector w = V(5, "1234|4321");
  EXPECT_EQ(star(star(w)), w);
}

TEST(SymplecticDual, Examples) {
  const PrimeField f(2);
  EXPECT_EQ(symp_dual(S(2, {"1|0"})), S(2, {"1|0"}));
  EXPECT_EQ(symp_dual(SympSubspace::zero(f, 3)), SympSubspace::full(f, 3));
  EXPECT_EQ(symp_dual(SympSubspace::full(f, 3)), SympSubspace::zero(f, 3));
}

TEST(SelfOrthogonal, Examples) {
  EXPECT_TRUE(is_self_orthogonal(S(2, {"111111|000000", "000000|111111"})));
  EXPECT_FALSE(is_self_orthogonal(S(2, {"1|0", "0|1"})));
  EXPECT_TRUE(is_self_orthogonal(SympSubspace::zero(PrimeField(3), 2)));
}

TEST(Gram, Examples) {
  EXPECT_TRUE(gram(S(2, {"111111|000000", "000000|111111"})).isZero());
  FpMatrix hyp(2, 2);
  hyp << 0, 1, 1, 0;
  EXPECT_EQ(gram(S(2, {"1|0", "0|1"})), hyp);
  const SympSubspace punctured = puncture(S(2, {"111111|000000", "000000|111111"}), kLast6);
  EXPECT_EQ(gram(punctured), hyp);
}

TEST(Puncture, Examples) {
  const SympSubspace c = S(2, {"111111|000000", "000000|111111"});
  EXPECT_EQ(puncture(c, std::vector<int>{}), c);
  EXPECT_EQ(puncture(c, kLast6), S(2, {"11111|00000", "00000|11111"}));
  const SympSubspace dropped = puncture(S(2, {"10|00"}), std::vector<int>{0});
  EXPECT_EQ(dropped.dim(), 0);
  EXPECT_THROW(puncture(c, std::vector<int>{6}), std::out_of_range);
}

TEST(Extend, Examples) {
  const SympSubspace so = S(2, {"111111|000000", "000000|111111"});
  const SymplecticExtension e0 = symp_extend(so);
  EXPECT_EQ(e0.added, 0);
  EXPECT_EQ(e0.extended, so);

  const SymplecticExtension e1 = symp_extend(S(2, {"1|0", "0|1"}));
  EXPECT_EQ(e1.added, 1);
  EXPECT_EQ(e1.extended, S(2, {"11|00", "00|11"}));

  const SympSubspace d = puncture(so, kLast6);
  const SymplecticExtension e2 = symp_extend(d);
  EXPECT_EQ(e2.added, 1);
  EXPECT_TRUE(is_self_orthogonal(e2.extended));
  EXPECT_EQ(e2.extended.num_positions(), 6);
  EXPECT_EQ(puncture(e2.extended, kLast6), d);
}

class SymplecticProperties : public ::testing::TestWithParam<int> {};

TEST_P(SymplecticProperties, ProductIsAlternatingBilinear) {
  const PrimeField f(GetParam());
  std::mt19937_64 rng(100 + GetParam());
  std::uniform_int_distribution<int> scalar(0, f.modulus() - 1);
  for (int iter = 0; iter < 1000; ++iter) {
    const int n = 1 + iter % 5;
    const SympVector u = random_vector(rng, f, n), v = random_vector(rng, f, n), w = random_vector(rng, f, n);
    const Scalar s = scalar(rng);
    EXPECT_EQ(symp_product(u, v), f.neg(symp_product(v, u)));
    EXPECT_EQ(symp_product(u, u), 0);
    EXPECT_EQ(symp_product(u.scaled(s) + v, w), f.add(f.mul(s, symp_product(u, w)), symp_product(v, w)));
    EXPECT_EQ(symp_product(u, v), oracle::tuple_product(oracle::tuple_of(u), oracle::tuple_of(v), f.modulus()));
  }
}

TEST_P(SymplecticProperties, WeightAxioms) {
  const PrimeField f(GetParam());
  std::mt19937_64 rng(200 + GetParam());
  for (int iter = 0; iter < 1000; ++iter) {
    const int n = 1 + iter % 6;
    const SympVector u = random_vector(rng, f, n), v = random_vector(rng, f, n);
    EXPECT_LE(symp_weight(u + v), symp_weight(u) + symp_weight(v));
    EXPECT_EQ(symp_weight(u) == 0, u.is_zero());
    EXPECT_EQ(symp_weight(star(u)), symp_weight(u));
  }
}

TEST_P(SymplecticProperties, DualIsAnInvolutionWithComplementaryDimension) {
  const PrimeField f(GetParam());
  std::mt19937_64 rng(300 + GetParam());
  for (int iter = 0; iter < 200; ++iter) {
    const int n = 1 + iter % 4;
    const SympSubspace s = random_subspace(rng, f, n, iter % (2 * n + 1));
    const SympSubspace dual = symp_dual(s);
    EXPECT_EQ(dual.dim(), 2 * n - s.dim());
    EXPECT_EQ(symp_dual(dual), s);
    EXPECT_EQ(is_self_orthogonal(s), gram(s).isZero());
    EXPECT_EQ(is_self_orthogonal(s), dual.contains(s));
  }
}

TEST_P(SymplecticProperties, DualMatchesBruteForce) {
  const int p = GetParam();
  const PrimeField f(p);
  std::mt19937_64 rng(400 + p);
  const int max_n = p == 2 ? 3 : 2;
  for (int iter = 0; iter < 40; ++iter) {
    const int n = 1 + iter % max_n;
    const SympSubspace s = random_subspace(rng, f, n, iter % (2 * n + 1));
    const auto span = oracle::span_set(s.basis(), p);
    EXPECT_EQ(oracle::span_set(symp_dual(s).basis(), p), oracle::brute_dual(span, n, p));
  }
}

TEST_P(SymplecticProperties, GramIsAlternatingWithEvenRank) {
  const PrimeField f(GetParam());
  std::mt19937_64 rng(500 + GetParam());
  for (int iter = 0; iter < 300; ++iter) {
    const int n = 1 + iter % 5;
    const SympSubspace s = random_subspace(rng, f, n, 1 + iter % (2 * n));
    const GramMatrix g = gram(s);
    for (Index i = 0; i < g.rows(); ++i) {
      EXPECT_EQ(g(i, i), 0);
      for (Index j = 0; j < g.cols(); ++j) EXPECT_EQ(g(i, j), f.neg(g(j, i)));
    }
    EXPECT_EQ(gram_rank(s) % 2, 0);
  }
}

TEST_P(SymplecticProperties, ExtensionIsMinimalAndPuncturesBack) {
  const PrimeField f(GetParam());
  std::mt19937_64 rng(600 + GetParam());
  for (int iter = 0; iter < 300; ++iter) {
    const int n = 1 + iter % 5;
    const SympSubspace d = random_subspace(rng, f, n, iter % (n + 2));
    const SymplecticExtension ext = symp_extend(d);
    EXPECT_TRUE(is_self_orthogonal(ext.extended));
    EXPECT_EQ(ext.extended.dim(), d.dim());
    EXPECT_EQ(ext.added, gram_rank(d) / 2);
    std::vector<int> added;
    for (int i = 0; i < ext.added; ++i) added.push_back(n + i);
    EXPECT_EQ(puncture(ext.extended, added), d);
  }
}

INSTANTIATE_TEST_SUITE_P(SmallPrimes, SymplecticProperties, ::testing::Values(2, 3, 5));
