#include "absparse/functions.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "absparse/error.hpp"
#include "absparse/rng.hpp"

namespace absparse {
namespace {

double modulus(const CycRational& v) { return std::abs(numeric_eval(v).value); }

std::vector<std::int8_t> tbl(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

TEST(Threshold, Tables) {
  EXPECT_EQ(threshold_univariate(5).table(), tbl({-1, -1, -1, 1, 1}));
  EXPECT_EQ(threshold_univariate(3).table(), tbl({-1, -1, 1}));
  EXPECT_THROW(threshold_univariate(2), Error);
}

TEST(Threshold, CoefficientAtTwo) {
  const auto s = dft_exact(threshold_univariate(5));
  EXPECT_NEAR(modulus(s.coefficient(2)), 1 / (5 * std::cos(M_PI / 5)), 1e-14);
  EXPECT_NEAR(modulus(s.coefficient(2)), 0.247214, 1e-6);
}

TEST(And, Tables) {
  EXPECT_EQ(and_n(1).table(), tbl({1, -1}));
  EXPECT_EQ(and_n(2).table(), tbl({1, 1, 1, -1}));
}

TEST(And, SpectrumOfThree) {
  const auto s = dft_exact(and_n(3));
  EXPECT_EQ(s.sparsity(), 8u);
  EXPECT_EQ(s.coefficient(0), CycRational::rational({2}, mpq_class(3, 4)));
  for (std::uint64_t r = 1; r < 8; ++r) {
    EXPECT_EQ(abs(s.coefficient(r).to_rational()), mpq_class(1, 4));
  }
}

TEST(At, Tables) {
  EXPECT_EQ(at_function(5, 1).table(), tbl({1, 1, 1, -1, -1}));
  const auto f = at_function(5, 2);
  const auto t = threshold_univariate(5);
  for (std::uint64_t i = 0; i < 25; ++i) {
    const bool all = t[i / 5] == 1 && t[i % 5] == 1;
    EXPECT_EQ(f[i], all ? -1 : 1);
  }
  EXPECT_THROW(at_function(2, 2), Error);
  EXPECT_NO_THROW(at_function(3, 2));
}

TEST(At, CornerCoefficient) {
  const auto s = dft_exact(at_function(5, 2));
  const double closed = 2 * std::pow(1 / (10 * std::cos(M_PI / 5)), 2);
  EXPECT_NEAR(modulus(s.coefficient(12)), closed, 1e-14);
  EXPECT_NEAR(closed, 0.030557, 1e-6);
}

TEST(Table1, Entries) {
  const auto f = table1_z5sq();
  EXPECT_EQ(f[0], -1);
  EXPECT_EQ(f[1], 1);
  EXPECT_EQ(f[3 * 5 + 3], -1);
  EXPECT_EQ(dft_exact(f).sparsity(), 25u);
}

TEST(Table1, CoefficientAtOneZero) {
  // The transcribed table's coefficient; see README for the comparison with
  // the published value.
  const auto s = dft_exact(table1_z5sq());
  const auto v = s.coefficient(5);
  EXPECT_EQ(v, parse_cyclotomic({5}, "(-1 - 3*w5 - 3*w5^2 - w5^3 - w5^4)/25"));
  EXPECT_NEAR(modulus(v), 0.12944, 1e-5);
}

TEST(Dilate, Examples) {
  const auto f = table1_z5sq();
  EXPECT_EQ(dilate_function(f, 1), f);
  const auto h = dilate_function(f, 2);
  EXPECT_EQ(dft_exact(h).coefficient(5), dft_exact(f).coefficient(10));
  EXPECT_THROW(dilate_function(f, 5), Error);
}

TEST(Dilate, SpectrumRelabels) {
  Rng rng(40);
  for (const GroupSpec& spec : {GroupSpec::single(5, 1), GroupSpec::single(3, 2), GroupSpec::single(7, 1)}) {
    const std::uint32_t p = spec.prime(0);
    for (int k = 0; k < 20; ++k) {
      const auto f = random_function(spec, rng);
      const auto sf = dft_exact(f);
      for (std::uint32_t i = 1; i < p; ++i) {
        const auto sh = dft_exact(dilate_function(f, i));
        EXPECT_EQ(sh.sparsity(), sf.sparsity());
        for (std::uint64_t r = 0; r < spec.order(); ++r) {
          auto c = from_index(spec, r).coords();
          for (auto& x : c) x = x * i % p;
          EXPECT_EQ(sh.coefficient(r), sf.coefficient(GroupElement(spec, c)));
        }
      }
    }
  }
}

TEST(CosetConstant, Examples) {
  Rng rng(41);
  const auto spec = GroupSpec::single(3, 3);
  const auto c = coset_constant_random(spec, ProductSubspace::full(spec), rng);
  EXPECT_EQ(dft_exact(c).sparsity(), 1u);
  for (int i = 0; i < 30; ++i) {
    const ProductSubspace k(spec, {random_subspace(3, 3, 1, rng)});
    const auto f = coset_constant_random(spec, k, rng);
    const auto perp = orthogonal_complement(k);
    const auto s = dft_exact(f);
    EXPECT_LE(s.sparsity(), 9u);
    for (auto r : s.support()) EXPECT_TRUE(perp.contains(from_index(spec, r)));
  }
}

TEST(CosetConstant, ZeroSubspaceGivesAllTables) {
  Rng rng(42);
  const auto spec = GroupSpec::single(2, 2);
  std::set<std::vector<std::int8_t>> seen;
  for (int i = 0; i < 400; ++i) seen.insert(coset_constant_random(spec, ProductSubspace::zero(spec), rng).table());
  EXPECT_EQ(seen.size(), 16u);
}

TEST(FarCertificate, Examples) {
  EXPECT_TRUE(far_certificate(and_n(3), 8).is_zero());
  EXPECT_TRUE(far_certificate(DenseFunction::constant(GroupSpec::single(3, 2)), 1).is_zero());
  Rng rng(43);
  const auto mu = far_certificate(random_function(GroupSpec::single(3, 4), rng), 2);
  EXPECT_GT(compare_real(mu, mpq_class(1, 2)), 0);
}

TEST(Family, DescriptorBuildsEveryFamily) {
  for (const auto* name : {"constant", "and", "threshold", "at", "table1", "coset_constant", "random"}) {
    FamilyDescriptor d;
    d.family = parse_family(name);
    d.p = 3;
    d.n = 2;
    d.kdim = 1;
    d.seed = 5;
    EXPECT_EQ(family_name(d.family), name);
    const auto f = make_family(d);
    EXPECT_EQ(f.size(), f.spec().order());
  }
  EXPECT_THROW(parse_family("nope"), Error);
  FamilyDescriptor bad;
  bad.family = Family::kConstant;
  bad.p = 4;
  EXPECT_THROW(make_family(bad), Error);
}

}  // namespace
}  // namespace absparse
