#include "absparse/group.hpp"

#include <set>

#include <gtest/gtest.h>

#include "absparse/error.hpp"
#include "absparse/rng.hpp"

namespace absparse {
namespace {

GroupElement el(const GroupSpec& spec, std::vector<std::uint32_t> c) { return GroupElement(spec, c); }

CycRational w(const Primes& primes, std::vector<std::uint64_t> e) {
  return CycRational(CycInt::root(primes, e), 1);
}

TEST(GroupSpec, DerivedQuantities) {
  const GroupSpec g({{2, 3}, {3, 2}, {5, 1}});
  EXPECT_EQ(g.order(), 8u * 9 * 5);
  EXPECT_EQ(g.m(), 30u);
  EXPECT_EQ(g.phi_m(), 8u);
  EXPECT_EQ(g.rank(), 6u);
  EXPECT_EQ(g.offset(2), 5u);
  EXPECT_EQ(GroupSpec().order(), 1u);
}

TEST(GroupSpec, RejectsInvalidFactors) {
  EXPECT_THROW(GroupSpec({{4, 1}}), Error);
  EXPECT_THROW(GroupSpec({{3, 1}, {3, 2}}), Error);
  EXPECT_THROW(GroupSpec({{3, 0}}), Error);
}

TEST(GroupElement, RejectsOutOfRangeCoordinates) {
  EXPECT_THROW(el(GroupSpec::single(3, 2), {1, 3}), Error);
  EXPECT_THROW(el(GroupSpec::single(3, 2), {1}), Error);
}

TEST(Character, Examples) {
  const auto z3 = GroupSpec::single(3, 1);
  EXPECT_EQ(character_value(el(z3, {1}), el(z3, {2})), w({3}, {2}));
  const auto z22 = GroupSpec::single(2, 2);
  EXPECT_EQ(character_value(el(z22, {1, 1}), el(z22, {1, 0})), CycRational::rational({2}, -1));
  const GroupSpec z2z3({{2, 1}, {3, 1}});
  EXPECT_EQ(character_value(el(z2z3, {1, 1}), el(z2z3, {1, 2})),
            CycRational::rational({2, 3}, -1) * w({2, 3}, {0, 2}));
}

TEST(Character, SpecMismatchThrows) {
  EXPECT_THROW(character_value(el(GroupSpec::single(3, 1), {1}), el(GroupSpec::single(5, 1), {1})), Error);
}

TEST(Character, Homomorphism) {
  const GroupSpec g({{2, 2}, {3, 2}});
  Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto r = from_index(g, rng.below(g.order()));
    const auto x = from_index(g, rng.below(g.order()));
    const auto y = from_index(g, rng.below(g.order()));
    EXPECT_EQ(character_value(r, x + y), character_value(r, x) * character_value(r, y));
  }
}

TEST(LexIndex, Examples) {
  const auto z32 = GroupSpec::single(3, 2);
  EXPECT_EQ(lex_index(el(z32, {0, 0})), 0u);
  EXPECT_EQ(lex_index(el(z32, {1, 2})), 5u);
  EXPECT_EQ(lex_index(el(GroupSpec({{2, 1}, {3, 1}}), {1, 0})), 3u);
  EXPECT_THROW(from_index(z32, 9), Error);
}

TEST(LexIndex, Bijection) {
  for (const GroupSpec& g : {GroupSpec::single(3, 6), GroupSpec({{2, 3}, {3, 2}, {5, 1}})}) {
    for (std::uint64_t i = 0; i < g.order(); ++i) ASSERT_EQ(lex_index(from_index(g, i)), i);
  }
}

TEST(RrefSolve, Examples) {
  const std::vector<Vec> a = {{1, 2}};
  const std::uint32_t ba[] = {1};
  EXPECT_EQ(rref_solve(3, 2, a, ba), (Vec{1, 0}));
  const std::vector<Vec> b = {{1, 0}, {0, 1}};
  const std::uint32_t bb[] = {2, 1};
  EXPECT_EQ(rref_solve(3, 2, b, bb), (Vec{2, 1}));
  const std::vector<Vec> c = {{1, 1}, {1, 1}};
  const std::uint32_t bc[] = {0, 1};
  EXPECT_FALSE(rref_solve(2, 2, c, bc).has_value());
}

TEST(RrefSolve, SolutionsSatisfySystem) {
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t p = i % 2 ? 5 : 3;
    std::vector<Vec> rows(1 + rng.below(4), Vec(4));
    for (auto& r : rows) for (auto& x : r) x = static_cast<std::uint32_t>(rng.below(p));
    Vec b(rows.size());
    for (auto& x : b) x = static_cast<std::uint32_t>(rng.below(p));
    const auto sol = rref_solve(p, 4, rows, b);
    if (!sol) continue;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += std::uint64_t{rows[j][k]} * (*sol)[k];
      EXPECT_EQ(s % p, b[j]);
    }
  }
}

TEST(Complement, Examples) {
  const std::vector<Vec> v = {{1, 1}};
  const auto h = PrimeSubspace::span(3, 2, v);
  const std::vector<Vec> e = {{1, 2}};
  EXPECT_EQ(h.complement(), PrimeSubspace::span(3, 2, e));
  EXPECT_EQ(PrimeSubspace::zero(5, 1).complement(), PrimeSubspace::full(5, 1));
}

TEST(Complement, RandomSubspaceIsOrthogonal) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto h = random_subspace(3, 4, 2, rng);
    const auto c = h.complement();
    EXPECT_EQ(c.dim(), 2u);
    for (const auto& a : h.elements()) {
      for (const auto& b : c.elements()) {
        std::uint32_t s = 0;
        for (int k = 0; k < 4; ++k) s += a[k] * b[k];
        EXPECT_EQ(s % 3, 0u);
      }
    }
  }
}

TEST(Complement, InvolutionOnAllSubspacesOfZ3Cubed) {
  std::size_t total = 0;
  for (std::size_t d = 0; d <= 3; ++d) {
    const auto subs = enumerate_subspaces(3, 3, d);
    total += subs.size();
    std::set<std::vector<Vec>> distinct;
    for (const auto& h : subs) {
      distinct.insert(h.basis());
      EXPECT_EQ(h.dim(), d);
      EXPECT_EQ(h.complement().dim(), 3 - d);
      EXPECT_EQ(h.complement().complement(), h);
    }
    EXPECT_EQ(distinct.size(), subs.size());
  }
  // Gaussian binomials 1 + 13 + 13 + 1.
  EXPECT_EQ(total, 28u);
}

TEST(RandomSubspace, Examples) {
  Rng rng(1);
  EXPECT_EQ(random_subspace(3, 4, 0, rng), PrimeSubspace::zero(3, 4));
  EXPECT_EQ(random_subspace(3, 4, 4, rng), PrimeSubspace::full(3, 4));
  for (int i = 0; i < 10000; ++i) {
    Rng r(static_cast<std::uint64_t>(i));
    ASSERT_EQ(random_subspace(3, 4, 2, r).dim(), 2u);
  }
}

TEST(Cosets, Counts) {
  const auto spec = GroupSpec::single(3, 2);
  const std::vector<Vec> v = {{1, 2}};
  const ProductSubspace h(spec, {PrimeSubspace::span(3, 2, v)});
  const auto cosets = enumerate_cosets(h);
  ASSERT_EQ(cosets.size(), 3u);
  for (const auto& c : cosets) EXPECT_EQ(c.elements().size(), 3u);
  EXPECT_EQ(enumerate_cosets(ProductSubspace::full(spec)).size(), 1u);
  EXPECT_EQ(enumerate_cosets(ProductSubspace::zero(GroupSpec::single(2, 3))).size(), 8u);
}

TEST(Cosets, PartitionGroup) {
  const GroupSpec spec({{2, 2}, {3, 2}});
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const ProductSubspace h(spec, {random_subspace(2, 2, rng.below(3), rng), random_subspace(3, 2, rng.below(3), rng)});
    std::set<std::uint64_t> seen;
    const auto cosets = enumerate_cosets(h);
    EXPECT_EQ(cosets.size() * h.size(), spec.order());
    for (const auto& c : cosets) {
      for (const auto& x : c.elements()) {
        EXPECT_TRUE(seen.insert(lex_index(x)).second);
        EXPECT_TRUE(c.contains(x));
      }
    }
    EXPECT_EQ(seen.size(), spec.order());
  }
}

TEST(HPerp, CharacterSumOverSubspace) {
  const auto spec = GroupSpec::single(3, 3);
  for (std::size_t d = 0; d <= 3; ++d) {
    for (const auto& part : enumerate_subspaces(3, 3, d)) {
      const ProductSubspace h(spec, {part});
      const auto perp = orthogonal_complement(h);
      const auto members = h.elements();
      for (std::uint64_t i = 0; i < spec.order(); ++i) {
        const auto r = from_index(spec, i);
        CycRational sum(Primes{3});
        for (const auto& x : members) sum += character_value(x, r);
        const long expect = perp.contains(r) ? static_cast<long>(h.size()) : 0;
        EXPECT_EQ(sum, CycRational::rational({3}, expect));
      }
    }
  }
}

TEST(Dilate, Examples) {
  const auto z5 = GroupSpec::single(5, 1);
  EXPECT_EQ(dilate_element(el(z5, {3}), 2), el(z5, {4}));
  EXPECT_EQ(dilate_element(el(z5, {3}), 1), el(z5, {3}));
  const auto z32 = GroupSpec::single(3, 2);
  EXPECT_EQ(dilate_element(el(z32, {1, 2}), 2), el(z32, {2, 1}));
  EXPECT_THROW(dilate_element(el(z5, {3}), 0), Error);
  EXPECT_THROW(dilate_element(el(GroupSpec({{2, 1}, {3, 1}}), {1, 1}), 1), Error);
}

TEST(Guard, TooManyCosets) {
  const auto spec = GroupSpec::single(2, 30);
  EXPECT_THROW(enumerate_cosets(ProductSubspace::zero(spec)), GuardExceeded);
}

}  // namespace
}  // namespace absparse
