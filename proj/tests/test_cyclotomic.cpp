#include "absparse/cyclotomic.hpp"

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "absparse/error.hpp"
#include "absparse/rng.hpp"

namespace absparse {
namespace {

using Terms = std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>>;

CycRational val(const Primes& primes, const Terms& terms, long den = 1) {
  return CycRational(CycInt::from_terms(primes, terms), den);
}

CycRational w(std::uint32_t p, std::uint64_t e = 1) { return val({p}, {{{e}, 1}}); }

CycRational q(const Primes& primes, long n, long d = 1) {
  return CycRational::rational(primes, mpq_class(n, d));
}

// Independent double evaluation straight from the exponent list.
std::complex<double> eval_terms(const Primes& primes, const Terms& terms, double den) {
  std::complex<double> s = 0;
  for (const auto& [e, c] : terms) {
    double angle = 0;
    for (std::size_t k = 0; k < primes.size(); ++k) angle += 2 * M_PI * double(e[k]) / primes[k];
    s += c.get_d() * std::polar(1.0, angle);
  }
  return s / den;
}

CycRational random_value(const Primes& primes, Rng& rng) {
  CycInt num(primes);
  for (auto& c : num.coords()) c = static_cast<long>(rng.below(11)) - 5;
  mpz_class den = 1;
  const auto e = rng.below(3);
  for (std::uint64_t i = 0; i < e; ++i) den *= primes[rng.below(primes.size())];
  return CycRational(num, den);
}

TEST(Canonicalize, CyclotomicPolynomialVanishes) {
  EXPECT_TRUE(val({3}, {{{0}, 1}, {{1}, 1}, {{2}, 1}}).is_zero());
}

TEST(Canonicalize, TopPowerExpands) {
  EXPECT_EQ(w(5, 4), val({5}, {{{0}, -1}, {{1}, -1}, {{2}, -1}, {{3}, -1}}));
  const auto c = w(5, 4).numerator().coords();
  ASSERT_EQ(c.size(), 4u);
  for (const auto& x : c) EXPECT_EQ(x, -1);
}

TEST(Canonicalize, LikeTermsCombine) {
  EXPECT_EQ(val({3}, {{{2}, 2}, {{2}, 1}}), val({3}, {{{2}, 3}}));
  EXPECT_EQ(val({3}, {{{2}, 3}}), val({3}, {{{0}, -3}, {{1}, -3}}));
}

TEST(Multiply, RootsMultiply) { EXPECT_EQ(w(3) * w(3, 2), q({3}, 1)); }

TEST(Multiply, DenominatorNormalizes) {
  const auto v = q({5}, 1, 3) * q({5}, 3);
  EXPECT_EQ(v, q({5}, 1));
  EXPECT_EQ(v.denominator(), 1);
}

TEST(Multiply, FifthRootProduct) {
  const auto a = w(5) - q({5}, 1);
  const auto b = w(5, 4) - q({5}, 1);
  EXPECT_EQ(a * b, val({5}, {{{0}, 2}, {{1}, -1}, {{4}, -1}}));
  const auto n = numeric_eval(a * b).value;
  const auto expect = (std::polar(1.0, 2 * M_PI / 5) - 1.0) * (std::polar(1.0, 8 * M_PI / 5) - 1.0);
  EXPECT_NEAR(std::abs(n - expect), 0, 1e-12);
}

TEST(Conjugate, Roots) {
  EXPECT_EQ(w(5).conj(), w(5, 4));
  EXPECT_EQ(q({5}, 7).conj(), q({5}, 7));
}

TEST(Conjugate, NormOfSqrtMinusThree) {
  const auto v = w(3) - w(3, 2);
  EXPECT_EQ(v.conj() * v, q({3}, 3));
}

TEST(Conjugate, MultiPrime) {
  const auto v = val({2, 3}, {{{1, 1}, 1}});
  EXPECT_EQ(v.conj(), val({2, 3}, {{{1, 2}, 1}}));
  EXPECT_EQ(v.conj().conj(), v);
}

TEST(NormProduct, Examples) {
  EXPECT_EQ(galois_norm_product({3}, {{{1}, 1}, {{0}, -1}}), 3);
  EXPECT_EQ(galois_norm_product({3}, {{{0}, 2}}), 4);
  EXPECT_EQ(galois_norm_product({5}, {{{0}, 1}, {{1}, 1}, {{2}, 1}, {{3}, 1}, {{4}, 1}}), 0);
  EXPECT_EQ(galois_norm_product({7}, {{{0}, 1}}), 1);
}

TEST(NormProduct, RandomPolynomialsAreNonzeroIntegers) {
  Rng rng(11);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    int nonzero = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      Terms terms;
      for (std::uint64_t e = 0; e < 2 * p; ++e) terms.push_back({{e}, static_cast<long>(rng.below(7)) - 3});
      const CycInt g = CycInt::from_terms({p}, terms);
      const mpz_class n = galois_norm_product(g);
      if (g.is_zero()) {
        EXPECT_EQ(n, 0);
        continue;
      }
      ++nonzero;
      EXPECT_GE(abs(n), 1) << "p=" << p;
    }
    EXPECT_GT(nonzero, 900);
  }
}

TEST(RawL1, SumsAbsoluteCoefficients) {
  EXPECT_EQ(raw_l1_norm({{{0}, -3}, {{4}, 2}}), 5);
}

TEST(NumericEval, Examples) {
  const auto a = numeric_eval(w(3));
  EXPECT_NEAR(a.value.real(), -0.5, 1e-15);
  EXPECT_NEAR(a.value.imag(), std::sqrt(3.0) / 2, 1e-15);
  const auto b = numeric_eval(q({5}, 1, 25));
  EXPECT_NEAR(b.value.real(), 0.04, 1e-17);
  EXPECT_EQ(b.value.imag(), 0.0);
  const Terms t = {{{0}, -5}, {{1}, 5}, {{2}, -5}, {{3}, 1}, {{4}, 1}};
  const auto c = numeric_eval(val({5}, t, 25));
  EXPECT_NEAR(std::abs(c.value), std::abs(eval_terms({5}, t, 25)), 1e-14);
  EXPECT_NEAR(std::abs(c.value), 0.011672, 1e-6);
}

TEST(NumericEval, RadiusCoversHighPrecisionValue) {
  Rng rng(5);
  for (const Primes& primes : {Primes{3}, Primes{5}, Primes{7}, Primes{2, 3}, Primes{3, 5}}) {
    for (int i = 0; i < 200; ++i) {
      const auto v = random_value(primes, rng);
      const auto n = numeric_eval(v);
      const auto re = real_enclosure(v, 256);
      const double mid = mpq_class((re.lo + re.hi) / 2).get_d();
      EXPECT_LE(std::abs(n.value.real() - mid), n.radius);
    }
  }
}

TEST(MagnitudeSquared, Examples) {
  const auto a = magnitude_squared(w(7));
  EXPECT_EQ(a.exact, q({7}, 1));
  const auto b = magnitude_squared(w(3) - w(3, 2));
  EXPECT_EQ(b.exact, q({3}, 3));
  const auto c = magnitude_squared(q({5}, 1) + w(5));
  EXPECT_EQ(c.exact, val({5}, {{{0}, 2}, {{1}, 1}, {{4}, 1}}));
  const double target = 4 * std::cos(M_PI / 5) * std::cos(M_PI / 5);
  EXPECT_LE(c.bounds.lo.get_d(), target + 1e-15);
  EXPECT_GE(c.bounds.hi.get_d(), target - 1e-15);
  EXPECT_LT(mpq_class(c.bounds.hi - c.bounds.lo).get_d(), 1e-30);
}

TEST(MagnitudeSquared, IntervalContainsNumericValue) {
  Rng rng(9);
  for (const Primes& primes : {Primes{3}, Primes{5}, Primes{2, 5}}) {
    for (int i = 0; i < 200; ++i) {
      const auto v = random_value(primes, rng);
      const auto m = magnitude_squared(v);
      const auto n = numeric_eval(v);
      const double mag = std::norm(n.value);
      const double slack = 2 * std::abs(n.value) * n.radius + n.radius * n.radius + 1e-15 * mag;
      EXPECT_GE(mag + slack, m.bounds.lo.get_d());
      EXPECT_LE(mag - slack, m.bounds.hi.get_d());
    }
  }
}

TEST(CompareReal, DecidesExactly) {
  const auto golden = magnitude_squared(q({5}, 1) + w(5)).exact;  // φ + 1
  EXPECT_EQ(compare_real(golden, mpq_class(2618, 1000)), 1);
  EXPECT_EQ(compare_real(golden, mpq_class(2619, 1000)), -1);
  EXPECT_EQ(compare_real(q({5}, 3, 4), mpq_class(3, 4)), 0);
  EXPECT_EQ(compare_real(golden, golden), 0);
  // ω + ω⁴ = (√5 − 1)/2 against 0.618033988749894
  const auto x = w(5) + w(5, 4);
  EXPECT_EQ(compare_real(x, mpq_class("618033988749894/1000000000000000")), 1);
  EXPECT_EQ(compare_real(x, mpq_class("618033988749895/1000000000000000")), -1);
}

TEST(RingAxioms, RandomTriples) {
  Rng rng(1234);
  for (const Primes& primes : {Primes{2}, Primes{3}, Primes{5}, Primes{7}, Primes{2, 3}, Primes{3, 5}}) {
    for (int i = 0; i < 1000 / 6 + 1; ++i) {
      const auto a = random_value(primes, rng);
      const auto b = random_value(primes, rng);
      const auto c = random_value(primes, rng);
      EXPECT_EQ(a * (b * c), (a * b) * c);
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a + (b + c), (a + b) + c);
      EXPECT_EQ(a - a, CycRational(primes));
      EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
    }
  }
}

TEST(Granular, Examples) {
  const std::int64_t k1[] = {1};
  const std::int64_t k2[] = {2};
  EXPECT_TRUE(is_granular(q({2}, 1, 2), k1));
  const Terms t = {{{0}, -5}, {{1}, 5}, {{2}, -5}, {{3}, 1}, {{4}, 1}};
  const auto v = val({5}, t, 25);
  EXPECT_EQ(v.numerator().coords(), (std::vector<mpz_class>{-6, 4, -6, 0}));
  EXPECT_EQ(v.denominator(), 25);
  EXPECT_TRUE(is_granular(v, k2));
  EXPECT_FALSE(is_granular(v, k1));
  const std::int64_t k0[] = {0};
  EXPECT_TRUE(is_granular(CycRational(Primes{5}), k0));
  const std::int64_t bad[] = {-1};
  EXPECT_THROW(is_granular(v, bad), Error);
}

TEST(NearestGranular, ExactValueHasZeroDistance) {
  const std::int64_t k[] = {2};
  const auto v = val({5}, {{{1}, 3}, {{2}, -7}}, 25);
  const auto g = nearest_granular(v, k);
  EXPECT_EQ(g.candidate, v);
  EXPECT_EQ(g.distance_bound, 0.0);
}

TEST(NearestGranular, RecoversPerturbedValue) {
  const std::int64_t k[] = {1};
  const auto g = val({3}, {{{0}, 2}, {{1}, -1}}, 3);
  const auto v = g + q({3}, 1, 1000000);
  const auto r = nearest_granular(v, k);
  EXPECT_EQ(r.candidate, g);
  EXPECT_LE(r.distance_bound, 1e-5);
  EXPECT_GE(r.distance_bound, 1e-6);
}

TEST(NearestGranular, TiesRoundToEven) {
  const std::int64_t k[] = {1};
  EXPECT_EQ(nearest_granular(q({3}, 1, 6), k).candidate, q({3}, 0));
  EXPECT_EQ(nearest_granular(q({3}, 1, 2), k).candidate, q({3}, 2, 3));
  const auto r = nearest_granular(q({3}, -1, 6), k);
  EXPECT_EQ(r.candidate, q({3}, 0));
  EXPECT_GT(r.distance_bound, 1.0 / 6 - 1e-12);
  EXPECT_LT(r.distance_bound, 1.0 / 6 + 1e-12);
}

TEST(Text, RendersCanonicalForm) {
  const Terms t = {{{0}, -5}, {{1}, 5}, {{2}, -5}, {{3}, 1}, {{4}, 1}};
  EXPECT_EQ(to_string(val({5}, t, 25)), "(-6 + 4*w5 - 6*w5^2)/25");
  EXPECT_EQ(to_string(q({5}, 0)), "0");
  EXPECT_EQ(to_string(q({5}, -1, 4)), "-1/4");
  EXPECT_EQ(to_string(w(3)), "w3");
  EXPECT_EQ(to_string(val({3, 5}, {{{1, 2}, -2}})), "-2*w3*w5^2");
  EXPECT_EQ(to_string(val({2, 3}, {{{1, 2}, -2}})), "-2 - 2*w3");
}

TEST(Text, ParseInvertsRender) {
  Rng rng(3);
  for (const Primes& primes : {Primes{3}, Primes{5}, Primes{2, 3}, Primes{3, 5, 7}}) {
    for (int i = 0; i < 100; ++i) {
      const auto v = random_value(primes, rng);
      EXPECT_EQ(parse_cyclotomic(primes, to_string(v)), v) << to_string(v);
    }
  }
  EXPECT_EQ(parse_cyclotomic({5}, "w5^4"), w(5, 4));
  EXPECT_THROW(parse_cyclotomic({5}, "w7"), ParseError);
  EXPECT_THROW(parse_cyclotomic({5}, "(1 + w5"), ParseError);
  EXPECT_THROW(parse_cyclotomic({5}, "1/0"), ParseError);
}

TEST(Rational, ToRational) {
  EXPECT_EQ(q({3}, 6, 9).to_rational(), mpq_class(2, 3));
  EXPECT_THROW(w(3).to_rational(), Error);
  EXPECT_TRUE((w(5) + w(5, 4)).is_real());
  EXPECT_FALSE(w(5).is_real());
}

TEST(Mismatch, DifferentPrimeListsThrow) { EXPECT_THROW(w(3) + w(5), Error); }

}  // namespace
}  // namespace absparse
