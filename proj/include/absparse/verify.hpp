#pragma once

// Executable checks of the structural bounds and statistical harnesses for
// the tester's analysis.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "absparse/cyclotomic.hpp"
#include "absparse/group.hpp"
#include "absparse/spectrum.hpp"

namespace absparse {

class Rng;

enum class Verdict { kPass, kFail, kCertified, kInconclusive, kInformational };

std::string verdict_name(Verdict v);

struct Witness {
  std::string character;    // coordinates "(r1,...,rn)"
  std::string coefficient;  // exact textual form
  std::string bound;        // exact rational or cyclotomic form
  std::string detail;
};

/// Monte-Carlo statistic compared against a 3σ band.
struct StatBand {
  std::string name;
  std::uint64_t trials = 0;
  double observed = 0;
  double expected = 0;
  double sigma = 0;
  bool one_sided = false;  // observed ≤ expected + 3σ instead of |observed − expected| ≤ 3σ
  bool within = false;
};

struct VerificationReport {
  std::string check;
  Verdict verdict = Verdict::kPass;
  std::vector<Witness> witnesses;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<StatBand> stats;

  void add(std::string key, std::string value) { values.emplace_back(std::move(key), std::move(value)); }
};

/// min{k ≥ 0 : p^(k·parts) ≥ s} + 1, i.e. ⌈log_p s^(1/parts)⌉ + 1.
std::int64_t granularity_level(std::uint32_t p, std::size_t parts, std::size_t s);

std::string character_string(const GroupElement& r);

/// Every nonzero coefficient is exactly k-granular with k from s (default s_f).
VerificationReport check_granularity_exact(const DenseFunction& f, std::optional<std::size_t> s = std::nullopt);

/// Top-s coefficients are within μ/√s of granular values; one-sided.
VerificationReport check_mu_close(const DenseFunction& f, std::size_t s);

/// min |f̂|² against the prime, generalized and p-independent bounds.
VerificationReport check_coeff_lower_bounds(const DenseFunction& f);

/// Rounds the top-s coefficients to granular values and checks the result is
/// Boolean, at most s-sparse and within squared distance 2μ of f.
VerificationReport check_boolean_repair(const DenseFunction& f, std::size_t s);

/// Galois norm products of `trials` random nonzero g(ω_p) per prime, g with
/// coefficients in [−9, 9]; zero draws are redrawn and counted.
VerificationReport check_norm_products(std::size_t trials, Rng& rng,
                                       const std::vector<std::uint32_t>& primes = {3, 5, 7});

/// AT over Z_p^n: minimum coefficient against its closed form and the
/// realized decay exponent.
VerificationReport check_small_coefficient_family(std::uint32_t p, std::uint32_t n);

/// log_p|2cos(π/p)| + 1 − (1/n)·log_p 2.
double small_coefficient_exponent(std::uint32_t p, std::uint32_t n);

/// Exhaustive average over G × H equals the exact bucket weight for every label.
VerificationReport check_expectation_identity(const DenseFunction& f, const ProductSubspace& h);

/// Membership, collision and covariance frequencies of random buckets over Z_p^n.
VerificationReport stat_bucket_properties(std::uint32_t p, std::uint32_t n, std::uint32_t t, std::size_t s,
                                          double delta, std::size_t trials, Rng& rng);

/// Rate of |estimate − wt| > τ/3 over (seed, bucket) pairs, H redrawn per
/// repetition, M derived from τ unless given.
VerificationReport stat_estimator_concentration(const DenseFunction& f, std::uint32_t t, const mpq_class& tau,
                                                std::size_t repetitions, Rng& rng,
                                                std::optional<std::uint64_t> m = std::nullopt);

/// Var[wt(C_u(b))] ≤ τ·E[wt(C_u(b))] with τ the largest |f̂|².
VerificationReport stat_variance_bound(const DenseFunction& f, std::uint32_t t, std::size_t trials, Rng& rng);

}  // namespace absparse
