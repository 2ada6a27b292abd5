#pragma once

// Sparsity tester: random coset bucketing with either sampled or exact
// bucket weights.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "absparse/cyclotomic.hpp"
#include "absparse/group.hpp"
#include "absparse/spectrum.hpp"

namespace absparse {

class Rng;

enum class Backend { kSampling, kExact };
enum class Decision { kYes, kNo };

/// Sampling refuses derived sample counts above this unless M is overridden.
inline constexpr std::uint64_t kSamplingLimit = 100000000;

struct ParamOverrides {
  std::optional<std::vector<std::uint32_t>> t;
  std::optional<mpq_class> tau;
  std::optional<mpz_class> M;
};

struct TestParams {
  GroupSpec spec;
  std::size_t s = 1;
  mpq_class epsilon;
  /// Bucket dimension per factor, after capping at n_i.
  std::vector<std::uint32_t> t;
  /// Values before the cap.
  std::vector<std::uint32_t> t_formula;
  bool t_capped = false;
  mpq_class tau;
  mpq_class threshold;  // 2τ/3
  mpz_class M;
  bool t_overridden = false;
  bool tau_overridden = false;
  bool M_overridden = false;
  Backend backend = Backend::kExact;

  /// Bucket-label group Π Z_pi^ti.
  GroupSpec label_spec() const;
};

TestParams derive_params(const GroupSpec& spec, std::size_t s, const mpq_class& epsilon,
                         const ParamOverrides& overrides = {});

/// min{k ≥ 0 : p^(k·parts) ≥ 20^parts · s²} + 1.
std::uint32_t bucket_dimension(std::uint32_t p, std::size_t parts, std::size_t s);

/// ⌈(36/τ²)·ln(40·Π p_i^t_i)⌉.
mpz_class sample_count(const mpq_class& tau, const GroupSpec& labels);

struct BucketEstimate {
  GroupElement label;
  CycRational estimate;
  std::optional<CycRational> exact_wt;
  bool heavy = false;
};

struct TestReport {
  Decision decision = Decision::kYes;
  TestParams params;
  std::vector<BucketEstimate> buckets;
  std::size_t heavy_count = 0;
  std::uint64_t queries = 0;
  ProductSubspace h;
  GroupElement u;
};

/// Draws H = H_1 × … × H_t with dim H_i = t_i.
ProductSubspace draw_bucket_subspace(const TestParams& params, Rng& rng);
/// Label of character r: (r·v_j) over the RREF basis of each H_i.
GroupElement bucket_label(const ProductSubspace& h, const GroupSpec& labels, const GroupElement& r);

TestReport run_exact(const DenseFunction& f, const TestParams& params, Rng& rng);
TestReport run_sampling(QueryOracle& oracle, const TestParams& params, Rng& rng);

struct Sample {
  GroupElement c;  // coefficients of z in the basis of H
  int value = 1;   // f(x)·f(x − z)
};

/// (1/M) Σ_i value_i · ω^⟨c_i, b + u⟩ for every label b, via one transform of
/// the histogram of the c_i.
std::vector<CycRational> estimate_all_buckets_fast(const GroupSpec& labels, std::span<const Sample> samples,
                                                   const GroupElement& u);
/// The same sums computed bucket by bucket.
std::vector<CycRational> estimate_all_buckets_naive(const GroupSpec& labels, std::span<const Sample> samples,
                                                    const GroupElement& u);
/// Fast path on a histogram indexed by lex index of c, normalized by `total`.
std::vector<CycRational> estimate_from_histogram(const GroupSpec& labels, std::span<const std::int64_t> hist,
                                                 std::int64_t total, const GroupElement& u);

/// Exact average of χ_r(z) f(x) f(x − z) over all of G × H, per bucket label.
std::vector<CycRational> exhaustive_expectation(const DenseFunction& f, const ProductSubspace& h,
                                                const GroupSpec& labels);

}  // namespace absparse
