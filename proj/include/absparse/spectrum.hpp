#pragma once

// Exact Fourier analysis of ±1-valued functions on G.
//
//   f̂(r) = (1/|G|) Σ_x f(x) · conj χ_r(x)
//   f(x) = Σ_r f̂(r) · χ_r(x)

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "absparse/cyclotomic.hpp"
#include "absparse/group.hpp"

namespace absparse {

/// Truth table of f: G → {−1, +1} in lexicographic order.
class DenseFunction {
 public:
  DenseFunction() = default;
  DenseFunction(GroupSpec spec, std::vector<std::int8_t> table);
  static DenseFunction constant(const GroupSpec& spec, int value = 1);

  const GroupSpec& spec() const { return spec_; }
  const std::vector<std::int8_t>& table() const { return table_; }
  std::size_t size() const { return table_.size(); }
  int operator[](std::uint64_t index) const { return table_[index]; }
  int operator()(const GroupElement& x) const { return table_[lex_index(x)]; }

  friend bool operator==(const DenseFunction& a, const DenseFunction& b) {
    return a.spec_ == b.spec_ && a.table_ == b.table_;
  }

 private:
  GroupSpec spec_;
  std::vector<std::int8_t> table_;
};

/// Query access to a function with a thread-safe evaluation counter.
class QueryOracle {
 public:
  QueryOracle(GroupSpec spec, std::function<int(const GroupElement&)> eval);
  explicit QueryOracle(const DenseFunction& f);
  QueryOracle(const QueryOracle&) = delete;
  QueryOracle& operator=(const QueryOracle&) = delete;

  const GroupSpec& spec() const { return spec_; }
  int query(const GroupElement& x);
  std::uint64_t queries() const { return count_.load(); }

 private:
  GroupSpec spec_;
  std::function<int(const GroupElement&)> eval_;
  std::atomic<std::uint64_t> count_{0};
};

/// Nonzero Fourier coefficients keyed by the lex index of r.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(GroupSpec spec, std::map<std::uint64_t, CycRational> coeffs);

  const GroupSpec& spec() const { return spec_; }
  const std::map<std::uint64_t, CycRational>& coefficients() const { return coeffs_; }
  std::size_t sparsity() const { return coeffs_.size(); }
  std::vector<std::uint64_t> support() const;
  /// f̂(r), zero when r is outside the support.
  CycRational coefficient(std::uint64_t index) const;
  CycRational coefficient(const GroupElement& r) const { return coefficient(lex_index(r)); }

  friend bool operator==(const Spectrum& a, const Spectrum& b) {
    return a.spec_ == b.spec_ && a.coeffs_ == b.coeffs_;
  }

 private:
  GroupSpec spec_;
  std::map<std::uint64_t, CycRational> coeffs_;
};

/// Direct summation over all (r, x) pairs.
Spectrum dft_exact(const DenseFunction& f);
/// One size-p butterfly stage per coordinate; any group.
Spectrum dft_factorized(const DenseFunction& f);
/// dft_factorized restricted to Z_p^n.
Spectrum dft_kronecker(const DenseFunction& f);
/// Number of nonzero coefficients, without building exact values.
std::size_t sparsity_of(const DenseFunction& f);

/// Σ_r f̂(r) χ_r(x) for every x, in lex order.
std::vector<CycRational> inverse_dft(const Spectrum& s);
/// The ±1 table when every value is ±1.
std::optional<DenseFunction> as_boolean(const GroupSpec& spec, const std::vector<CycRational>& values);

/// |f̂(r)|² for every support index.
std::map<std::uint64_t, CycRational> squared_magnitudes(const Spectrum& s);
/// Σ_r |f̂(r)|².
CycRational parseval_sum(const Spectrum& s);

struct TopS {
  std::vector<std::uint64_t> top;  // by |f̂|² descending, ties by index
  CycRational mu;                  // 1 − Σ_{r∈top} |f̂(r)|²
};

TopS tail_top_s(const Spectrum& s, std::size_t k);

/// Keep only coefficients inside the coset.
Spectrum project(const Spectrum& s, const Coset& coset);
/// x ↦ E_{z∈H⊥}[f(x−z) χ_r(z)].
std::vector<CycRational> project_via_average(const DenseFunction& f, const GroupElement& r,
                                             const ProductSubspace& h);

/// wt of every coset of H⊥ that meets the support.
std::map<Coset, CycRational> bucket_weights(const Spectrum& s, const ProductSubspace& h);

struct Distances {
  mpq_class l2_squared;
  mpq_class disagreement;
};

Distances l2_and_hamming(const DenseFunction& f, const DenseFunction& g);

/// f restricted to {x : rows·x = b}, coordinatized by the RREF null-space basis.
DenseFunction restrict_affine(const DenseFunction& f, std::span<const Vec> rows,
                              std::span<const std::uint32_t> b);
/// f on {a + Σ y_j v_j}, y in lex order.
DenseFunction restrict_to_flat(const DenseFunction& f, std::span<const std::uint32_t> a,
                               const PrimeSubspace& v);

/// Largest ℓ such that some ℓ-dimensional affine subspace carries full sparsity p^ℓ.
std::size_t deg_p(const DenseFunction& f);
/// Z_p-rank of the support indices.
std::size_t dim_support(const Spectrum& s);

}  // namespace absparse
