#pragma once

// The group Z_p1^n1 × … × Z_pt^nt, its characters and its Z_p-linear algebra.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "absparse/cyclotomic.hpp"

namespace absparse {

class Rng;

bool is_prime(std::uint64_t n);
/// Inverse of a unit a modulo prime p.
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

struct Factor {
  std::uint32_t prime = 2;
  std::uint32_t exponent = 1;
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered list of (p_i, n_i) with distinct primes. The empty list is the
/// trivial group.
class GroupSpec {
 public:
  GroupSpec() = default;
  explicit GroupSpec(std::vector<Factor> factors);
  static GroupSpec single(std::uint32_t p, std::uint32_t n) { return GroupSpec({{p, n}}); }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  std::uint32_t prime(std::size_t i) const { return factors_[i].prime; }
  std::uint32_t exponent(std::size_t i) const { return factors_[i].exponent; }
  /// Total number of coordinates Σ n_i.
  std::size_t rank() const { return prime_of_coord_.size(); }
  /// Index of the first coordinate of factor i in the flat coordinate vector.
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  std::uint32_t prime_of_coord(std::size_t j) const { return prime_of_coord_[j]; }
  std::size_t factor_of_coord(std::size_t j) const { return factor_of_coord_[j]; }

  /// |G|; throws GuardExceeded if it does not fit in 64 bits.
  std::uint64_t order() const;
  /// |G| as an exact integer.
  mpz_class order_z() const;
  /// Product of the distinct primes.
  std::uint64_t m() const;
  /// Euler totient of m.
  std::uint64_t phi_m() const;
  Primes primes() const;
  bool single_prime() const { return factors_.size() == 1; }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.factors_ == b.factors_; }

 private:
  std::vector<Factor> factors_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> prime_of_coord_;
  std::vector<std::size_t> factor_of_coord_;
};

/// Point of G (equivalently a character index r). Coordinates are stored flat,
/// factor by factor.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(GroupSpec spec);  // identity
  GroupElement(GroupSpec spec, std::vector<std::uint32_t> coords);

  const GroupSpec& spec() const { return spec_; }
  const std::vector<std::uint32_t>& coords() const { return coords_; }
  std::span<const std::uint32_t> factor(std::size_t i) const;
  bool is_zero() const;

  GroupElement operator+(const GroupElement& rhs) const;
  GroupElement operator-(const GroupElement& rhs) const;
  GroupElement operator-() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.spec_ == b.spec_ && a.coords_ == b.coords_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.coords_ < b.coords_; }

 private:
  GroupSpec spec_;
  std::vector<std::uint32_t> coords_;
};

/// Lexicographic position; the last coordinate of the last factor varies fastest.
std::uint64_t lex_index(const GroupElement& x);
GroupElement from_index(const GroupSpec& spec, std::uint64_t index);

/// Per-factor exponents r_i·x_i mod p_i.
std::vector<std::uint64_t> pairing(const GroupElement& r, const GroupElement& x);

/// χ_r(x) = Π_i ω_pi^(r_i·x_i).
CycRational character_value(const GroupElement& r, const GroupElement& x);

using Vec = std::vector<std::uint32_t>;

/// Rank of a set of vectors over Z_p.
std::size_t rank_mod_p(std::uint32_t p, std::span<const Vec> rows);

/// One solution of rows·r = b (mod p) with free variables set to 0, or nullopt.
std::optional<Vec> rref_solve(std::uint32_t p, std::size_t n, std::span<const Vec> rows,
                              std::span<const std::uint32_t> b);

/// Subspace of Z_p^n held as its reduced row-echelon basis.
class PrimeSubspace {
 public:
  PrimeSubspace() = default;
  static PrimeSubspace span(std::uint32_t p, std::size_t n, std::span<const Vec> vectors);
  static PrimeSubspace zero(std::uint32_t p, std::size_t n);
  static PrimeSubspace full(std::uint32_t p, std::size_t n);

  std::uint32_t prime() const { return p_; }
  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vec>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  /// p^dim.
  std::uint64_t size() const;

  bool contains(std::span<const std::uint32_t> v) const;
  /// Canonical coset representative: v with every pivot coordinate cleared.
  Vec reduce(std::span<const std::uint32_t> v) const;
  /// Coefficients c with v = Σ c_j basis_j; requires contains(v).
  Vec coefficients(std::span<const std::uint32_t> v) const;
  /// Σ c_j basis_j.
  Vec combine(std::span<const std::uint32_t> c) const;
  PrimeSubspace complement() const;
  /// All members, ordered by lex index of the coefficient vector.
  std::vector<Vec> elements() const;

  friend bool operator==(const PrimeSubspace&, const PrimeSubspace&) = default;

 private:
  std::uint32_t p_ = 2;
  std::size_t n_ = 0;
  std::vector<Vec> basis_;
  std::vector<std::size_t> pivots_;
};

/// Every d-dimensional subspace of Z_p^n, in a fixed order.
std::vector<PrimeSubspace> enumerate_subspaces(std::uint32_t p, std::size_t n, std::size_t d);

/// Span of d vectors drawn uniformly from Z_p^n, redrawing dependent draws.
PrimeSubspace random_subspace(std::uint32_t p, std::size_t n, std::size_t d, Rng& rng);

/// H_1 × … × H_t with H_i ⊆ Z_pi^ni.
class ProductSubspace {
 public:
  ProductSubspace() = default;
  ProductSubspace(GroupSpec spec, std::vector<PrimeSubspace> parts);
  static ProductSubspace zero(const GroupSpec& spec);
  static ProductSubspace full(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  const std::vector<PrimeSubspace>& parts() const { return parts_; }
  const PrimeSubspace& part(std::size_t i) const { return parts_[i]; }
  std::uint64_t size() const;

  bool contains(const GroupElement& x) const;
  GroupElement reduce(const GroupElement& x) const;
  std::vector<GroupElement> elements() const;

  friend bool operator==(const ProductSubspace&, const ProductSubspace&) = default;

 private:
  GroupSpec spec_;
  std::vector<PrimeSubspace> parts_;
};

ProductSubspace orthogonal_complement(const ProductSubspace& h);

/// r + H with r canonically reduced against H.
class Coset {
 public:
  Coset(std::shared_ptr<const ProductSubspace> subspace, const GroupElement& r);

  const ProductSubspace& subspace() const { return *subspace_; }
  const GroupElement& representative() const { return rep_; }
  bool contains(const GroupElement& x) const;
  std::vector<GroupElement> elements() const;

  friend bool operator==(const Coset& a, const Coset& b) { return a.rep_ == b.rep_; }
  friend bool operator<(const Coset& a, const Coset& b) { return a.rep_ < b.rep_; }

 private:
  std::shared_ptr<const ProductSubspace> subspace_;
  GroupElement rep_;
};

/// All cosets of H, ordered by lex index of their representatives.
std::vector<Coset> enumerate_cosets(const ProductSubspace& h);

/// i^(−1)·x over Z_p^n.
GroupElement dilate_element(const GroupElement& x, std::uint32_t i);

}  // namespace absparse
