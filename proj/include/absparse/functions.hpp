#pragma once

// Function families on Z_p^n and the random models used by the tester checks.

#include <cstdint>
#include <string>

#include "absparse/group.hpp"
#include "absparse/spectrum.hpp"

namespace absparse {

class Rng;

/// +1 exactly on {(p+1)/2, …, p−1}. Requires an odd prime.
DenseFunction threshold_univariate(std::uint32_t p);

/// −1 only at the all-ones point of Z_2^n.
DenseFunction and_n(std::uint32_t n);

/// AND_n of the threshold in every coordinate: −1 iff every x_j ≥ (p+1)/2.
DenseFunction at_function(std::uint32_t p, std::uint32_t n);

/// The fixed 25-point witness over Z_5².
DenseFunction table1_z5sq();

/// h(x) = f(i⁻¹·x); ĥ(r) = f̂(i·r).
DenseFunction dilate_function(const DenseFunction& f, std::uint32_t i);

/// Constant on every coset of K with independent uniform signs; supp ⊆ K⊥.
DenseFunction coset_constant_random(const GroupSpec& spec, const ProductSubspace& k, Rng& rng);

DenseFunction random_function(const GroupSpec& spec, Rng& rng);

/// Exact tail μ of the best s coefficients. μ ≥ ε certifies ε-farness.
CycRational far_certificate(const DenseFunction& f, std::size_t s);

enum class Family { kConstant, kAnd, kThreshold, kAt, kTable1, kCosetConstant, kRandom };

struct FamilyDescriptor {
  Family family = Family::kConstant;
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  std::uint64_t seed = 0;
  /// Dimension of K for kCosetConstant.
  std::uint32_t kdim = 0;
  int value = 1;
};

Family parse_family(const std::string& name);
std::string family_name(Family f);

/// Validates the descriptor and builds the table.
DenseFunction make_family(const FamilyDescriptor& d);

}  // namespace absparse
