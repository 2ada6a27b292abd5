#pragma once

// Exact arithmetic in Z[ω_p1, …, ω_pt] and Q(ω_p1, …, ω_pt) for distinct primes.
//
// Elements are stored on the power basis Π_i {1, ω_pi, …, ω_pi^(pi−2)}, which
// is an integral basis of the ring of integers, so zero tests, equality and
// divisibility questions are decided coordinate-wise.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace absparse {

using Primes = std::vector<std::uint32_t>;

/// Element of Z[ω_p1, …, ω_pt] in canonical coordinates.
///
/// Coordinates form a row-major tensor of shape (p1−1)×…×(pt−1), the last
/// prime varying fastest. An empty prime list is the ring Z.
class CycInt {
 public:
  CycInt() : coords_(1) {}
  explicit CycInt(Primes primes);

  static CycInt constant(Primes primes, const mpz_class& c);
  /// Π_i ω_pi^(exponents[i]); exponents are reduced mod p_i.
  static CycInt root(Primes primes, std::span<const std::uint64_t> exponents);
  /// Reduce a group-ring element given as a dense tensor of shape p1×…×pt.
  static CycInt from_raw(Primes primes, std::span<const mpz_class> raw);
  static CycInt from_raw(Primes primes, std::span<const std::int64_t> raw);
  /// Reduce a sparse polynomial; exponents may be any size (ω^p = 1).
  static CycInt from_terms(
      Primes primes,
      const std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>>& terms);

  const Primes& primes() const { return primes_; }
  const std::vector<mpz_class>& coords() const { return coords_; }
  std::vector<mpz_class>& coords() { return coords_; }

  /// Dense tensor of shape p1×…×pt with zeros in the top slots.
  std::vector<mpz_class> to_raw() const;

  bool is_zero() const;
  /// True when only the constant coordinate may be nonzero.
  bool is_integer() const;
  mpz_class constant_term() const { return coords_.front(); }
  /// gcd of all coordinates (0 for the zero element).
  mpz_class content() const;

  CycInt operator-() const;
  CycInt& operator+=(const CycInt& rhs);
  CycInt& operator-=(const CycInt& rhs);
  CycInt& operator*=(const mpz_class& c);
  friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
  friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
  friend CycInt operator*(CycInt a, const mpz_class& c) { return a *= c; }
  friend CycInt operator*(const CycInt& a, const CycInt& b);

  /// Field automorphism ω_pi ↦ ω_pi^(multipliers[i]); multipliers must be units.
  CycInt galois(std::span<const std::uint64_t> multipliers) const;
  CycInt conj() const;
  /// Multiply by Π_i ω_pi^(exponents[i]).
  CycInt rotate(std::span<const std::uint64_t> exponents) const;

  friend bool operator==(const CycInt&, const CycInt&) = default;

 private:
  Primes primes_;
  std::vector<mpz_class> coords_;
};

/// Element of Q(ω_p1, …, ω_pt): numerator / denominator with the
/// denominator positive and coprime to the numerator's content.
class CycRational {
 public:
  CycRational() : den_(1) {}
  explicit CycRational(Primes primes) : num_(std::move(primes)), den_(1) {}
  CycRational(CycInt num, mpz_class den);

  static CycRational rational(Primes primes, const mpq_class& q);

  const CycInt& numerator() const { return num_; }
  const mpz_class& denominator() const { return den_; }
  const Primes& primes() const { return num_.primes(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_rational() const { return num_.is_integer(); }
  /// Exact value when is_rational().
  mpq_class to_rational() const;
  /// v == conj(v).
  bool is_real() const;

  CycRational operator-() const { return {-num_, den_}; }
  friend CycRational operator+(const CycRational& a, const CycRational& b);
  friend CycRational operator-(const CycRational& a, const CycRational& b);
  friend CycRational operator*(const CycRational& a, const CycRational& b);
  friend CycRational operator*(const CycRational& a, const mpq_class& q);
  CycRational& operator+=(const CycRational& b) { return *this = *this + b; }

  CycRational conj() const { return {num_.conj(), den_}; }
  CycRational galois(std::span<const std::uint64_t> m) const { return {num_.galois(m), den_}; }
  CycRational rotate(std::span<const std::uint64_t> e) const { return {num_.rotate(e), den_}; }

  friend bool operator==(const CycRational&, const CycRational&) = default;

 private:
  void normalize();

  CycInt num_;
  mpz_class den_;
};

// ---------------------------------------------------------------------------
// Text form: "(c0 + c1*w5 - c2*w5^2)/d", multi-prime monomials "w2*w3^2".

std::string to_string(const CycRational& v);
std::string to_string(const CycInt& v);
/// Inverse of to_string for the given prime list. Throws ParseError.
CycRational parse_cyclotomic(const Primes& primes, const std::string& text);

// ---------------------------------------------------------------------------
// Numerics.

/// Double-precision value with an error radius: |value − exact| ≤ radius.
struct ComplexEnclosure {
  std::complex<double> value;
  double radius = 0;
};

ComplexEnclosure numeric_eval(const CycRational& v);

/// Rational interval [lo, hi] containing Re(v).
struct RealInterval {
  mpq_class lo;
  mpq_class hi;
};

/// Encloses Re(v) evaluating with `bits` of working precision.
RealInterval real_enclosure(const CycRational& v, unsigned bits);

/// High-precision evaluation of v: decimal strings of real and imaginary parts.
std::pair<std::string, std::string> decimal_eval(const CycRational& v, unsigned bits, int digits);

struct MagnitudeSquared {
  CycRational exact;  // conj(v)·v
  RealInterval bounds;
};

MagnitudeSquared magnitude_squared(const CycRational& v, unsigned bits = 128);

/// Sign of Re(v) − q, decided exactly (refines precision until the enclosure
/// excludes zero; returns 0 only on exact equality). `v` must be real.
int compare_real(const CycRational& v, const mpq_class& q);
/// Sign of a − b for real a, b.
int compare_real(const CycRational& a, const CycRational& b);

/// Upper bound (rounded up) on sqrt of the largest value in the interval.
double sqrt_upper(const mpq_class& hi);

// ---------------------------------------------------------------------------
// Granularity and norms.

/// Π over all Galois conjugates of g(ω); a rational integer (0 iff g(ω) = 0).
mpz_class galois_norm_product(const CycInt& g);
mpz_class galois_norm_product(
    const Primes& primes,
    const std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>>& terms);

/// Sum of absolute coefficients of a raw (unreduced) polynomial.
mpz_class raw_l1_norm(const std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>>& terms);

/// v = g(ω)/Π p_i^(k_i) for some integer g. Throws on negative k or size mismatch.
bool is_granular(const CycRational& v, std::span<const std::int64_t> k);

struct GranularCandidate {
  CycRational candidate;
  double distance_bound = 0;  // rigorous upper bound on |v − candidate|
  mpq_class distance_squared_hi;
};

/// Round each coordinate of Π p_i^(k_i)·v to the nearest integer (ties to even).
GranularCandidate nearest_granular(const CycRational& v, std::span<const std::int64_t> k);

}  // namespace absparse
