#pragma once

// Dense transforms over the group ring Z[C_p1 × … × C_pt].
//
// A value Σ a_e ω^e is held unreduced as a length-R vector (R = Π p_i) indexed
// by the exponent tuple e, so multiplication by a root of unity is a
// permutation and the butterflies need only additions.

#include <cstdint>
#include <numeric>
#include <vector>

#include <gmpxx.h>

#include "absparse/cyclotomic.hpp"
#include "absparse/group.hpp"

namespace absparse::detail {

struct RawLayout {
  explicit RawLayout(const Primes& primes) : primes(primes) {
    size = 1;
    for (auto p : primes) size *= p;
    stride.assign(primes.size(), 1);
    for (std::size_t k = primes.size(); k-- > 1;) stride[k - 1] = stride[k] * primes[k];
    rot.resize(primes.size());
    for (std::size_t k = 0; k < primes.size(); ++k) {
      const std::uint32_t p = primes[k];
      rot[k].assign(p, std::vector<std::uint32_t>(size));
      for (std::uint32_t s = 0; s < p; ++s) {
        for (std::size_t idx = 0; idx < size; ++idx) {
          const std::size_t e = idx / stride[k] % p;
          rot[k][s][idx] = static_cast<std::uint32_t>(idx + ((e + s) % p - e) * stride[k]);
        }
      }
    }
  }

  /// Raw index of Π_k ω_k^(e_k).
  std::size_t index(const std::vector<std::uint64_t>& e) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < e.size(); ++k) idx += e[k] * stride[k];
    return idx;
  }

  Primes primes;
  std::size_t size;
  std::vector<std::size_t> stride;
  // rot[k][s][idx]: position of entry idx after multiplying by ω_k^s.
  std::vector<std::vector<std::vector<std::uint32_t>>> rot;
};

/// In place: data[x·R + ·] ← Σ_y ω^(±x·y) data[y·R + ·] with one stage per coordinate.
/// `negate` selects the conjugate characters.
template <class T>
void group_ring_transform(const GroupSpec& spec, const RawLayout& layout, std::vector<T>& data,
                          bool negate) {
  const std::size_t rank = spec.rank();
  const std::size_t r_size = layout.size;
  const std::uint64_t total = data.size() / r_size;
  std::vector<T> buf;
  std::uint64_t inner = total;
  for (std::size_t j = 0; j < rank; ++j) {
    const std::uint32_t p = spec.prime_of_coord(j);
    const std::size_t k = spec.factor_of_coord(j);
    inner /= p;
    buf.assign(static_cast<std::size_t>(p) * r_size, T(0));
    for (std::uint64_t outer = 0; outer < total; outer += inner * p) {
      for (std::uint64_t in = 0; in < inner; ++in) {
        const std::uint64_t base = outer + in;
        for (auto& v : buf) v = 0;
        for (std::uint32_t y = 0; y < p; ++y) {
          const T* src = &data[(base + y * inner) * r_size];
          for (std::uint32_t x = 0; x < p; ++x) {
            std::uint32_t s = static_cast<std::uint32_t>((std::uint64_t{x} * y) % p);
            if (negate) s = (p - s) % p;
            const auto& perm = layout.rot[k][s];
            T* dst = &buf[x * r_size];
            for (std::size_t idx = 0; idx < r_size; ++idx) {
              if (src[idx] != 0) dst[perm[idx]] += src[idx];
            }
          }
        }
        for (std::uint32_t x = 0; x < p; ++x) {
          for (std::size_t idx = 0; idx < r_size; ++idx) {
            data[(base + x * inner) * r_size + idx] = buf[x * r_size + idx];
          }
        }
      }
    }
  }
}

/// raw / den as a normalized CycRational.
inline CycRational raw_to_rational(const Primes& primes, const std::int64_t* raw, std::size_t r_size,
                                   std::int64_t den) {
  const CycInt num = CycInt::from_raw(primes, std::span<const std::int64_t>(raw, r_size));
  return CycRational(num, mpz_class(static_cast<long>(den)));
}

}  // namespace absparse::detail
