#include "absparse/spectrum.hpp"

#include <algorithm>

#include "absparse/error.hpp"
#include "group_ring.hpp"

namespace absparse {

DenseFunction::DenseFunction(GroupSpec spec, std::vector<std::int8_t> table)
    : spec_(std::move(spec)), table_(std::move(table)) {
  if (spec_.order() > kEnumerationGuard) throw GuardExceeded("group too large for a dense table");
  if (table_.size() != spec_.order()) {
    throw Error("table has " + std::to_string(table_.size()) + " entries, expected " +
                std::to_string(spec_.order()));
  }
  for (auto v : table_) {
    if (v != 1 && v != -1) throw Error("table entries must be +1 or -1");
  }
}

DenseFunction DenseFunction::constant(const GroupSpec& spec, int value) {
  return DenseFunction(spec, std::vector<std::int8_t>(spec.order(), static_cast<std::int8_t>(value)));
}

QueryOracle::QueryOracle(GroupSpec spec, std::function<int(const GroupElement&)> eval)
    : spec_(std::move(spec)), eval_(std::move(eval)) {}

QueryOracle::QueryOracle(const DenseFunction& f)
    : spec_(f.spec()), eval_([f](const GroupElement& x) { return f(x); }) {}

int QueryOracle::query(const GroupElement& x) {
  count_.fetch_add(1, std::memory_order_relaxed);
  return eval_(x);
}

Spectrum::Spectrum(GroupSpec spec, std::map<std::uint64_t, CycRational> coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
  }
}

std::vector<std::uint64_t> Spectrum::support() const {
  std::vector<std::uint64_t> s;
  s.reserve(coeffs_.size());
  for (const auto& [k, v] : coeffs_) s.push_back(k);
  return s;
}

CycRational Spectrum::coefficient(std::uint64_t index) const {
  auto it = coeffs_.find(index);
  if (it != coeffs_.end()) return it->second;
  return CycRational(spec_.primes());
}

// ---------------------------------------------------------------------------

namespace {

void check_guard(const GroupSpec& spec) {
  if (spec.order() > kEnumerationGuard) throw GuardExceeded("group too large to transform");
}

// Per-coordinate factor index and prime, flattened for the inner loops.
struct CoordInfo {
  std::vector<std::uint32_t> prime;
  std::vector<std::size_t> factor;
};

CoordInfo coord_info(const GroupSpec& spec) {
  CoordInfo c;
  for (std::size_t j = 0; j < spec.rank(); ++j) {
    c.prime.push_back(spec.prime_of_coord(j));
    c.factor.push_back(spec.factor_of_coord(j));
  }
  return c;
}

std::vector<std::vector<std::uint32_t>> all_coords(const GroupSpec& spec) {
  const std::uint64_t n = spec.order();
  std::vector<std::vector<std::uint32_t>> out(n, std::vector<std::uint32_t>(spec.rank()));
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t x = i;
    for (std::size_t j = spec.rank(); j-- > 0;) {
      out[i][j] = static_cast<std::uint32_t>(x % spec.prime_of_coord(j));
      x /= spec.prime_of_coord(j);
    }
  }
  return out;
}

// Constant raw vectors of length > 1 are multiples of Π Φ_p(ω) = 0.
bool is_trivially_zero(const std::int64_t* p, std::size_t r) {
  if (r == 1) return p[0] == 0;
  return std::all_of(p, p + r, [&](std::int64_t v) { return v == p[0]; });
}

Spectrum raw_to_spectrum(const GroupSpec& spec, const detail::RawLayout& layout,
                         const std::vector<std::int64_t>& raw) {
  const Primes primes = spec.primes();
  const auto den = static_cast<std::int64_t>(spec.order());
  std::map<std::uint64_t, CycRational> coeffs;
  const std::size_t r = layout.size;
  for (std::uint64_t i = 0; i < spec.order(); ++i) {
    const std::int64_t* p = &raw[i * r];
    if (is_trivially_zero(p, r)) continue;
    coeffs.emplace_hint(coeffs.end(), i, detail::raw_to_rational(primes, p, r, den));
  }
  return Spectrum(spec, std::move(coeffs));
}

}  // namespace

Spectrum dft_exact(const DenseFunction& f) {
  const auto& spec = f.spec();
  check_guard(spec);
  const detail::RawLayout layout(spec.primes());
  const auto info = coord_info(spec);
  const auto pts = all_coords(spec);
  const std::uint64_t n = spec.order();
  const std::size_t nf = spec.num_factors();
  std::vector<std::int64_t> raw(n * layout.size, 0);
  std::vector<std::uint64_t> e(nf);
  for (std::uint64_t r = 0; r < n; ++r) {
    std::int64_t* acc = &raw[r * layout.size];
    for (std::uint64_t x = 0; x < n; ++x) {
      std::fill(e.begin(), e.end(), 0);
      for (std::size_t j = 0; j < info.prime.size(); ++j) {
        e[info.factor[j]] += std::uint64_t{pts[r][j]} * pts[x][j];
      }
      std::size_t idx = 0;
      for (std::size_t k = 0; k < nf; ++k) {
        const std::uint32_t p = spec.prime(k);
        idx += ((p - e[k] % p) % p) * layout.stride[k];
      }
      acc[idx] += f[x];
    }
  }
  return raw_to_spectrum(spec, layout, raw);
}

Spectrum dft_factorized(const DenseFunction& f) {
  const auto& spec = f.spec();
  check_guard(spec);
  const detail::RawLayout layout(spec.primes());
  const std::uint64_t n = spec.order();
  std::vector<std::int64_t> raw(n * layout.size, 0);
  for (std::uint64_t x = 0; x < n; ++x) raw[x * layout.size] = f[x];
  detail::group_ring_transform(spec, layout, raw, true);
  return raw_to_spectrum(spec, layout, raw);
}

Spectrum dft_kronecker(const DenseFunction& f) {
  if (!f.spec().single_prime()) throw Error("dft_kronecker requires a group Z_p^n");
  return dft_factorized(f);
}

std::size_t sparsity_of(const DenseFunction& f) {
  const auto& spec = f.spec();
  check_guard(spec);
  const detail::RawLayout layout(spec.primes());
  const std::uint64_t n = spec.order();
  std::vector<std::int64_t> raw(n * layout.size, 0);
  for (std::uint64_t x = 0; x < n; ++x) raw[x * layout.size] = f[x];
  detail::group_ring_transform(spec, layout, raw, true);
  const Primes primes = spec.primes();
  std::size_t count = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::int64_t* p = &raw[i * layout.size];
    if (is_trivially_zero(p, layout.size)) continue;
    if (!CycInt::from_raw(primes, std::span<const std::int64_t>(p, layout.size)).is_zero()) ++count;
  }
  return count;
}

std::vector<CycRational> inverse_dft(const Spectrum& s) {
  const auto& spec = s.spec();
  check_guard(spec);
  const Primes primes = spec.primes();
  const detail::RawLayout layout(primes);
  const std::uint64_t n = spec.order();
  mpz_class den = 1;
  for (const auto& [k, v] : s.coefficients()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.denominator().get_mpz_t());
  }
  std::vector<mpz_class> raw(n * layout.size);
  for (const auto& [k, v] : s.coefficients()) {
    const mpz_class scale = den / v.denominator();
    const auto r = v.numerator().to_raw();
    for (std::size_t i = 0; i < r.size(); ++i) raw[k * layout.size + i] = r[i] * scale;
  }
  detail::group_ring_transform(spec, layout, raw, false);
  std::vector<CycRational> out;
  out.reserve(n);
  for (std::uint64_t x = 0; x < n; ++x) {
    std::span<const mpz_class> slot(&raw[x * layout.size], layout.size);
    out.emplace_back(CycInt::from_raw(primes, slot), den);
  }
  return out;
}

std::optional<DenseFunction> as_boolean(const GroupSpec& spec, const std::vector<CycRational>& values) {
  std::vector<std::int8_t> t;
  t.reserve(values.size());
  for (const auto& v : values) {
    if (!v.is_rational()) return std::nullopt;
    const mpq_class q = v.to_rational();
    if (q == 1) {
      t.push_back(1);
    } else if (q == -1) {
      t.push_back(-1);
    } else {
      return std::nullopt;
    }
  }
  if (t.size() != spec.order()) return std::nullopt;
  return DenseFunction(spec, std::move(t));
}

std::map<std::uint64_t, CycRational> squared_magnitudes(const Spectrum& s) {
  std::map<std::uint64_t, CycRational> out;
  for (const auto& [k, v] : s.coefficients()) out.emplace_hint(out.end(), k, v.conj() * v);
  return out;
}

CycRational parseval_sum(const Spectrum& s) {
  CycRational total(s.spec().primes());
  for (const auto& [k, w] : squared_magnitudes(s)) total += w;
  return total;
}

TopS tail_top_s(const Spectrum& s, std::size_t k) {
  if (k < 1) throw Error("s must be at least 1");
  struct Entry {
    std::uint64_t index;
    CycRational weight;
    RealInterval bounds;
  };
  std::vector<Entry> entries;
  for (auto& [idx, w] : squared_magnitudes(s)) {
    entries.push_back({idx, w, real_enclosure(w, 96)});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.bounds.lo > b.bounds.hi) return true;
    if (a.bounds.hi < b.bounds.lo) return false;
    const int c = compare_real(a.weight, b.weight);
    if (c != 0) return c > 0;
    return a.index < b.index;
  });
  TopS out;
  CycRational kept(s.spec().primes());
  for (std::size_t i = 0; i < entries.size() && i < k; ++i) {
    out.top.push_back(entries[i].index);
    kept += entries[i].weight;
  }
  out.mu = CycRational::rational(s.spec().primes(), 1) - kept;
  return out;
}

Spectrum project(const Spectrum& s, const Coset& coset) {
  if (!(coset.subspace().spec() == s.spec())) throw Error("coset and spectrum from different groups");
  std::map<std::uint64_t, CycRational> kept;
  for (const auto& [k, v] : s.coefficients()) {
    if (coset.contains(from_index(s.spec(), k))) kept.emplace_hint(kept.end(), k, v);
  }
  return Spectrum(s.spec(), std::move(kept));
}

std::vector<CycRational> project_via_average(const DenseFunction& f, const GroupElement& r,
                                             const ProductSubspace& h) {
  const auto& spec = f.spec();
  if (!(h.spec() == spec) || !(r.spec() == spec)) throw Error("projection inputs from different groups");
  const auto perp = orthogonal_complement(h).elements();
  const Primes primes = spec.primes();
  const detail::RawLayout layout(primes);
  std::vector<std::size_t> chi;
  for (const auto& z : perp) chi.push_back(layout.index(pairing(r, z)));
  const auto den = static_cast<std::int64_t>(perp.size());
  std::vector<CycRational> out;
  out.reserve(spec.order());
  std::vector<std::int64_t> acc(layout.size);
  for (std::uint64_t i = 0; i < spec.order(); ++i) {
    const GroupElement x = from_index(spec, i);
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t j = 0; j < perp.size(); ++j) acc[chi[j]] += f(x - perp[j]);
    out.push_back(detail::raw_to_rational(primes, acc.data(), acc.size(), den));
  }
  return out;
}

std::map<Coset, CycRational> bucket_weights(const Spectrum& s, const ProductSubspace& h) {
  auto perp = std::make_shared<const ProductSubspace>(orthogonal_complement(h));
  std::map<Coset, CycRational> out;
  for (const auto& [k, w] : squared_magnitudes(s)) {
    Coset c(perp, from_index(s.spec(), k));
    auto it = out.find(c);
    if (it == out.end()) {
      out.emplace(std::move(c), w);
    } else {
      it->second += w;
    }
  }
  return out;
}

Distances l2_and_hamming(const DenseFunction& f, const DenseFunction& g) {
  if (!(f.spec() == g.spec())) throw Error("functions on different groups");
  std::uint64_t diff = 0;
  for (std::size_t i = 0; i < f.size(); ++i) diff += f[i] != g[i];
  Distances d;
  d.disagreement = mpq_class(mpz_class(static_cast<unsigned long>(diff)), f.spec().order_z());
  d.disagreement.canonicalize();
  d.l2_squared = 4 * d.disagreement;
  return d;
}

DenseFunction restrict_to_flat(const DenseFunction& f, std::span<const std::uint32_t> a,
                               const PrimeSubspace& v) {
  const auto& spec = f.spec();
  if (!spec.single_prime()) throw Error("restriction requires a group Z_p^n");
  const std::uint32_t p = spec.prime(0);
  const std::size_t n = spec.rank();
  const std::size_t d = v.dim();
  GroupSpec sub = d == 0 ? GroupSpec() : GroupSpec::single(p, static_cast<std::uint32_t>(d));
  const std::uint64_t count = sub.order();
  std::vector<std::int8_t> table(count);
  std::vector<std::uint32_t> y(d, 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t t = i;
    for (std::size_t j = d; j-- > 0;) {
      y[j] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    const Vec off = v.combine(y);
    std::uint64_t idx = 0;
    for (std::size_t c = 0; c < n; ++c) idx = idx * p + (a[c] + off[c]) % p;
    table[i] = static_cast<std::int8_t>(f[idx]);
  }
  return DenseFunction(sub, std::move(table));
}

DenseFunction restrict_affine(const DenseFunction& f, std::span<const Vec> rows,
                              std::span<const std::uint32_t> b) {
  const auto& spec = f.spec();
  if (!spec.single_prime()) throw Error("restriction requires a group Z_p^n");
  const std::uint32_t p = spec.prime(0);
  const std::size_t n = spec.rank();
  const auto x0 = rref_solve(p, n, rows, b);
  if (!x0) throw Error("affine constraints are inconsistent");
  const PrimeSubspace solutions = PrimeSubspace::span(p, n, rows).complement();
  return restrict_to_flat(f, *x0, solutions);
}

std::size_t deg_p(const DenseFunction& f) {
  const auto& spec = f.spec();
  if (!spec.single_prime()) throw Error("deg_p requires a group Z_p^n");
  check_guard(spec);
  const std::uint32_t p = spec.prime(0);
  const std::size_t n = spec.rank();
  for (std::size_t l = n; l >= 1; --l) {
    std::uint64_t full = 1;
    for (std::size_t i = 0; i < l; ++i) full *= p;
    for (const auto& v : enumerate_subspaces(p, n, l)) {
      const ProductSubspace vs(spec, {v});
      for (const auto& coset : enumerate_cosets(vs)) {
        const auto g = restrict_to_flat(f, coset.representative().coords(), v);
        if (sparsity_of(g) == full) return l;
      }
    }
  }
  return 0;
}

std::size_t dim_support(const Spectrum& s) {
  const auto& spec = s.spec();
  if (!spec.single_prime()) throw Error("dim_support requires a group Z_p^n");
  std::vector<Vec> rows;
  for (auto k : s.support()) rows.push_back(from_index(spec, k).coords());
  return rank_mod_p(spec.prime(0), rows);
}

}  // namespace absparse
