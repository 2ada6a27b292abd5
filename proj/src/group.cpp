#include "absparse/group.hpp"

#include <algorithm>
#include <set>

#include "absparse/error.hpp"
#include "absparse/rng.hpp"

namespace absparse {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  a %= p;
  if (a == 0) throw Error("zero has no inverse mod " + std::to_string(p));
  std::uint64_t result = 1, base = a, e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

// ---------------------------------------------------------------------------

GroupSpec::GroupSpec(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::uint32_t> seen;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto [p, n] = factors_[i];
    if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
    if (n < 1) throw Error("factor exponent must be at least 1");
    if (!seen.insert(p).second) throw Error("prime " + std::to_string(p) + " repeated");
    offsets_.push_back(prime_of_coord_.size());
    for (std::uint32_t j = 0; j < n; ++j) {
      prime_of_coord_.push_back(p);
      factor_of_coord_.push_back(i);
    }
  }
}

std::uint64_t GroupSpec::order() const {
  std::uint64_t n = 1;
  for (auto p : prime_of_coord_) {
    if (n > UINT64_MAX / p) throw GuardExceeded("group order does not fit in 64 bits");
    n *= p;
  }
  return n;
}

mpz_class GroupSpec::order_z() const {
  mpz_class n = 1;
  for (auto p : prime_of_coord_) n *= p;
  return n;
}

std::uint64_t GroupSpec::m() const {
  std::uint64_t r = 1;
  for (const auto& f : factors_) r *= f.prime;
  return r;
}

std::uint64_t GroupSpec::phi_m() const {
  std::uint64_t r = 1;
  for (const auto& f : factors_) r *= f.prime - 1;
  return r;
}

Primes GroupSpec::primes() const {
  Primes r;
  for (const auto& f : factors_) r.push_back(f.prime);
  return r;
}

// ---------------------------------------------------------------------------

GroupElement::GroupElement(GroupSpec spec) : spec_(std::move(spec)), coords_(spec_.rank(), 0) {}

GroupElement::GroupElement(GroupSpec spec, std::vector<std::uint32_t> coords)
    : spec_(std::move(spec)), coords_(std::move(coords)) {
  if (coords_.size() != spec_.rank()) throw Error("coordinate count does not match group");
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (coords_[j] >= spec_.prime_of_coord(j)) throw Error("coordinate out of range");
  }
}

std::span<const std::uint32_t> GroupElement::factor(std::size_t i) const {
  return std::span<const std::uint32_t>(coords_).subspan(spec_.offset(i), spec_.exponent(i));
}

bool GroupElement::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
}

GroupElement GroupElement::operator+(const GroupElement& rhs) const {
  if (!(spec_ == rhs.spec_)) throw Error("group elements of different groups");
  GroupElement r = *this;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    r.coords_[j] = (coords_[j] + rhs.coords_[j]) % spec_.prime_of_coord(j);
  }
  return r;
}

GroupElement GroupElement::operator-() const {
  GroupElement r = *this;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    const auto p = spec_.prime_of_coord(j);
    r.coords_[j] = (p - coords_[j]) % p;
  }
  return r;
}

GroupElement GroupElement::operator-(const GroupElement& rhs) const { return *this + (-rhs); }

std::uint64_t lex_index(const GroupElement& x) {
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < x.coords().size(); ++j) {
    idx = idx * x.spec().prime_of_coord(j) + x.coords()[j];
  }
  return idx;
}

GroupElement from_index(const GroupSpec& spec, std::uint64_t index) {
  if (index >= spec.order()) throw Error("index out of range");
  std::vector<std::uint32_t> c(spec.rank());
  for (std::size_t j = c.size(); j-- > 0;) {
    const auto p = spec.prime_of_coord(j);
    c[j] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return GroupElement(spec, std::move(c));
}

std::vector<std::uint64_t> pairing(const GroupElement& r, const GroupElement& x) {
  if (!(r.spec() == x.spec())) throw Error("character and point from different groups");
  const auto& spec = r.spec();
  std::vector<std::uint64_t> e(spec.num_factors(), 0);
  for (std::size_t j = 0; j < spec.rank(); ++j) {
    const auto f = spec.factor_of_coord(j);
    e[f] = (e[f] + std::uint64_t{r.coords()[j]} * x.coords()[j]) % spec.prime(f);
  }
  return e;
}

CycRational character_value(const GroupElement& r, const GroupElement& x) {
  const auto e = pairing(r, x);
  return CycRational(CycInt::root(r.spec().primes(), e), 1);
}

// ---------------------------------------------------------------------------

namespace {

// In-place RREF of `rows` over Z_p using the first `cols` columns for pivots.
// Returns pivot columns; zero rows are dropped.
std::vector<std::size_t> rref(std::uint32_t p, std::size_t cols, std::vector<Vec>& rows) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] % p == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const std::uint64_t inv = inverse_mod(rows[r][c] % p, p);
    for (auto& x : rows[r]) x = static_cast<std::uint32_t>(x % p * inv % p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const std::uint64_t f = rows[i][c] % p;
      if (f == 0) continue;
      for (std::size_t k = 0; k < rows[i].size(); ++k) {
        rows[i][k] = static_cast<std::uint32_t>((rows[i][k] % p + p * std::uint64_t{p} - f * rows[r][k]) % p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace

std::size_t rank_mod_p(std::uint32_t p, std::span<const Vec> rows) {
  std::vector<Vec> m(rows.begin(), rows.end());
  if (m.empty()) return 0;
  return rref(p, m.front().size(), m).size();
}

std::optional<Vec> rref_solve(std::uint32_t p, std::size_t n, std::span<const Vec> rows,
                              std::span<const std::uint32_t> b) {
  if (rows.size() != b.size()) throw Error("right-hand side length does not match rows");
  std::vector<Vec> m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw Error("row length does not match dimension");
    Vec row(rows[i]);
    row.push_back(b[i] % p);
    m.push_back(std::move(row));
  }
  const auto pivots = rref(p, n + 1, m);
  Vec x(n, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == n) return std::nullopt;
    x[pivots[i]] = m[i][n];
  }
  return x;
}

PrimeSubspace PrimeSubspace::span(std::uint32_t p, std::size_t n, std::span<const Vec> vectors) {
  PrimeSubspace s;
  s.p_ = p;
  s.n_ = n;
  s.basis_.assign(vectors.begin(), vectors.end());
  for (const auto& v : s.basis_) {
    if (v.size() != n) throw Error("vector length does not match dimension");
  }
  s.pivots_ = rref(p, n, s.basis_);
  return s;
}

PrimeSubspace PrimeSubspace::zero(std::uint32_t p, std::size_t n) { return span(p, n, {}); }

PrimeSubspace PrimeSubspace::full(std::uint32_t p, std::size_t n) {
  std::vector<Vec> id(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return span(p, n, id);
}

std::uint64_t PrimeSubspace::size() const {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < dim(); ++i) s *= p_;
  return s;
}

Vec PrimeSubspace::reduce(std::span<const std::uint32_t> v) const {
  if (v.size() != n_) throw Error("vector length does not match dimension");
  Vec r(v.begin(), v.end());
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    const std::uint64_t f = r[pivots_[j]] % p_;
    if (f == 0) continue;
    for (std::size_t k = 0; k < n_; ++k) {
      r[k] = static_cast<std::uint32_t>((r[k] + (p_ - f) * basis_[j][k]) % p_);
    }
  }
  return r;
}

bool PrimeSubspace::contains(std::span<const std::uint32_t> v) const {
  const Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](auto c) { return c == 0; });
}

Vec PrimeSubspace::coefficients(std::span<const std::uint32_t> v) const {
  Vec c(dim());
  for (std::size_t j = 0; j < dim(); ++j) c[j] = v[pivots_[j]] % p_;
  return c;
}

Vec PrimeSubspace::combine(std::span<const std::uint32_t> c) const {
  if (c.size() != dim()) throw Error("coefficient count does not match dimension");
  Vec v(n_, 0);
  for (std::size_t j = 0; j < dim(); ++j) {
    for (std::size_t k = 0; k < n_; ++k) {
      v[k] = static_cast<std::uint32_t>((v[k] + std::uint64_t{c[j]} * basis_[j][k]) % p_);
    }
  }
  return v;
}

PrimeSubspace PrimeSubspace::complement() const {
  std::vector<bool> is_pivot(n_, false);
  for (auto c : pivots_) is_pivot[c] = true;
  std::vector<Vec> null;
  for (std::size_t f = 0; f < n_; ++f) {
    if (is_pivot[f]) continue;
    Vec v(n_, 0);
    v[f] = 1;
    for (std::size_t j = 0; j < basis_.size(); ++j) v[pivots_[j]] = (p_ - basis_[j][f] % p_) % p_;
    null.push_back(std::move(v));
  }
  return span(p_, n_, null);
}

std::vector<Vec> PrimeSubspace::elements() const {
  const std::uint64_t count = size();
  if (count > kEnumerationGuard) throw GuardExceeded("subspace too large to enumerate");
  std::vector<Vec> out;
  out.reserve(count);
  Vec c(dim(), 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t x = i;
    for (std::size_t j = dim(); j-- > 0;) {
      c[j] = static_cast<std::uint32_t>(x % p_);
      x /= p_;
    }
    out.push_back(combine(c));
  }
  return out;
}

std::vector<PrimeSubspace> enumerate_subspaces(std::uint32_t p, std::size_t n, std::size_t d) {
  if (d > n) throw Error("subspace dimension exceeds ambient dimension");
  std::vector<PrimeSubspace> out;
  std::vector<std::size_t> piv(d);
  for (std::size_t i = 0; i < d; ++i) piv[i] = i;
  while (true) {
    // Free slots: row j may hold any value in non-pivot columns right of its pivot.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t c = piv[j] + 1; c < n; ++c) {
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(j, c);
      }
    }
    std::vector<std::uint32_t> val(slots.size(), 0);
    while (true) {
      std::vector<Vec> rows(d, Vec(n, 0));
      for (std::size_t j = 0; j < d; ++j) rows[j][piv[j]] = 1;
      for (std::size_t s = 0; s < slots.size(); ++s) rows[slots[s].first][slots[s].second] = val[s];
      out.push_back(PrimeSubspace::span(p, n, rows));
      std::size_t k = slots.size();
      while (k > 0 && ++val[k - 1] == p) val[--k] = 0;
      if (k == 0) break;
      if (out.size() > kEnumerationGuard) throw GuardExceeded("too many subspaces to enumerate");
    }
    std::size_t i = d;
    while (i > 0 && piv[i - 1] == n - d + i - 1) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t j = i; j < d; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

PrimeSubspace random_subspace(std::uint32_t p, std::size_t n, std::size_t d, Rng& rng) {
  if (d > n) throw Error("subspace dimension exceeds ambient dimension");
  std::vector<Vec> chosen;
  std::size_t retries = 0;
  while (chosen.size() < d) {
    Vec v(n);
    for (auto& x : v) x = static_cast<std::uint32_t>(rng.below(p));
    chosen.push_back(v);
    if (rank_mod_p(p, chosen) < chosen.size()) {
      chosen.pop_back();
      if (++retries > 1000000) throw Error("random_subspace exceeded its retry budget");
    }
  }
  return PrimeSubspace::span(p, n, chosen);
}

// ---------------------------------------------------------------------------

ProductSubspace::ProductSubspace(GroupSpec spec, std::vector<PrimeSubspace> parts)
    : spec_(std::move(spec)), parts_(std::move(parts)) {
  if (parts_.size() != spec_.num_factors()) throw Error("subspace factor count does not match group");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].prime() != spec_.prime(i) || parts_[i].ambient() != spec_.exponent(i)) {
      throw Error("subspace factor does not match group factor");
    }
  }
}

ProductSubspace ProductSubspace::zero(const GroupSpec& spec) {
  std::vector<PrimeSubspace> parts;
  for (const auto& f : spec.factors()) parts.push_back(PrimeSubspace::zero(f.prime, f.exponent));
  return {spec, parts};
}

ProductSubspace ProductSubspace::full(const GroupSpec& spec) {
  std::vector<PrimeSubspace> parts;
  for (const auto& f : spec.factors()) parts.push_back(PrimeSubspace::full(f.prime, f.exponent));
  return {spec, parts};
}

std::uint64_t ProductSubspace::size() const {
  std::uint64_t s = 1;
  for (const auto& h : parts_) s *= h.size();
  return s;
}

bool ProductSubspace::contains(const GroupElement& x) const {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (!parts_[i].contains(x.factor(i))) return false;
  }
  return true;
}

GroupElement ProductSubspace::reduce(const GroupElement& x) const {
  if (!(x.spec() == spec_)) throw Error("element and subspace from different groups");
  std::vector<std::uint32_t> c;
  c.reserve(spec_.rank());
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const Vec r = parts_[i].reduce(x.factor(i));
    c.insert(c.end(), r.begin(), r.end());
  }
  return GroupElement(spec_, std::move(c));
}

std::vector<GroupElement> ProductSubspace::elements() const {
  if (size() > kEnumerationGuard) throw GuardExceeded("subspace too large to enumerate");
  std::vector<GroupElement> out{GroupElement(spec_)};
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto members = parts_[i].elements();
    std::vector<GroupElement> next;
    next.reserve(out.size() * members.size());
    for (const auto& base : out) {
      for (const auto& v : members) {
        auto c = base.coords();
        std::copy(v.begin(), v.end(), c.begin() + static_cast<std::ptrdiff_t>(spec_.offset(i)));
        next.emplace_back(spec_, std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

ProductSubspace orthogonal_complement(const ProductSubspace& h) {
  std::vector<PrimeSubspace> parts;
  for (const auto& part : h.parts()) parts.push_back(part.complement());
  return {h.spec(), parts};
}

Coset::Coset(std::shared_ptr<const ProductSubspace> subspace, const GroupElement& r)
    : subspace_(std::move(subspace)), rep_(subspace_->reduce(r)) {}

bool Coset::contains(const GroupElement& x) const { return subspace_->reduce(x) == rep_; }

std::vector<GroupElement> Coset::elements() const {
  auto members = subspace_->elements();
  for (auto& h : members) h = h + rep_;
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<Coset> enumerate_cosets(const ProductSubspace& h) {
  const auto& spec = h.spec();
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) {
    std::vector<bool> pivot(spec.exponent(i), false);
    for (auto c : h.part(i).pivots()) pivot[c] = true;
    for (std::size_t c = 0; c < spec.exponent(i); ++c) {
      if (!pivot[c]) free.push_back(spec.offset(i) + c);
    }
  }
  std::uint64_t count = 1;
  for (auto j : free) {
    count *= spec.prime_of_coord(j);
    if (count > kEnumerationGuard) throw GuardExceeded("too many cosets to enumerate");
  }
  auto shared = std::make_shared<const ProductSubspace>(h);
  std::vector<Coset> out;
  out.reserve(count);
  std::vector<std::uint32_t> c(spec.rank(), 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t x = i;
    for (std::size_t k = free.size(); k-- > 0;) {
      const auto p = spec.prime_of_coord(free[k]);
      c[free[k]] = static_cast<std::uint32_t>(x % p);
      x /= p;
    }
    out.emplace_back(shared, GroupElement(spec, c));
  }
  return out;
}

GroupElement dilate_element(const GroupElement& x, std::uint32_t i) {
  const auto& spec = x.spec();
  if (!spec.single_prime()) throw Error("dilation is defined only over Z_p^n");
  const auto p = spec.prime(0);
  if (i == 0 || i >= p) throw Error("dilation factor must be a unit in [1, p-1]");
  const std::uint64_t inv = inverse_mod(i, p);
  auto c = x.coords();
  for (auto& v : c) v = static_cast<std::uint32_t>(v * inv % p);
  return GroupElement(spec, std::move(c));
}

}  // namespace absparse
