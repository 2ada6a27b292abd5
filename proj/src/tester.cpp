#include "absparse/tester.hpp"

#include <algorithm>

#include <mpfr.h>

#include "absparse/error.hpp"
#include "absparse/rng.hpp"
#include "group_ring.hpp"

namespace absparse {

namespace {

mpz_class pow_z(std::uint64_t base, std::uint64_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

void check_label_guard(const GroupSpec& labels) {
  if (labels.order_z() > kEnumerationGuard) throw GuardExceeded("bucket label space exceeds the enumeration guard");
}

GroupElement combine(const ProductSubspace& h, const GroupElement& c) {
  const auto& spec = h.spec();
  std::vector<std::uint32_t> z;
  z.reserve(spec.rank());
  for (std::size_t i = 0; i < spec.num_factors(); ++i) {
    const Vec v = h.part(i).combine(c.factor(i));
    z.insert(z.end(), v.begin(), v.end());
  }
  return GroupElement(spec, std::move(z));
}

std::vector<std::int64_t> histogram(const GroupSpec& labels, std::span<const Sample> samples) {
  check_label_guard(labels);
  std::vector<std::int64_t> hist(labels.order(), 0);
  for (const auto& s : samples) {
    if (!(s.c.spec() == labels)) throw Error("sample label outside the label space");
    hist[lex_index(s.c)] += s.value;
  }
  return hist;
}

}  // namespace

GroupSpec TestParams::label_spec() const {
  std::vector<Factor> f;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) f.push_back({spec.prime(i), t[i]});
  return GroupSpec(std::move(f));
}

std::uint32_t bucket_dimension(std::uint32_t p, std::size_t parts, std::size_t s) {
  if (parts == 0) throw Error("bucket dimension needs at least one factor");
  const mpz_class target = pow_z(20, parts) * mpz_class(static_cast<unsigned long>(s)) *
                           mpz_class(static_cast<unsigned long>(s));
  std::uint32_t k = 0;
  while (pow_z(p, std::uint64_t{k} * parts) < target) ++k;
  return k + 1;
}

mpz_class sample_count(const mpq_class& tau, const GroupSpec& labels) {
  if (tau <= 0) throw Error("tau must be positive");
  mpz_class domain = 40;
  for (std::size_t i = 0; i < labels.num_factors(); ++i) domain *= pow_z(labels.prime(i), labels.exponent(i));
  mpfr_t lg, c, out;
  mpfr_inits2(256, lg, c, out, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_z(lg, domain.get_mpz_t(), MPFR_RNDU);
  mpfr_log(lg, lg, MPFR_RNDU);
  const mpq_class coeff = mpq_class(36) / (tau * tau);
  mpfr_set_q(c, coeff.get_mpq_t(), MPFR_RNDU);
  mpfr_mul(out, lg, c, MPFR_RNDU);
  mpz_class m;
  mpfr_get_z(m.get_mpz_t(), out, MPFR_RNDU);
  mpfr_clears(lg, c, out, static_cast<mpfr_ptr>(nullptr));
  return m;
}

TestParams derive_params(const GroupSpec& spec, std::size_t s, const mpq_class& epsilon,
                         const ParamOverrides& overrides) {
  if (spec.num_factors() == 0) throw Error("the tester needs a nontrivial group");
  if (s < 1) throw Error("s must be at least 1");
  if (epsilon <= 0) throw Error("epsilon must be positive");
  TestParams p;
  p.spec = spec;
  p.s = s;
  p.epsilon = epsilon;
  const std::size_t parts = spec.num_factors();
  if (overrides.t) {
    if (overrides.t->size() != parts) throw Error("t override needs one value per factor");
    for (auto v : *overrides.t) {
      if (v < 1) throw Error("t override values must be at least 1");
    }
    p.t_formula = *overrides.t;
    p.t_overridden = true;
  } else {
    for (std::size_t i = 0; i < parts; ++i) p.t_formula.push_back(bucket_dimension(spec.prime(i), parts, s));
  }
  p.t = p.t_formula;
  for (std::size_t i = 0; i < parts; ++i) {
    if (p.t[i] > spec.exponent(i)) {
      p.t[i] = spec.exponent(i);
      p.t_capped = true;
    }
  }
  if (overrides.tau) {
    if (*overrides.tau <= 0) throw Error("tau override must be positive");
    p.tau = *overrides.tau;
    p.tau_overridden = true;
  } else {
    mpz_class domain = 40;
    for (std::size_t i = 0; i < parts; ++i) domain *= pow_z(spec.prime(i), p.t[i]);
    const mpq_class first = epsilon * epsilon / mpq_class(domain);
    const mpz_class base = mpz_class(static_cast<unsigned long>(spec.m())) *
                           mpz_class(static_cast<unsigned long>(spec.m())) *
                           mpz_class(static_cast<unsigned long>(s));
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), spec.phi_m());
    const mpq_class second(mpz_class(1), power);
    p.tau = std::min(first, second);
    p.tau.canonicalize();
  }
  p.threshold = p.tau * mpq_class(2, 3);
  if (overrides.M) {
    if (*overrides.M < 1) throw Error("M override must be at least 1");
    p.M = *overrides.M;
    p.M_overridden = true;
  } else {
    p.M = sample_count(p.tau, p.label_spec());
  }
  return p;
}

ProductSubspace draw_bucket_subspace(const TestParams& params, Rng& rng) {
  std::vector<PrimeSubspace> parts;
  for (std::size_t i = 0; i < params.spec.num_factors(); ++i) {
    parts.push_back(random_subspace(params.spec.prime(i), params.spec.exponent(i), params.t[i], rng));
  }
  return ProductSubspace(params.spec, std::move(parts));
}

GroupElement bucket_label(const ProductSubspace& h, const GroupSpec& labels, const GroupElement& r) {
  std::vector<std::uint32_t> b;
  b.reserve(labels.rank());
  for (std::size_t i = 0; i < h.spec().num_factors(); ++i) {
    const std::uint32_t p = h.spec().prime(i);
    const auto ri = r.factor(i);
    for (const auto& v : h.part(i).basis()) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < v.size(); ++k) acc += std::uint64_t{ri[k]} * v[k];
      b.push_back(static_cast<std::uint32_t>(acc % p));
    }
  }
  return GroupElement(labels, std::move(b));
}

std::vector<CycRational> estimate_from_histogram(const GroupSpec& labels, std::span<const std::int64_t> hist,
                                                 std::int64_t total, const GroupElement& u) {
  check_label_guard(labels);
  if (total <= 0) throw Error("estimate needs at least one sample");
  const std::uint64_t n = labels.order();
  if (hist.size() != n) throw Error("histogram size does not match the label space");
  const detail::RawLayout layout(labels.primes());
  std::vector<std::int64_t> raw(n * layout.size, 0);
  for (std::uint64_t c = 0; c < n; ++c) raw[c * layout.size] = hist[c];
  detail::group_ring_transform(labels, layout, raw, false);
  const Primes primes = labels.primes();
  std::vector<CycRational> out;
  out.reserve(n);
  for (std::uint64_t b = 0; b < n; ++b) {
    const std::uint64_t shifted = lex_index(from_index(labels, b) + u);
    out.push_back(detail::raw_to_rational(primes, &raw[shifted * layout.size], layout.size, total));
  }
  return out;
}

std::vector<CycRational> estimate_all_buckets_fast(const GroupSpec& labels, std::span<const Sample> samples,
                                                   const GroupElement& u) {
  const auto hist = histogram(labels, samples);
  return estimate_from_histogram(labels, hist, static_cast<std::int64_t>(samples.size()), u);
}

std::vector<CycRational> estimate_all_buckets_naive(const GroupSpec& labels, std::span<const Sample> samples,
                                                    const GroupElement& u) {
  check_label_guard(labels);
  if (samples.empty()) throw Error("estimate needs at least one sample");
  const Primes primes = labels.primes();
  const detail::RawLayout layout(primes);
  std::vector<CycRational> out;
  std::vector<std::int64_t> acc(layout.size);
  for (std::uint64_t b = 0; b < labels.order(); ++b) {
    const GroupElement shifted = from_index(labels, b) + u;
    std::fill(acc.begin(), acc.end(), 0);
    for (const auto& s : samples) {
      acc[layout.index(pairing(s.c, shifted))] += s.value;
    }
    out.push_back(detail::raw_to_rational(primes, acc.data(), layout.size, static_cast<std::int64_t>(samples.size())));
  }
  return out;
}

std::vector<CycRational> exhaustive_expectation(const DenseFunction& f, const ProductSubspace& h,
                                                const GroupSpec& labels) {
  check_label_guard(labels);
  const auto& spec = f.spec();
  const std::uint64_t n = spec.order();
  const std::uint64_t l = labels.order();
  if (l != h.size()) throw Error("label space does not match the subspace");
  if (static_cast<double>(n) * static_cast<double>(l) > static_cast<double>(kEnumerationGuard) * 16) {
    throw GuardExceeded("exhaustive expectation exceeds the enumeration guard");
  }
  std::vector<std::int64_t> hist(l, 0);
  for (std::uint64_t c = 0; c < l; ++c) {
    const GroupElement z = combine(h, from_index(labels, c));
    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < n; ++x) {
      const GroupElement xe = from_index(spec, x);
      sum += f[x] * f(xe - z);
    }
    hist[c] = sum;
  }
  return estimate_from_histogram(labels, hist, static_cast<std::int64_t>(n * l), GroupElement(labels));
}

TestReport run_exact(const DenseFunction& f, const TestParams& params, Rng& rng) {
  if (!(f.spec() == params.spec)) throw Error("function group does not match the parameters");
  const GroupSpec labels = params.label_spec();
  TestReport rep;
  rep.params = params;
  rep.h = draw_bucket_subspace(params, rng);
  rep.u = from_index(labels, rng.below(labels.order()));
  const Spectrum s = dft_factorized(f);
  std::map<GroupElement, CycRational> weights;
  for (const auto& [idx, mag] : squared_magnitudes(s)) {
    const GroupElement b = bucket_label(rep.h, labels, from_index(params.spec, idx)) - rep.u;
    auto it = weights.find(b);
    if (it == weights.end()) {
      weights.emplace(b, mag);
    } else {
      it->second += mag;
    }
  }
  for (auto& [b, w] : weights) {
    BucketEstimate e{b, w, w, compare_real(w, params.threshold) >= 0};
    if (e.heavy) ++rep.heavy_count;
    rep.buckets.push_back(std::move(e));
  }
  rep.decision = rep.heavy_count <= params.s ? Decision::kYes : Decision::kNo;
  return rep;
}

TestReport run_sampling(QueryOracle& oracle, const TestParams& params, Rng& rng) {
  if (!(oracle.spec() == params.spec)) throw Error("oracle group does not match the parameters");
  if (!params.M_overridden && params.M > kSamplingLimit) {
    throw GuardExceeded("derived sample count " + params.M.get_str() + " exceeds the sampling limit; override M");
  }
  if (!params.M.fits_slong_p()) throw GuardExceeded("sample count does not fit in 64 bits");
  const auto m = static_cast<std::uint64_t>(params.M.get_si());
  const GroupSpec labels = params.label_spec();
  check_label_guard(labels);
  TestReport rep;
  rep.params = params;
  rep.h = draw_bucket_subspace(params, rng);
  rep.u = from_index(labels, rng.below(labels.order()));
  const auto& spec = params.spec;
  const std::uint64_t before = oracle.queries();
  std::vector<std::int64_t> hist(labels.order(), 0);
  std::vector<std::uint32_t> xc(spec.rank());
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t c = rng.below(labels.order());
    for (std::size_t j = 0; j < xc.size(); ++j) xc[j] = static_cast<std::uint32_t>(rng.below(spec.prime_of_coord(j)));
    const GroupElement x(spec, xc);
    const GroupElement z = combine(rep.h, from_index(labels, c));
    hist[c] += oracle.query(x) * oracle.query(x - z);
  }
  rep.queries = oracle.queries() - before;
  const auto est = estimate_from_histogram(labels, hist, static_cast<std::int64_t>(m), rep.u);
  for (std::uint64_t b = 0; b < est.size(); ++b) {
    if (est[b].is_zero()) continue;
    BucketEstimate e{from_index(labels, b), est[b], std::nullopt, compare_real(est[b], params.threshold) >= 0};
    if (e.heavy) ++rep.heavy_count;
    rep.buckets.push_back(std::move(e));
  }
  rep.decision = rep.heavy_count <= params.s ? Decision::kYes : Decision::kNo;
  return rep;
}

}  // namespace absparse
