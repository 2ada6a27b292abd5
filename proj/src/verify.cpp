#include "absparse/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <mpfr.h>

#include "absparse/error.hpp"
#include "absparse/functions.hpp"
#include "absparse/rng.hpp"
#include "absparse/tester.hpp"

namespace absparse {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string real_decimal(const CycRational& v) { return decimal_eval(v, 192, 15).first; }

std::string ks_string(const std::vector<std::int64_t>& k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s;
}

mpz_class pow_z(const mpz_class& base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

std::vector<std::int64_t> levels(const GroupSpec& spec, std::size_t s) {
  std::vector<std::int64_t> k;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) k.push_back(granularity_level(spec.prime(i), spec.num_factors(), s));
  return k;
}

/// Index of the support element with the smallest |f̂|², with that value.
std::pair<std::uint64_t, CycRational> min_magnitude(const std::map<std::uint64_t, CycRational>& mags) {
  auto best = mags.begin();
  for (auto it = std::next(mags.begin()); it != mags.end(); ++it) {
    if (compare_real(it->second, best->second) < 0) best = it;
  }
  return *best;
}

Witness coefficient_witness(const Spectrum& s, std::uint64_t idx, std::string bound, std::string detail) {
  return {character_string(from_index(s.spec(), idx)), to_string(s.coefficient(idx)), std::move(bound),
          std::move(detail)};
}

StatBand band(std::string name, std::uint64_t trials, double observed, double expected, double sigma,
              bool one_sided) {
  StatBand b{std::move(name), trials, observed, expected, sigma, one_sided, false};
  b.within = one_sided ? observed <= expected + 3 * sigma : std::abs(observed - expected) <= 3 * sigma;
  return b;
}

Verdict stats_verdict(const std::vector<StatBand>& stats) {
  for (const auto& b : stats) {
    if (!b.within) return Verdict::kFail;
  }
  return Verdict::kPass;
}

std::vector<std::uint32_t> capped_t(const GroupSpec& spec, std::uint32_t t) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) out.push_back(std::min(t, spec.exponent(i)));
  return out;
}

ProductSubspace draw(const GroupSpec& spec, const std::vector<std::uint32_t>& t, Rng& rng) {
  std::vector<PrimeSubspace> parts;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) {
    parts.push_back(random_subspace(spec.prime(i), spec.exponent(i), t[i], rng));
  }
  return ProductSubspace(spec, std::move(parts));
}

GroupSpec labels_of(const GroupSpec& spec, const std::vector<std::uint32_t>& t) {
  std::vector<Factor> f;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) f.push_back({spec.prime(i), t[i]});
  return GroupSpec(std::move(f));
}

/// Sample covariance of two indicator sequences with its standard error.
std::pair<double, double> covariance(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double c = 0, c2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = (a[i] - ma) * (b[i] - mb);
    c += v;
    c2 += v * v;
  }
  c /= n;
  const double var = std::max(c2 / n - c * c, 0.0);
  return {c, std::sqrt(var / n)};
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kCertified: return "certified-mu-close";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kInformational: return "informational";
  }
  return "unknown";
}

std::int64_t granularity_level(std::uint32_t p, std::size_t parts, std::size_t s) {
  if (parts == 0 || s == 0) throw Error("granularity level needs parts ≥ 1 and s ≥ 1");
  std::int64_t k = 0;
  mpz_class power = 1;
  const mpz_class target(static_cast<unsigned long>(s));
  mpz_class step;
  mpz_ui_pow_ui(step.get_mpz_t(), p, parts);
  while (power < target) {
    power *= step;
    ++k;
  }
  return k + 1;
}

std::string character_string(const GroupElement& r) {
  std::string s = "(";
  for (std::size_t i = 0; i < r.coords().size(); ++i) s += (i ? "," : "") + std::to_string(r.coords()[i]);
  return s + ")";
}

VerificationReport check_granularity_exact(const DenseFunction& f, std::optional<std::size_t> s) {
  VerificationReport rep;
  rep.check = "granularity";
  const Spectrum spec = dft_factorized(f);
  const std::size_t sf = spec.sparsity();
  const std::size_t level_s = s.value_or(sf);
  const auto k = levels(f.spec(), level_s);
  rep.add("s_f", std::to_string(sf));
  rep.add("s", std::to_string(level_s));
  rep.add("k", ks_string(k));
  for (const auto& [idx, v] : spec.coefficients()) {
    if (!is_granular(v, k)) {
      rep.verdict = Verdict::kFail;
      rep.witnesses.push_back(coefficient_witness(spec, idx, "k=" + ks_string(k), "coefficient is not k-granular"));
    }
  }
  return rep;
}

VerificationReport check_mu_close(const DenseFunction& f, std::size_t s) {
  VerificationReport rep;
  rep.check = "mu-close";
  if (s < 1) throw Error("s must be at least 1");
  const Spectrum spec = dft_factorized(f);
  const TopS top = tail_top_s(spec, s);
  const auto k = levels(f.spec(), s);
  const CycRational bound_sq = top.mu * top.mu * mpq_class(1, static_cast<long>(s));
  rep.add("s", std::to_string(s));
  rep.add("k", ks_string(k));
  rep.add("mu", to_string(top.mu));
  rep.add("mu_decimal", real_decimal(top.mu));
  rep.add("bound_squared", to_string(bound_sq));
  rep.verdict = Verdict::kCertified;
  double worst = 0;
  for (auto idx : top.top) {
    const CycRational v = spec.coefficient(idx);
    const GranularCandidate g = nearest_granular(v, k);
    const CycRational d2 = magnitude_squared(v - g.candidate).exact;
    worst = std::max(worst, g.distance_bound);
    if (g.candidate.is_zero() || compare_real(d2, bound_sq) > 0) {
      rep.verdict = Verdict::kInconclusive;
      rep.witnesses.push_back(coefficient_witness(spec, idx, to_string(bound_sq),
                                                  "nearest granular " + to_string(g.candidate) +
                                                      ", squared distance " + real_decimal(d2)));
    }
  }
  rep.add("max_distance_upper", fmt(worst));
  return rep;
}

VerificationReport check_coeff_lower_bounds(const DenseFunction& f) {
  VerificationReport rep;
  rep.check = "lower-bounds";
  const GroupSpec& g = f.spec();
  const Spectrum spec = dft_factorized(f);
  const std::size_t sf = spec.sparsity();
  const mpz_class sz(static_cast<unsigned long>(sf));
  const auto mags = squared_magnitudes(spec);
  const auto [min_idx, min_sq] = min_magnitude(mags);
  rep.add("s_f", std::to_string(sf));
  rep.add("min_character", character_string(from_index(g, min_idx)));
  rep.add("min_abs_squared", to_string(min_sq));
  rep.add("min_abs", fmt(std::sqrt(std::max(0.0, numeric_eval(min_sq).value.real()))));

  std::vector<std::pair<std::string, mpq_class>> bounds;
  if (g.single_prime()) {
    const std::uint32_t p = g.prime(0);
    const mpq_class b(mpz_class(1), pow_z(mpz_class(p) * p * sz, p / 2));
    bounds.emplace_back("prime", b * b);
  }
  const mpz_class m(static_cast<unsigned long>(g.m()));
  const mpq_class gen(mpz_class(1), pow_z(m * m * sz, (g.phi_m() + 1) / 2));
  bounds.emplace_back("generalized", gen * gen);
  bounds.emplace_back("p_independent", mpq_class(mpz_class(1), pow_z((sz + 1) * (sz + 1) * sz, sf)));

  for (const auto& [name, b2] : bounds) {
    rep.add(name + "_bound_squared", b2.get_str());
    rep.add(name + "_bound", fmt(std::sqrt(b2.get_d())));
    if (compare_real(min_sq, b2) < 0) {
      rep.verdict = Verdict::kFail;
      rep.witnesses.push_back(coefficient_witness(spec, min_idx, b2.get_str(), name + " bound violated"));
    }
  }
  return rep;
}

VerificationReport check_boolean_repair(const DenseFunction& f, std::size_t s) {
  VerificationReport rep;
  rep.check = "repair";
  if (s < 1) throw Error("s must be at least 1");
  const GroupSpec& g = f.spec();
  const Spectrum spec = dft_factorized(f);
  const TopS top = tail_top_s(spec, s);
  rep.add("s", std::to_string(s));
  rep.add("mu", to_string(top.mu));
  rep.add("mu_decimal", real_decimal(top.mu));
  if (!g.single_prime()) {
    rep.verdict = Verdict::kInformational;
    rep.add("note", "the repair bound is stated for Z_p^n");
    return rep;
  }
  const std::uint32_t p = g.prime(0);
  const mpq_class hyp(mpz_class(1), 8 * pow_z(mpz_class(p) * p * static_cast<unsigned long>(s), p - 1));
  rep.add("hypothesis_bound", hyp.get_str());
  if (compare_real(top.mu, hyp) > 0) {
    rep.verdict = Verdict::kInconclusive;
    rep.add("note", "mu exceeds the hypothesis bound");
    return rep;
  }
  const std::vector<std::int64_t> k = {granularity_level(p, 1, s)};
  std::map<std::uint64_t, CycRational> coeffs;
  for (auto idx : top.top) {
    const GranularCandidate c = nearest_granular(spec.coefficient(idx), k);
    if (!c.candidate.is_zero()) coeffs.emplace(idx, c.candidate);
  }
  const Spectrum repaired(g, coeffs);
  const auto values = inverse_dft(repaired);
  const auto boolean = as_boolean(g, values);
  rep.add("repaired_sparsity", std::to_string(repaired.sparsity()));
  if (!boolean) {
    rep.verdict = Verdict::kFail;
    for (std::uint64_t x = 0; x < values.size(); ++x) {
      const auto& v = values[x];
      if (!(v == CycRational::rational(g.primes(), 1) || v == CycRational::rational(g.primes(), -1))) {
        rep.witnesses.push_back({character_string(from_index(g, x)), to_string(v), "±1", "repaired value is not ±1"});
        break;
      }
    }
    return rep;
  }
  const Distances d = l2_and_hamming(f, *boolean);
  rep.add("l2_squared", d.l2_squared.get_str());
  rep.add("disagreement", d.disagreement.get_str());
  rep.add("distance_bound", to_string(top.mu * mpq_class(2)));
  if (compare_real(top.mu * mpq_class(2), d.l2_squared) < 0) {
    rep.verdict = Verdict::kFail;
    rep.witnesses.push_back({"", d.l2_squared.get_str(), to_string(top.mu * mpq_class(2)),
                             "squared distance to the repaired function exceeds 2mu"});
  }
  if (repaired.sparsity() > s) {
    rep.verdict = Verdict::kFail;
    rep.witnesses.push_back({"", std::to_string(repaired.sparsity()), std::to_string(s), "repaired function is not s-sparse"});
  }
  return rep;
}

VerificationReport check_norm_products(std::size_t trials, Rng& rng, const std::vector<std::uint32_t>& primes) {
  VerificationReport rep;
  rep.check = "norm-products";
  for (std::uint32_t p : primes) {
    if (!is_prime(p)) throw Error("norm products need prime moduli");
    std::size_t tested = 0, skipped = 0;
    mpz_class smallest;
    std::vector<std::int64_t> raw(p);
    while (tested < trials) {
      for (auto& c : raw) c = static_cast<std::int64_t>(rng.below(19)) - 9;
      const CycInt g = CycInt::from_raw({p}, raw);
      if (g.is_zero()) {
        ++skipped;
        continue;
      }
      ++tested;
      const mpz_class n = galois_norm_product(g);
      const mpz_class a = abs(n);
      if (tested == 1 || a < smallest) smallest = a;
      if (a < 1) {
        rep.verdict = Verdict::kFail;
        rep.witnesses.push_back({"", to_string(g), "1", "norm product " + n.get_str()});
      }
    }
    const std::string key = "p" + std::to_string(p);
    rep.add(key + "_tested", std::to_string(tested));
    rep.add(key + "_skipped", std::to_string(skipped));
    rep.add(key + "_min_abs_norm", tested ? smallest.get_str() : "none");
  }
  return rep;
}

double small_coefficient_exponent(std::uint32_t p, std::uint32_t n) {
  const double lp = std::log(static_cast<double>(p));
  return std::log(std::abs(2 * std::cos(M_PI / p))) / lp + 1 - std::log(2.0) / (n * lp);
}

VerificationReport check_small_coefficient_family(std::uint32_t p, std::uint32_t n) {
  VerificationReport rep;
  rep.check = "small-coefficient";
  const DenseFunction f = at_function(p, n);
  const Spectrum spec = dft_factorized(f);
  const std::size_t sf = spec.sparsity();
  const auto mags = squared_magnitudes(spec);
  const auto [min_idx, min_sq] = min_magnitude(mags);
  rep.add("p", std::to_string(p));
  rep.add("n", std::to_string(n));
  rep.add("s_f", std::to_string(sf));
  rep.add("min_character", character_string(from_index(f.spec(), min_idx)));
  rep.add("min_abs_squared", to_string(min_sq));

  const MagnitudeSquared ms = magnitude_squared(spec.coefficient(min_idx), 256);
  mpfr_t lo, hi, closed, tmp;
  mpfr_inits2(256, lo, hi, closed, tmp, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(lo, ms.bounds.lo.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(lo, lo, MPFR_RNDD);
  mpfr_set_q(hi, ms.bounds.hi.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(hi, hi, MPFR_RNDU);
  mpfr_const_pi(tmp, MPFR_RNDN);
  mpfr_div_ui(tmp, tmp, p, MPFR_RNDN);
  mpfr_cos(tmp, tmp, MPFR_RNDN);
  mpfr_mul_ui(tmp, tmp, 2 * p, MPFR_RNDN);
  mpfr_ui_div(tmp, 1, tmp, MPFR_RNDN);
  mpfr_pow_ui(closed, tmp, n, MPFR_RNDN);
  mpfr_mul_ui(closed, closed, 2, MPFR_RNDN);
  mpfr_sub(lo, lo, closed, MPFR_RNDD);
  mpfr_sub(hi, hi, closed, MPFR_RNDU);
  const double gap = std::max(std::abs(mpfr_get_d(lo, MPFR_RNDU)), std::abs(mpfr_get_d(hi, MPFR_RNDU)));
  const double closed_d = mpfr_get_d(closed, MPFR_RNDN);
  mpfr_clears(lo, hi, closed, tmp, static_cast<mpfr_ptr>(nullptr));

  const double min_abs = std::sqrt(numeric_eval(min_sq).value.real());
  const double realized = std::log(1 / min_abs) / std::log(static_cast<double>(sf));
  const mpq_class inv_sf_sq(mpz_class(1), mpz_class(static_cast<unsigned long>(sf)) * static_cast<unsigned long>(sf));
  const bool exponent_above_one = sf > 1 && compare_real(min_sq, inv_sf_sq) < 0;
  const bool matches = gap <= 1e-12;
  rep.add("min_abs", fmt(min_abs));
  rep.add("closed_form", fmt(closed_d));
  rep.add("closed_form_gap", fmt(gap));
  rep.add("realized_exponent", fmt(realized));
  rep.add("closed_form_c", fmt(small_coefficient_exponent(p, n)));
  if (p < 5) {
    rep.verdict = Verdict::kInformational;
    return rep;
  }
  if (!matches) {
    rep.verdict = Verdict::kFail;
    rep.witnesses.push_back(coefficient_witness(spec, min_idx, fmt(closed_d), "minimum differs from the closed form"));
  }
  if (!exponent_above_one) {
    rep.verdict = Verdict::kFail;
    rep.witnesses.push_back(coefficient_witness(spec, min_idx, inv_sf_sq.get_str(), "realized exponent is not above 1"));
  }
  return rep;
}

VerificationReport check_expectation_identity(const DenseFunction& f, const ProductSubspace& h) {
  VerificationReport rep;
  rep.check = "expectation";
  const GroupSpec& g = f.spec();
  std::vector<std::uint32_t> t;
  for (const auto& part : h.parts()) {
    if (part.dim() == 0) throw Error("expectation check needs a nonzero subspace in every factor");
    t.push_back(static_cast<std::uint32_t>(part.dim()));
  }
  const GroupSpec labels = labels_of(g, t);
  const auto averages = exhaustive_expectation(f, h, labels);
  std::vector<CycRational> weights(labels.order(), CycRational(g.primes()));
  for (const auto& [idx, mag] : squared_magnitudes(dft_factorized(f))) {
    weights[lex_index(bucket_label(h, labels, from_index(g, idx)))] += mag;
  }
  rep.add("buckets", std::to_string(labels.order()));
  for (std::uint64_t b = 0; b < labels.order(); ++b) {
    if (!(averages[b] == weights[b])) {
      rep.verdict = Verdict::kFail;
      rep.witnesses.push_back({character_string(from_index(labels, b)), to_string(averages[b]), to_string(weights[b]),
                               "average differs from the bucket weight"});
    }
  }
  return rep;
}

VerificationReport stat_bucket_properties(std::uint32_t p, std::uint32_t n, std::uint32_t t, std::size_t s,
                                          double delta, std::size_t trials, Rng& rng) {
  VerificationReport rep;
  rep.check = "bucket-stats";
  if (n < 2 || t < 1 || t > n) throw Error("bucket statistics need n ≥ 2 and 1 ≤ t ≤ n");
  if (trials < 1000) throw Error("bucket statistics need at least 1000 trials");
  const GroupSpec spec = GroupSpec::single(p, n);
  const GroupSpec labels = GroupSpec::single(p, t);
  const std::uint64_t nl = labels.order();
  std::vector<std::uint32_t> e1(n, 0), e2(n, 0), twice(n, 0);
  e1[0] = 1;
  e2[1] = 1;
  twice[0] = 2 % p;
  const GroupElement chi(spec, e1), indep(spec, e2), scaled(spec, twice);
  const GroupElement b(labels);

  std::vector<std::uint8_t> in1(trials), in_scaled(trials), in_indep(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    Rng r = rng.split(i);
    const ProductSubspace h(spec, {random_subspace(p, n, t, r)});
    const GroupElement target = b + from_index(labels, r.below(nl));
    in1[i] = bucket_label(h, labels, chi) == target;
    in_scaled[i] = bucket_label(h, labels, scaled) == target;
    in_indep[i] = bucket_label(h, labels, indep) == target;
  }
  const double q = 1.0 / static_cast<double>(nl);
  const double n_d = static_cast<double>(trials);
  double hits = 0;
  for (auto v : in1) hits += v;
  rep.stats.push_back(band("membership", trials, hits / n_d, q, std::sqrt(q * (1 - q) / n_d), false));
  if (p > 2) {
    const auto [c, se] = covariance(in1, in_scaled);
    rep.stats.push_back(band("covariance_scalar_multiple", trials, c, 0, se, false));
  }
  {
    const auto [c, se] = covariance(in1, in_indep);
    rep.stats.push_back(band("covariance_independent", trials, c, 0, se, false));
  }

  std::uint32_t tc = 0;
  {
    double power = 1;
    while (power < static_cast<double>(s * s) / delta) {
      power *= p;
      ++tc;
    }
  }
  rep.add("collision_t", std::to_string(tc));
  rep.add("s", std::to_string(s));
  rep.add("delta", fmt(delta));
  if (tc > n) {
    rep.add("collision_note", "collision dimension exceeds n; not run");
  } else {
    Rng pick = rng.split(trials);
    std::set<std::uint64_t> chosen;
    while (chosen.size() < s + 1) {
      const std::uint64_t idx = pick.below(spec.order());
      if (idx != 0) chosen.insert(idx);
    }
    const GroupSpec clabels = GroupSpec::single(p, tc);
    std::uint64_t collisions = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      Rng r = rng.split(trials + 1 + i);
      const ProductSubspace h(spec, {random_subspace(p, n, tc, r)});
      std::set<std::uint64_t> seen;
      for (auto idx : chosen) seen.insert(lex_index(bucket_label(h, clabels, from_index(spec, idx))));
      if (seen.size() < chosen.size()) ++collisions;
    }
    rep.stats.push_back(band("collision", trials, static_cast<double>(collisions) / n_d, delta,
                             std::sqrt(delta * (1 - delta) / n_d), true));
  }
  rep.add("p", std::to_string(p));
  rep.add("n", std::to_string(n));
  rep.add("t", std::to_string(t));
  rep.verdict = stats_verdict(rep.stats);
  return rep;
}

VerificationReport stat_estimator_concentration(const DenseFunction& f, std::uint32_t t, const mpq_class& tau,
                                                std::size_t repetitions, Rng& rng, std::optional<std::uint64_t> m) {
  VerificationReport rep;
  rep.check = "concentration";
  if (repetitions < 1) throw Error("concentration needs at least one repetition");
  const GroupSpec& g = f.spec();
  ParamOverrides o;
  o.t = capped_t(g, t);
  o.tau = tau;
  const mpz_class derived = sample_count(tau, labels_of(g, *o.t));
  o.M = m ? mpz_class(static_cast<unsigned long>(*m)) : derived;
  const TestParams params = derive_params(g, 1, mpq_class(1), o);
  const GroupSpec labels = params.label_spec();
  const auto mags = squared_magnitudes(dft_factorized(f));
  const CycRational limit = CycRational::rational(g.primes(), tau * tau / 9);

  std::uint64_t pairs = 0, exceed = 0;
  for (std::size_t i = 0; i < repetitions; ++i) {
    Rng r = rng.split(i);
    QueryOracle oracle(f);
    const TestReport run = run_sampling(oracle, params, r);
    std::vector<CycRational> wt(labels.order(), CycRational(g.primes()));
    for (const auto& [idx, mag] : mags) {
      wt[lex_index(bucket_label(run.h, labels, from_index(g, idx)) - run.u)] += mag;
    }
    std::vector<CycRational> est(labels.order(), CycRational(g.primes()));
    for (const auto& b : run.buckets) est[lex_index(b.label)] = b.estimate;
    for (std::uint64_t b = 0; b < labels.order(); ++b) {
      ++pairs;
      if (compare_real(magnitude_squared(est[b] - wt[b]).exact, limit) > 0) ++exceed;
    }
  }
  const double q = 1.0 / (10.0 * static_cast<double>(labels.order()));
  const double n_d = static_cast<double>(pairs);
  rep.add("tau", tau.get_str());
  rep.add("M", params.M.get_str());
  rep.add("derived_M", derived.get_str());
  rep.add("repetitions", std::to_string(repetitions));
  rep.add("exceedances", std::to_string(exceed));
  rep.stats.push_back(band("exceedance", pairs, static_cast<double>(exceed) / n_d, q, std::sqrt(q * (1 - q) / n_d), true));
  rep.verdict = params.M < derived ? Verdict::kInformational : stats_verdict(rep.stats);
  return rep;
}

VerificationReport stat_variance_bound(const DenseFunction& f, std::uint32_t t, std::size_t trials, Rng& rng) {
  VerificationReport rep;
  rep.check = "variance";
  if (trials < 2) throw Error("variance bound needs at least two trials");
  const GroupSpec& g = f.spec();
  const auto tv = capped_t(g, t);
  const GroupSpec labels = labels_of(g, tv);
  const auto mags = squared_magnitudes(dft_factorized(f));
  auto largest = mags.begin();
  for (auto it = mags.begin(); it != mags.end(); ++it) {
    if (compare_real(it->second, largest->second) > 0) largest = it;
  }
  const double tau = numeric_eval(largest->second).value.real();
  std::vector<std::pair<std::uint64_t, double>> weights;
  for (const auto& [idx, mag] : mags) weights.emplace_back(idx, numeric_eval(mag).value.real());

  std::vector<double> y(trials, 0);
  for (std::size_t i = 0; i < trials; ++i) {
    Rng r = rng.split(i);
    const ProductSubspace h = draw(g, tv, r);
    const GroupElement u = from_index(labels, r.below(labels.order()));
    for (const auto& [idx, w] : weights) {
      if (bucket_label(h, labels, from_index(g, idx)) == u) y[i] += w;
    }
  }
  const double n_d = static_cast<double>(trials);
  double mean = 0;
  for (double v : y) mean += v;
  mean /= n_d;
  double m2 = 0, m4 = 0;
  for (double v : y) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double var = m2 / (n_d - 1);
  const double se = std::sqrt(std::max(m4 / n_d - (m2 / n_d) * (m2 / n_d), 0.0) / n_d);
  rep.add("tau", fmt(tau));
  rep.add("mean", fmt(mean));
  rep.add("variance", fmt(var));
  rep.stats.push_back(band("variance", trials, var, tau * mean, se, true));
  rep.verdict = stats_verdict(rep.stats);
  return rep;
}

}  // namespace absparse
