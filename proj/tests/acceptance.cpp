#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "absparse/cyclotomic.hpp"
#include "absparse/functions.hpp"
#include "absparse/group.hpp"
#include "absparse/rng.hpp"
#include "absparse/spectrum.hpp"
#include "absparse/tester.hpp"
#include "absparse/verify.hpp"

namespace {

using namespace absparse;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string str(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

double to_double(const mpq_class& q) { return q.get_d(); }

std::vector<DenseFunction> all_functions(const GroupSpec& spec) {
  const std::uint64_t n = spec.order();
  std::vector<DenseFunction> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::int8_t> table(n);
    for (std::uint64_t i = 0; i < n; ++i) table[i] = (mask >> i) & 1 ? -1 : 1;
    out.emplace_back(spec, std::move(table));
  }
  return out;
}

std::int64_t ceil_log(std::uint32_t p, std::size_t s) {
  std::int64_t k = 0;
  for (mpz_class pk = 1; pk < s; pk *= p) ++k;
  return k;
}

Outcome table_one() {
  Outcome o;
  const auto f = table1_z5sq();
  const auto s = dft_exact(f);
  const auto v = s.coefficient(from_index(f.spec(), 5));
  const auto expected = parse_cyclotomic(f.spec().primes(), "(-5 + 5*w5 - 5*w5^2 + w5^3 + w5^4)/25");
  const auto mag = magnitude_squared(v, 256).exact;
  const bool in_band = compare_real(mag, mpq_class(115 * 115, 10000 * 10000)) >= 0 &&
                       compare_real(mag, mpq_class(118 * 118, 10000 * 10000)) <= 0;
  o.pass = s.sparsity() == 25 && v == expected && in_band;
  o.detail = "s_f=" + std::to_string(s.sparsity()) + " coef(1,0)=" + to_string(v) +
             (v == expected ? " matches" : " differs from " + to_string(expected)) +
             " |coef|~" + str(std::sqrt(to_double(real_enclosure(mag, 128).lo)), 5) +
             (in_band ? " in" : " outside") + " [0.0115, 0.0118]";
  return o;
}

Outcome and_family() {
  Outcome o;
  for (std::uint32_t n = 2; n <= 6; ++n) {
    const auto f = and_n(n);
    const auto s = dft_exact(f);
    const auto primes = f.spec().primes();
    const mpq_class small(1, std::uint64_t{1} << (n - 1));
    bool ok = s.sparsity() == (std::size_t{1} << n);
    for (const auto& [idx, v] : s.coefficients()) {
      if (idx == 0) {
        ok &= v == CycRational::rational(primes, 1 - small);
      } else {
        ok &= v == CycRational::rational(primes, small) || v == CycRational::rational(primes, -small);
      }
    }
    if (!ok) {
      o.pass = false;
      o.detail += "n=" + std::to_string(n) + " mismatch ";
    }
  }
  if (o.pass) o.detail = "n=2..6 exact, s_f=2^n";
  return o;
}

Outcome at_family() {
  Outcome o;
  const auto f = at_function(5, 2);
  const auto s = dft_exact(f);
  const auto v = s.coefficient(from_index(f.spec(), 12));
  const auto mag = magnitude_squared(v, 256);
  const long double closed = 2.0L * std::pow(1.0L / (10.0L * std::cos(3.14159265358979323846264338327950288L / 5)), 2);
  const long double lo = std::sqrt(static_cast<long double>(to_double(mag.bounds.lo)));
  const long double hi = std::sqrt(static_cast<long double>(to_double(mag.bounds.hi)));
  const long double gap = std::max(std::fabs(lo - closed), std::fabs(hi - closed));
  const bool closed_ok = gap <= 1e-12L;
  const auto exact_closed = parse_cyclotomic(f.spec().primes(), "(8 - 12*w5 - 12*w5^4)/625");
  const bool exact_ok = mag.exact == exact_closed;

  CycRational smallest;
  bool first = true;
  for (const auto& [idx, m] : squared_magnitudes(s)) {
    if (first || compare_real(m, smallest) < 0) smallest = m;
    first = false;
  }
  const std::size_t sf = s.sparsity();
  const bool decays = compare_real(smallest, mpq_class(1, sf * sf)) < 0;
  const double min_abs = std::sqrt(to_double(real_enclosure(smallest, 128).lo));
  const double realized = std::log(1 / min_abs) / std::log(static_cast<double>(sf));
  const double c = small_coefficient_exponent(5, 2);
  const bool c_ok = std::fabs(c - 1.265) < 5e-4;
  o.pass = closed_ok && exact_ok && decays && c_ok;
  o.detail = "|AT(2,2)| gap " + str(static_cast<double>(gap), 3) + (closed_ok ? " ok" : " too large") +
             (exact_ok ? ", squared value equals closed form exactly" : ", squared value differs") +
             "; realized exponent " + str(realized, 5) + (decays ? " > 1" : " <= 1") + "; c=" + str(c, 6) +
             (c_ok ? " matches 1.265" : " does not match 1.265");
  return o;
}

Outcome lower_bound_sweep() {
  Outcome o;
  std::size_t violations = 0, checked = 0;
  for (const auto& spec : {GroupSpec::single(3, 2), GroupSpec::single(2, 3)}) {
    const std::uint32_t p = spec.prime(0);
    for (const auto& f : all_functions(spec)) {
      const auto s = dft_exact(f);
      const std::size_t sf = s.sparsity();
      mpz_class base = p * p * sf;
      mpz_class den;
      mpz_pow_ui(den.get_mpz_t(), base.get_mpz_t(), 2 * (p / 2));
      const mpq_class bound(mpz_class(1), den);
      for (const auto& [idx, m] : squared_magnitudes(s)) {
        ++checked;
        if (compare_real(m, bound) < 0) ++violations;
      }
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(checked) + " coefficients over 768 functions, " + std::to_string(violations) + " violations";
  return o;
}

Outcome granularity_sweep() {
  Outcome o;
  std::size_t violations = 0, checked = 0;
  for (const auto& spec : {GroupSpec::single(3, 2), GroupSpec::single(2, 3)}) {
    const std::uint32_t p = spec.prime(0);
    for (const auto& f : all_functions(spec)) {
      const auto s = dft_exact(f);
      const std::vector<std::int64_t> k = {ceil_log(p, s.sparsity()) + 1};
      for (const auto& [idx, v] : s.coefficients()) {
        ++checked;
        if (!is_granular(v, k)) ++violations;
      }
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(checked) + " coefficients over 768 functions, " + std::to_string(violations) + " not granular";
  return o;
}

Outcome projection_identity() {
  Outcome o;
  Rng rng(601);
  const auto spec = GroupSpec::single(3, 2);
  std::size_t bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto f = random_function(spec, rng);
    const ProductSubspace h(spec, {random_subspace(3, 2, rng.below(3), rng)});
    const auto r = from_index(spec, rng.below(9));
    const Coset coset(std::make_shared<const ProductSubspace>(h), r);
    if (project_via_average(f, r, h) != inverse_dft(project(dft_exact(f), coset))) ++bad;
  }
  o.pass = bad == 0;
  o.detail = "100 triples over Z_3^2, " + std::to_string(bad) + " mismatches";
  return o;
}

template <typename F>
double seconds_of(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome kronecker_equivalence() {
  Outcome o;
  Rng rng(701);
  std::size_t bad = 0;
  for (const auto& spec : {GroupSpec::single(2, 3), GroupSpec::single(3, 3), GroupSpec::single(5, 2)}) {
    for (int i = 0; i < 200; ++i) {
      const auto f = random_function(spec, rng);
      if (dft_kronecker(f) != dft_exact(f)) ++bad;
    }
  }
  const auto big = GroupSpec::single(3, 5);
  std::vector<DenseFunction> inputs;
  for (int i = 0; i < 5; ++i) inputs.push_back(random_function(big, rng));
  std::size_t sink = 0;
  const double exact = seconds_of([&] {
    for (const auto& f : inputs) sink += dft_exact(f).sparsity();
  });
  const double kron = seconds_of([&] {
    for (const auto& f : inputs) sink += dft_kronecker(f).sparsity();
  });
  const double speedup = exact / kron;
  o.pass = bad == 0 && speedup >= 5;
  o.detail = "600 functions, " + std::to_string(bad) + " mismatches; Z_3^5 speedup " + str(speedup, 3) + "x (" +
             std::to_string(sink) + " coefficients)";
  return o;
}

Outcome expectation_identity() {
  Outcome o;
  Rng rng(801);
  const auto spec = GroupSpec::single(3, 2);
  std::size_t checks = 0;
  for (int i = 0; i < 4; ++i) {
    const auto f = random_function(spec, rng);
    for (std::size_t d = 1; d <= 2; ++d) {
      for (const auto& part : enumerate_subspaces(3, 2, d)) {
        const auto rep = check_expectation_identity(f, ProductSubspace(spec, {part}));
        ++checks;
        if (rep.verdict != Verdict::kPass) o.pass = false;
      }
    }
  }
  o.detail = std::to_string(checks) + " (f, H) instances over Z_3^2" + (o.pass ? ", all exact" : ", mismatch found");
  return o;
}

Outcome completeness() {
  Outcome o;
  std::size_t runs = 0, yes = 0, too_dense = 0;
  for (std::uint32_t p : {2u, 3u}) {
    const auto spec = GroupSpec::single(p, 4);
    for (std::size_t s : {1u, 2u, 4u}) {
      std::size_t codim = 0;
      while (std::pow(p, codim + 1) <= s) ++codim;
      const auto params = derive_params(spec, s, mpq_class(1, 2));
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(900 + seed * 7 + p * 1000 + s);
        const ProductSubspace k(spec, {random_subspace(p, 4, 4 - codim, rng)});
        const auto f = coset_constant_random(spec, k, rng);
        if (sparsity_of(f) > s) ++too_dense;
        const auto report = run_exact(f, params, rng);
        ++runs;
        if (report.decision == Decision::kYes) ++yes;
      }
    }
  }
  o.pass = yes == runs && too_dense == 0;
  o.detail = std::to_string(yes) + "/" + std::to_string(runs) + " YES over Z_2^4 and Z_3^4, s in {1,2,4}";
  return o;
}

Outcome soundness() {
  Outcome o;
  const auto spec = GroupSpec::single(3, 4);
  const std::size_t s = 2;
  const mpq_class epsilon(1, 8 * 18 * 18);
  const auto params = derive_params(spec, s, epsilon);
  std::size_t no = 0, certified = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(1000 + seed);
    const auto f = random_function(spec, rng);
    if (compare_real(far_certificate(f, s), epsilon) < 0) continue;
    ++certified;
    if (run_exact(f, params, rng).decision == Decision::kNo) ++no;
  }
  o.pass = certified == 100 && no >= 85;
  o.detail = std::to_string(no) + "/" + std::to_string(certified) + " NO on certified inputs, s=2, eps=1/2592, t=" +
             std::to_string(params.t[0]) + (params.t_capped ? " (capped)" : "");
  return o;
}

Outcome append_stats(Outcome o, const VerificationReport& rep) {
  for (const auto& b : rep.stats) {
    if (!b.within) o.pass = false;
    o.detail += b.name + " " + str(b.observed, 4) + " vs " + str(b.expected, 4) + "+-" + str(3 * b.sigma, 3) +
                (b.within ? "; " : " OUT; ");
  }
  if (rep.verdict != Verdict::kPass) o.pass = false;
  return o;
}

Outcome statistical_bounds() {
  Outcome o;
  Rng rng(1101);
  o = append_stats(o, stat_bucket_properties(3, 8, 2, 3, 0.05, 100000, rng));
  const auto f = random_function(GroupSpec::single(3, 3), rng);
  o = append_stats(o, stat_estimator_concentration(f, 2, mpq_class(1, 10), 1200, rng));
  return o;
}

Outcome norm_products() {
  Outcome o;
  Rng rng(1201);
  const auto rep = check_norm_products(10000, rng);
  o.pass = rep.verdict == Verdict::kPass;
  for (const auto& [k, v] : rep.values) o.detail += k + "=" + v + " ";
  return o;
}

Outcome dilation() {
  Outcome o;
  Rng rng(1301);
  std::size_t bad = 0;
  for (const auto& spec : {GroupSpec::single(5, 1), GroupSpec::single(3, 2)}) {
    const std::uint32_t p = spec.prime(0);
    for (int i = 0; i < 100; ++i) {
      const auto f = random_function(spec, rng);
      const auto sf = dft_exact(f);
      for (std::uint32_t u = 1; u < p; ++u) {
        const auto sh = dft_exact(dilate_function(f, u));
        bool ok = sh.sparsity() == sf.sparsity();
        for (std::uint64_t r = 0; r < spec.order(); ++r) {
          auto c = from_index(spec, r).coords();
          for (auto& x : c) x = x * u % p;
          ok &= sh.coefficient(r) == sf.coefficient(GroupElement(spec, c));
        }
        if (!ok) ++bad;
      }
    }
  }
  o.pass = bad == 0;
  o.detail = "100 functions each over Z_5 and Z_3^2, " + std::to_string(bad) + " mismatches";
  return o;
}

Outcome deg_sandwich() {
  Outcome o;
  std::size_t bad = 0;
  for (const auto& spec : {GroupSpec::single(3, 2), GroupSpec::single(2, 3)}) {
    const std::uint32_t p = spec.prime(0);
    for (const auto& f : all_functions(spec)) {
      const auto s = dft_exact(f);
      const auto upper = static_cast<std::size_t>(std::pow(p, dim_support(s)));
      const auto lower = static_cast<std::size_t>(std::pow(p, deg_p(f)));
      if (!(upper >= s.sparsity() && s.sparsity() >= lower)) ++bad;
    }
  }
  o.pass = bad == 0;
  o.detail = "768 functions, " + std::to_string(bad) + " violations";
  return o;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"table1 spectrum", 1, table_one},
      {"AND_n spectra", 1, and_family},
      {"AT small coefficient", 5, at_family},
      {"coefficient lower bound sweep", 120, lower_bound_sweep},
      {"granularity sweep", 120, granularity_sweep},
      {"projection identity", 30, projection_identity},
      {"kronecker transform", 120, kronecker_equivalence},
      {"estimator expectation", 10, expectation_identity},
      {"tester completeness", 60, completeness},
      {"tester soundness", 300, soundness},
      {"statistical bounds", 300, statistical_bounds},
      {"norm products", 60, norm_products},
      {"dilation", 30, dilation},
      {"deg_p sandwich", 180, deg_sandwich},
  };
  return all;
}

bool run_one(std::size_t n) {
  const auto& c = criteria()[n - 1];
  Outcome o;
  const double elapsed = seconds_of([&] { o = c.run(); });
  const bool in_time = elapsed < c.budget_seconds;
  const bool pass = o.pass && in_time;
  std::printf("criterion %2zu %s: %s | %s | %.2f s (budget %.0f s)\n", n, pass ? "PASS" : "FAIL", c.name,
              o.detail.c_str(), elapsed, c.budget_seconds);
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::size_t which = 0;
  app.add_option("--criterion", which, "Criterion number; all when omitted")->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);
  bool ok = true;
  if (which != 0) {
    ok = run_one(which);
  } else {
    for (std::size_t n = 1; n <= criteria().size(); ++n) ok &= run_one(n);
  }
  return ok ? 0 : 1;
}
