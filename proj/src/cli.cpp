#include "absparse/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "absparse/error.hpp"
#include "absparse/functions.hpp"
#include "absparse/io.hpp"
#include "absparse/rng.hpp"
#include "absparse/spectrum.hpp"
#include "absparse/tester.hpp"
#include "absparse/verify.hpp"

namespace absparse {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::uint64_t seed = 1;
  bool json = false;
  std::string input = "-";

  std::size_t s = 1;
  bool s_given = false;
  std::string epsilon = "1/2";
  std::string backend = "exact";
  std::string override_t, override_tau, override_m;

  std::string check;
  std::size_t trials = 0;
  std::uint32_t p = 3;
  std::uint32_t n = 2;
  std::uint32_t t = 2;
  std::string tau = "1/10";
  std::uint64_t m = 0;
  std::size_t reps = 200;
  double delta = 0.05;

  std::string family;
  std::uint32_t kdim = 0;
  int value = 1;
  std::string out_path;

  std::size_t repeats = 3;
  std::size_t samples = 20000;
};

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    buf << f.rdbuf();
  }
  return buf.str();
}

void emit(std::ostream& out, const Options& o, const std::string& command, const std::string& digest,
          ordered_json params, ordered_json payload, const std::vector<std::pair<std::string, std::string>>& text) {
  if (o.json) {
    out << envelope(command, digest, o.seed, std::move(params), std::move(payload)).dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : text) out << k << ": " << v << "\n";
}

std::vector<std::uint32_t> parse_uint_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    const mpq_class q = parse_rational(tok);
    if (q.get_den() != 1 || q < 0 || q > 1000000) throw Error("invalid list entry '" + tok + "'");
    out.push_back(static_cast<std::uint32_t>(q.get_num().get_ui()));
  }
  return out;
}

int run_analyze(const Options& o, std::istream& in, std::ostream& out) {
  const std::string text = read_input(o.input, in);
  const DenseFunction f = parse_function_file(text);
  const Spectrum s = dft_factorized(f);
  const auto mags = squared_magnitudes(s);
  auto min = mags.begin();
  for (auto it = mags.begin(); it != mags.end(); ++it) {
    if (compare_real(it->second, min->second) < 0) min = it;
  }
  const auto gran = check_granularity_exact(f);
  std::string k;
  for (const auto& [key, v] : gran.values) {
    if (key == "k") k = v;
  }
  std::string deg = "skipped";
  if (f.spec().single_prime() && f.spec().order() <= 729) deg = std::to_string(deg_p(f));
  std::string dim = "n/a";
  if (f.spec().single_prime()) dim = std::to_string(dim_support(s));
  const std::string min_abs = decimal_eval(magnitude_squared(s.coefficient(min->first)).exact, 192, 12).first;

  ordered_json payload;
  payload["sparsity"] = s.sparsity();
  payload["min_character"] = character_string(from_index(f.spec(), min->first));
  payload["min_coefficient"] = to_string(s.coefficient(min->first));
  payload["min_abs_squared"] = to_string(min->second);
  payload["granularity_k"] = k;
  payload["granular"] = gran.verdict == Verdict::kPass;
  payload["deg_p"] = deg;
  payload["dim_support"] = dim;
  emit(out, o, "analyze", fnv1a_digest(text), ordered_json::object(), payload,
       {{"s_f", std::to_string(s.sparsity())},
        {"min_character", character_string(from_index(f.spec(), min->first))},
        {"min_coefficient", to_string(s.coefficient(min->first))},
        {"min_abs_squared", min_abs},
        {"granularity_k", k},
        {"granular", gran.verdict == Verdict::kPass ? "yes" : "no"},
        {"deg_p", deg},
        {"dim_support", dim}});
  return kExitOk;
}

int run_transform(const Options& o, std::istream& in, std::ostream& out) {
  const std::string text = read_input(o.input, in);
  const DenseFunction f = parse_function_file(text);
  const Spectrum s = dft_factorized(f);
  if (o.json) {
    emit(out, o, "transform", fnv1a_digest(text), ordered_json::object(), spectrum_json(s), {});
    return kExitOk;
  }
  out << "sparsity: " << s.sparsity() << "\n";
  for (const auto& [idx, v] : s.coefficients()) {
    out << character_string(from_index(f.spec(), idx)) << " " << to_string(v) << "\n";
  }
  return kExitOk;
}

int run_test(const Options& o, std::istream& in, std::ostream& out) {
  const std::string text = read_input(o.input, in);
  const DenseFunction f = parse_function_file(text);
  ParamOverrides ov;
  if (!o.override_t.empty()) ov.t = parse_uint_list(o.override_t);
  if (!o.override_tau.empty()) ov.tau = parse_rational(o.override_tau);
  if (!o.override_m.empty()) {
    const mpq_class m = parse_rational(o.override_m);
    if (m.get_den() != 1) throw Error("M must be an integer");
    ov.M = m.get_num();
  }
  const mpq_class eps = parse_rational(o.epsilon);
  if (eps <= 0 || eps > 2) throw Error("epsilon must lie in (0, 2]");
  TestParams params = derive_params(f.spec(), o.s, eps, ov);
  params.backend = o.backend == "sampling" ? Backend::kSampling : Backend::kExact;
  Rng rng(o.seed);
  TestReport rep;
  if (params.backend == Backend::kExact) {
    rep = run_exact(f, params, rng);
  } else {
    QueryOracle oracle(f);
    rep = run_sampling(oracle, params, rng);
  }
  ordered_json payload = test_report_json(rep);
  payload["seed"] = o.seed;
  const std::string decision = rep.decision == Decision::kYes ? "YES" : "NO";
  std::string t;
  for (std::size_t i = 0; i < params.t.size(); ++i) t += (i ? "," : "") + std::to_string(params.t[i]);
  emit(out, o, "test", fnv1a_digest(text), params_json(params), payload,
       {{"decision", decision},
        {"heavy_count", std::to_string(rep.heavy_count)},
        {"s", std::to_string(params.s)},
        {"t", t + (params.t_capped ? " (capped)" : "")},
        {"tau", params.tau.get_str()},
        {"M", params.M.get_str()},
        {"queries", std::to_string(rep.queries)},
        {"backend", o.backend}});
  return rep.decision == Decision::kYes ? kExitOk : kExitNo;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::kPass:
    case Verdict::kCertified: return kExitOk;
    case Verdict::kFail: return kExitFail;
    case Verdict::kInconclusive:
    case Verdict::kInformational: return kExitInconclusive;
  }
  return kExitFail;
}

int run_verify(const Options& o, std::istream& in, std::ostream& out) {
  Rng rng(o.seed);
  std::string text;
  const auto need_input = [&]() {
    text = read_input(o.input, in);
    return parse_function_file(text);
  };
  ordered_json params;
  params["check"] = o.check;
  VerificationReport rep;
  if (o.check == "granularity") {
    if (o.s_given) params["s"] = o.s;
    rep = check_granularity_exact(need_input(), o.s_given ? std::optional<std::size_t>(o.s) : std::nullopt);
  } else if (o.check == "mu-close") {
    params["s"] = o.s;
    rep = check_mu_close(need_input(), o.s);
  } else if (o.check == "lower-bounds") {
    rep = check_coeff_lower_bounds(need_input());
  } else if (o.check == "repair") {
    params["s"] = o.s;
    rep = check_boolean_repair(need_input(), o.s);
  } else if (o.check == "norm-products") {
    const std::size_t trials = o.trials ? o.trials : 10000;
    params["trials"] = trials;
    rep = check_norm_products(trials, rng);
  } else if (o.check == "small-coefficient") {
    params["p"] = o.p;
    params["n"] = o.n;
    rep = check_small_coefficient_family(o.p, o.n);
  } else if (o.check == "expectation") {
    const DenseFunction f = need_input();
    params["t"] = o.t;
    std::vector<PrimeSubspace> parts;
    for (std::size_t i = 0; i < f.spec().num_factors(); ++i) {
      parts.push_back(random_subspace(f.spec().prime(i), f.spec().exponent(i),
                                      std::min(o.t, f.spec().exponent(i)), rng));
    }
    rep = check_expectation_identity(f, ProductSubspace(f.spec(), parts));
  } else if (o.check == "bucket-stats") {
    const std::size_t trials = o.trials ? o.trials : 20000;
    params["p"] = o.p;
    params["n"] = o.n;
    params["t"] = o.t;
    params["s"] = o.s;
    params["delta"] = o.delta;
    params["trials"] = trials;
    rep = stat_bucket_properties(o.p, o.n, o.t, o.s, o.delta, trials, rng);
  } else if (o.check == "concentration") {
    params["t"] = o.t;
    params["tau"] = o.tau;
    params["repetitions"] = o.reps;
    std::optional<std::uint64_t> m;
    if (o.m) m = o.m;
    rep = stat_estimator_concentration(need_input(), o.t, parse_rational(o.tau), o.reps, rng, m);
  } else if (o.check == "variance") {
    const std::size_t trials = o.trials ? o.trials : 4000;
    params["t"] = o.t;
    params["trials"] = trials;
    rep = stat_variance_bound(need_input(), o.t, trials, rng);
  } else {
    throw Error("unknown check '" + o.check + "'");
  }
  std::vector<std::pair<std::string, std::string>> lines = {{"check", rep.check}, {"verdict", verdict_name(rep.verdict)}};
  for (const auto& kv : rep.values) lines.push_back(kv);
  for (const auto& b : rep.stats) {
    std::ostringstream s;
    s << b.observed << " vs " << b.expected << (b.one_sided ? " (one-sided)" : "") << ", sigma " << b.sigma << ", "
      << (b.within ? "within" : "outside") << " 3 sigma over " << b.trials;
    lines.emplace_back(b.name, s.str());
  }
  for (const auto& w : rep.witnesses) lines.emplace_back("witness", w.character + " " + w.coefficient + " bound " + w.bound + ": " + w.detail);
  emit(out, o, "verify", fnv1a_digest(text), params, verification_json(rep), lines);
  return verdict_exit(rep.verdict);
}

int run_gen(const Options& o, std::ostream& out) {
  FamilyDescriptor d;
  d.family = parse_family(o.family);
  d.p = o.p;
  d.n = o.n;
  d.seed = o.seed;
  d.kdim = o.kdim;
  d.value = o.value;
  const std::string text = serialize_function_file(make_family(d));
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw Error("cannot write '" + o.out_path + "'");
    f << text;
  }
  return kExitOk;
}

template <class F>
double best_seconds(std::size_t repeats, F&& fn) {
  double best = 1e300;
  for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    best = std::min(best, d.count());
  }
  return best;
}

int run_bench(const Options& o, std::ostream& out) {
  Rng rng(o.seed);
  const GroupSpec spec = GroupSpec::single(o.p, o.n);
  const DenseFunction f = random_function(spec, rng);
  Spectrum a, b;
  const double exact = best_seconds(o.repeats, [&] { a = dft_exact(f); });
  const double kron = best_seconds(o.repeats, [&] { b = dft_kronecker(f); });
  if (!(a == b)) throw Error("transforms disagree");

  const std::uint32_t t = std::min(o.t, o.n);
  const GroupSpec labels = GroupSpec::single(o.p, t);
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < o.samples; ++i) samples.push_back({from_index(labels, rng.below(labels.order())), rng.sign()});
  const GroupElement u = from_index(labels, rng.below(labels.order()));
  std::vector<CycRational> ea, eb;
  const double naive = best_seconds(o.repeats, [&] { ea = estimate_all_buckets_naive(labels, samples, u); });
  const double fast = best_seconds(o.repeats, [&] { eb = estimate_all_buckets_fast(labels, samples, u); });
  if (ea != eb) throw Error("estimators disagree");

  ordered_json params{{"p", o.p}, {"n", o.n}, {"t", t}, {"samples", o.samples}, {"repeats", o.repeats}};
  ordered_json payload{{"dft_exact_seconds", exact},
                       {"dft_kronecker_seconds", kron},
                       {"transform_speedup", exact / kron},
                       {"estimate_naive_seconds", naive},
                       {"estimate_fast_seconds", fast},
                       {"estimate_speedup", naive / fast}};
  if (o.json) {
    emit(out, o, "bench", "", params, payload, {});
    return kExitOk;
  }
  char line[160];
  out << "operation                 seconds      speedup\n";
  std::snprintf(line, sizeof line, "dft_exact                 %-12.6f\n", exact);
  out << line;
  std::snprintf(line, sizeof line, "dft_kronecker             %-12.6f %.1fx\n", kron, exact / kron);
  out << line;
  std::snprintf(line, sizeof line, "estimate per bucket       %-12.6f\n", naive);
  out << line;
  std::snprintf(line, sizeof line, "estimate fast transform   %-12.6f %.1fx\n", fast, naive / fast);
  out << line;
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact Fourier analysis and sparsity testing of Boolean functions on finite abelian groups",
               "absparse"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Root seed for all randomness");
  app.add_flag("--json", o.json, "Emit a JSON report envelope");

  auto* analyze = app.add_subcommand("analyze", "Spectrum summary of a function file");
  analyze->add_option("input", o.input, "Function file, '-' for stdin");

  auto* transform = app.add_subcommand("transform", "Full exact spectrum of a function file");
  transform->add_option("input", o.input, "Function file, '-' for stdin");

  auto* test = app.add_subcommand("test", "Run the sparsity tester");
  test->add_option("input", o.input, "Function file, '-' for stdin");
  test->add_option("--s", o.s, "Target sparsity")->required()->check(CLI::PositiveNumber);
  test->add_option("--epsilon", o.epsilon, "Farness parameter, exact decimal or fraction")->required();
  test->add_option("--backend", o.backend, "exact or sampling")->check(CLI::IsMember({"exact", "sampling"}));
  test->add_option("--override-t", o.override_t, "Bucket dimensions, comma separated per factor");
  test->add_option("--override-tau", o.override_tau, "Threshold tau");
  test->add_option("--override-M", o.override_m, "Sample count");

  auto* verify = app.add_subcommand("verify", "Run a structural or statistical check");
  verify->add_option("--check", o.check, "Check name")
      ->required()
      ->check(CLI::IsMember({"granularity", "mu-close", "lower-bounds", "repair", "norm-products", "small-coefficient",
                             "expectation", "bucket-stats", "concentration", "variance"}));
  verify->add_option("input", o.input, "Function file, '-' for stdin");
  verify->add_option("--s", o.s, "Sparsity parameter")->check(CLI::PositiveNumber);
  verify->add_option("--trials", o.trials, "Monte-Carlo trials");
  verify->add_option("--p", o.p, "Prime");
  verify->add_option("--n", o.n, "Exponent");
  verify->add_option("--t", o.t, "Bucket dimension");
  verify->add_option("--tau", o.tau, "Relaxed tau");
  verify->add_option("--M", o.m, "Sample count per repetition");
  verify->add_option("--reps", o.reps, "Repetitions");
  verify->add_option("--delta", o.delta, "Collision target");

  auto* gen = app.add_subcommand("gen", "Write a function file for a named family");
  gen->add_option("--family", o.family, "constant, and, threshold, at, table1, coset_constant or random")->required();
  gen->add_option("--p", o.p, "Prime");
  gen->add_option("--n", o.n, "Exponent");
  gen->add_option("--kdim", o.kdim, "Subspace dimension for coset_constant");
  gen->add_option("--value", o.value, "Sign for constant");
  gen->add_option("--out", o.out_path, "Output path instead of stdout");

  auto* bench = app.add_subcommand("bench", "Time transforms and bucket estimators");
  bench->add_option("--p", o.p, "Prime");
  bench->add_option("--n", o.n, "Exponent");
  bench->add_option("--t", o.t, "Bucket dimension");
  bench->add_option("--samples", o.samples, "Samples for the estimator timing");
  bench->add_option("--repeats", o.repeats, "Timing repetitions");

  std::vector<const char*> argv = {"absparse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "absparse: " << e.what() << "\n";
    return kExitUsage;
  }

  o.s_given = verify->count("--s") > 0;
  try {
    if (analyze->parsed()) return run_analyze(o, in, out);
    if (transform->parsed()) return run_transform(o, in, out);
    if (test->parsed()) return run_test(o, in, out);
    if (verify->parsed()) return run_verify(o, in, out);
    if (gen->parsed()) return run_gen(o, out);
    if (bench->parsed()) return run_bench(o, out);
  } catch (const ParseError& e) {
    err << "absparse: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "absparse: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace absparse
