#include "absparse/io.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>
#include <vector>

#include "absparse/error.hpp"

namespace absparse {

namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(trim(line));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::uint64_t parse_count(const std::string& tok, std::size_t line, const char* what) {
  if (tok.empty() || tok.size() > 9) throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  }
  return std::stoull(tok);
}

std::string decimal(const CycRational& v) { return decimal_eval(v, 192, 17).first; }
std::string decimal_im(const CycRational& v) { return decimal_eval(v, 192, 17).second; }

ordered_json uint_list(const std::vector<std::uint32_t>& v) {
  ordered_json a = ordered_json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

ordered_json group_json(const GroupSpec& g) {
  ordered_json a = ordered_json::array();
  for (const auto& f : g.factors()) a.push_back({{"p", f.prime}, {"n", f.exponent}});
  return a;
}

}  // namespace

DenseFunction parse_function_file(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != "ABSPARSE v1") throw ParseError(1, "expected header 'ABSPARSE v1'");
  if (lines.size() < 2) throw ParseError(2, "missing factor count");
  const std::uint64_t count = parse_count(lines[1], 2, "factor count");
  if (count == 0) throw ParseError(2, "factor count must be at least 1");
  if (lines.size() < 3) throw ParseError(3, "missing factor list");
  std::istringstream fs(lines[2]);
  std::vector<std::string> toks;
  for (std::string t; fs >> t;) toks.push_back(t);
  if (toks.size() != 2 * count) {
    throw ParseError(3, "expected " + std::to_string(2 * count) + " numbers for " + std::to_string(count) +
                            " factors, found " + std::to_string(toks.size()));
  }
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < count; ++i) {
    const auto p = parse_count(toks[2 * i], 3, "prime");
    const auto n = parse_count(toks[2 * i + 1], 3, "exponent");
    factors.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(n)});
  }
  GroupSpec spec;
  try {
    spec = GroupSpec(factors);
  } catch (const Error& e) {
    throw ParseError(3, e.what());
  }
  if (spec.order_z() > kEnumerationGuard) throw ParseError(3, "group order exceeds the enumeration guard");
  const std::uint64_t n = spec.order();
  const std::size_t body = lines.size() - 3;
  if (body != n) {
    const std::size_t where = body < n ? lines.size() + 1 : 3 + n + 1;
    throw ParseError(where, "expected " + std::to_string(n) + " value lines, found " + std::to_string(body));
  }
  std::vector<std::int8_t> table(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::string& tok = lines[3 + i];
    if (tok == "+1") {
      table[i] = 1;
    } else if (tok == "-1") {
      table[i] = -1;
    } else {
      throw ParseError(4 + i, "expected '+1' or '-1', found '" + tok + "'");
    }
  }
  return DenseFunction(spec, std::move(table));
}

std::string serialize_function_file(const DenseFunction& f) {
  std::string out = "ABSPARSE v1\n" + std::to_string(f.spec().num_factors()) + "\n";
  for (std::size_t i = 0; i < f.spec().num_factors(); ++i) {
    out += (i ? " " : "") + std::to_string(f.spec().prime(i)) + " " + std::to_string(f.spec().exponent(i));
  }
  out += "\n";
  for (auto v : f.table()) out += v > 0 ? "+1\n" : "-1\n";
  return out;
}

mpq_class parse_rational(const std::string& raw) {
  const std::string text = trim(raw);
  const auto bad = [&]() { return Error("invalid number '" + raw + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const mpq_class num = parse_rational(text.substr(0, slash));
    const mpq_class den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw bad();
    mpq_class q = num / den;
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  std::string digits;
  long scale = 0;
  bool dot = false;
  for (; i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'); ++i) {
    if (text[i] == '.') {
      if (dot) throw bad();
      dot = true;
    } else {
      digits += text[i];
      if (dot) --scale;
    }
  }
  if (digits.empty()) throw bad();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw bad();
    const std::string ex = text.substr(i + 1);
    if (ex.empty() || ex.size() > 6) throw bad();
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(ex, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != ex.size()) throw bad();
    scale += e;
  }
  mpq_class q{mpz_class(digits, 10)};
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0) {
    q /= ten;
  } else {
    q *= ten;
  }
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json spectrum_json(const Spectrum& s) {
  ordered_json coeffs = ordered_json::array();
  for (const auto& [idx, v] : s.coefficients()) {
    const auto mag = magnitude_squared(v);
    coeffs.push_back({{"r", uint_list(from_index(s.spec(), idx).coords())},
                      {"index", idx},
                      {"value", to_string(v)},
                      {"re", decimal(v)},
                      {"im", decimal_im(v)},
                      {"abs_squared", to_string(mag.exact)}});
  }
  return {{"group", group_json(s.spec())}, {"sparsity", s.sparsity()}, {"coefficients", coeffs}};
}

ordered_json params_json(const TestParams& p) {
  ordered_json j;
  j["group"] = group_json(p.spec);
  j["s"] = p.s;
  j["epsilon"] = p.epsilon.get_str();
  j["t"] = uint_list(p.t);
  j["t_formula"] = uint_list(p.t_formula);
  j["t_capped"] = p.t_capped;
  j["tau"] = p.tau.get_str();
  j["threshold"] = p.threshold.get_str();
  j["M"] = p.M.get_str();
  j["overrides"] = {{"t", p.t_overridden}, {"tau", p.tau_overridden}, {"M", p.M_overridden}};
  j["backend"] = p.backend == Backend::kExact ? "exact" : "sampling";
  return j;
}

ordered_json test_report_json(const TestReport& r) {
  ordered_json j;
  j["decision"] = r.decision == Decision::kYes ? "YES" : "NO";
  j["s"] = r.params.s;
  j["epsilon"] = r.params.epsilon.get_str();
  j["t"] = uint_list(r.params.t);
  j["tau"] = r.params.tau.get_str();
  j["threshold"] = r.params.threshold.get_str();
  j["M"] = r.params.M.get_str();
  j["heavy_count"] = r.heavy_count;
  j["queries"] = r.queries;
  ordered_json basis = ordered_json::array();
  for (const auto& part : r.h.parts()) {
    ordered_json rows = ordered_json::array();
    for (const auto& v : part.basis()) rows.push_back(uint_list(v));
    basis.push_back(rows);
  }
  j["h_basis"] = basis;
  j["u"] = uint_list(r.u.coords());
  ordered_json buckets = ordered_json::array();
  for (const auto& b : r.buckets) {
    ordered_json e;
    e["b"] = uint_list(b.label.coords());
    e["estimate"] = to_string(b.estimate);
    e["estimate_re"] = decimal(b.estimate);
    e["estimate_im"] = decimal_im(b.estimate);
    if (b.exact_wt) e["exact_wt"] = to_string(*b.exact_wt);
    e["heavy"] = b.heavy;
    buckets.push_back(e);
  }
  j["buckets"] = buckets;
  return j;
}

ordered_json verification_json(const VerificationReport& r) {
  ordered_json j;
  j["check"] = r.check;
  j["verdict"] = verdict_name(r.verdict);
  ordered_json values = ordered_json::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  j["values"] = values;
  ordered_json w = ordered_json::array();
  for (const auto& x : r.witnesses) {
    w.push_back({{"character", x.character}, {"coefficient", x.coefficient}, {"bound", x.bound}, {"detail", x.detail}});
  }
  j["witnesses"] = w;
  ordered_json stats = ordered_json::array();
  for (const auto& b : r.stats) {
    stats.push_back({{"name", b.name},
                     {"trials", b.trials},
                     {"observed", b.observed},
                     {"expected", b.expected},
                     {"sigma", b.sigma},
                     {"one_sided", b.one_sided},
                     {"within_3sigma", b.within}});
  }
  j["stats"] = stats;
  return j;
}

ordered_json envelope(const std::string& command, const std::string& digest, std::uint64_t seed,
                      ordered_json params, ordered_json payload) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["input_digest"] = digest;
  j["seed"] = seed;
  j["params"] = std::move(params);
  j["payload"] = std::move(payload);
  return j;
}

}  // namespace absparse
