#include "absparse/cyclotomic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include <mpfr.h>

#include "absparse/error.hpp"

namespace absparse {
namespace {

std::size_t coord_size(const Primes& primes) {
  std::size_t n = 1;
  for (auto p : primes) n *= p - 1;
  return n;
}

std::size_t raw_size(const Primes& primes) {
  std::size_t n = 1;
  for (auto p : primes) n *= p;
  return n;
}

void require_same(const Primes& a, const Primes& b) {
  if (a != b) throw Error("cyclotomic values over different prime lists");
}

// Decompose a flat row-major index into per-axis digits for the given radices.
void digits(std::size_t idx, const std::vector<std::uint32_t>& radix,
            std::vector<std::uint64_t>& out) {
  out.resize(radix.size());
  for (std::size_t a = radix.size(); a-- > 0;) {
    out[a] = idx % radix[a];
    idx /= radix[a];
  }
}

std::vector<std::uint32_t> minus_one(const Primes& primes) {
  std::vector<std::uint32_t> r(primes.begin(), primes.end());
  for (auto& x : r) --x;
  return r;
}

// Reduce a p1×…×pt tensor to (p1−1)×…×(pt−1) using ω^(p−1) = −Σ_{e<p−1} ω^e.
template <class T>
std::vector<T> reduce_tensor(const Primes& primes, std::vector<T> data) {
  std::vector<std::size_t> dims(primes.begin(), primes.end());
  for (std::size_t a = 0; a < primes.size(); ++a) {
    const std::size_t p = primes[a];
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < a; ++i) outer *= dims[i];
    for (std::size_t i = a + 1; i < dims.size(); ++i) inner *= dims[i];
    std::vector<T> next(outer * (p - 1) * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * p * inner;
      const std::size_t top = base + (p - 1) * inner;
      for (std::size_t e = 0; e + 1 < p; ++e) {
        for (std::size_t i = 0; i < inner; ++i) {
          next[(o * (p - 1) + e) * inner + i] = data[base + e * inner + i] - data[top + i];
        }
      }
    }
    data = std::move(next);
    dims[a] = p - 1;
  }
  return data;
}

}  // namespace

CycInt::CycInt(Primes primes) : primes_(std::move(primes)), coords_(coord_size(primes_)) {}

CycInt CycInt::constant(Primes primes, const mpz_class& c) {
  CycInt v(std::move(primes));
  v.coords_[0] = c;
  return v;
}

CycInt CycInt::root(Primes primes, std::span<const std::uint64_t> exponents) {
  if (exponents.size() != primes.size()) throw Error("exponent count does not match primes");
  std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>> terms;
  terms.emplace_back(std::vector<std::uint64_t>(exponents.begin(), exponents.end()), mpz_class(1));
  return from_terms(std::move(primes), terms);
}

CycInt CycInt::from_raw(Primes primes, std::span<const mpz_class> raw) {
  if (raw.size() != raw_size(primes)) throw Error("raw tensor has wrong size");
  CycInt v(primes);
  v.coords_ = reduce_tensor(primes, std::vector<mpz_class>(raw.begin(), raw.end()));
  return v;
}

CycInt CycInt::from_raw(Primes primes, std::span<const std::int64_t> raw) {
  if (raw.size() != raw_size(primes)) throw Error("raw tensor has wrong size");
  auto reduced = reduce_tensor(primes, std::vector<std::int64_t>(raw.begin(), raw.end()));
  CycInt v(std::move(primes));
  for (std::size_t i = 0; i < reduced.size(); ++i) v.coords_[i] = static_cast<long>(reduced[i]);
  return v;
}

CycInt CycInt::from_terms(
    Primes primes,
    const std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>>& terms) {
  std::vector<mpz_class> raw(raw_size(primes));
  for (const auto& [exps, c] : terms) {
    if (exps.size() != primes.size()) throw Error("exponent count does not match primes");
    std::size_t idx = 0;
    for (std::size_t a = 0; a < primes.size(); ++a) idx = idx * primes[a] + exps[a] % primes[a];
    raw[idx] += c;
  }
  return from_raw(std::move(primes), raw);
}

std::vector<mpz_class> CycInt::to_raw() const {
  std::vector<mpz_class> raw(raw_size(primes_));
  const auto radix = minus_one(primes_);
  std::vector<std::uint64_t> d;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    digits(i, radix, d);
    std::size_t idx = 0;
    for (std::size_t a = 0; a < primes_.size(); ++a) idx = idx * primes_[a] + d[a];
    raw[idx] = coords_[i];
  }
  return raw;
}

bool CycInt::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const mpz_class& c) { return c == 0; });
}

bool CycInt::is_integer() const {
  return std::all_of(coords_.begin() + 1, coords_.end(), [](const mpz_class& c) { return c == 0; });
}

mpz_class CycInt::content() const {
  mpz_class g = 0;
  for (const auto& c : coords_) {
    if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  return g;
}

CycInt CycInt::operator-() const {
  CycInt r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

CycInt& CycInt::operator+=(const CycInt& rhs) {
  require_same(primes_, rhs.primes_);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
  return *this;
}

CycInt& CycInt::operator-=(const CycInt& rhs) {
  require_same(primes_, rhs.primes_);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
  return *this;
}

CycInt& CycInt::operator*=(const mpz_class& c) {
  for (auto& x : coords_) x *= c;
  return *this;
}

CycInt operator*(const CycInt& a, const CycInt& b) {
  require_same(a.primes_, b.primes_);
  const auto& primes = a.primes_;
  const auto radix = minus_one(primes);
  std::vector<mpz_class> raw(raw_size(primes));
  std::vector<std::uint64_t> da, db;
  for (std::size_t i = 0; i < a.coords_.size(); ++i) {
    if (a.coords_[i] == 0) continue;
    digits(i, radix, da);
    for (std::size_t j = 0; j < b.coords_.size(); ++j) {
      if (b.coords_[j] == 0) continue;
      digits(j, radix, db);
      std::size_t idx = 0;
      for (std::size_t k = 0; k < primes.size(); ++k) idx = idx * primes[k] + (da[k] + db[k]) % primes[k];
      mpz_addmul(raw[idx].get_mpz_t(), a.coords_[i].get_mpz_t(), b.coords_[j].get_mpz_t());
    }
  }
  return CycInt::from_raw(primes, raw);
}

CycInt CycInt::galois(std::span<const std::uint64_t> multipliers) const {
  if (multipliers.size() != primes_.size()) throw Error("multiplier count does not match primes");
  for (std::size_t k = 0; k < primes_.size(); ++k) {
    if (multipliers[k] % primes_[k] == 0) throw Error("Galois multiplier is not a unit");
  }
  const auto radix = minus_one(primes_);
  std::vector<mpz_class> raw(raw_size(primes_));
  std::vector<std::uint64_t> d;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    digits(i, radix, d);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < primes_.size(); ++k) {
      idx = idx * primes_[k] + (d[k] * (multipliers[k] % primes_[k])) % primes_[k];
    }
    raw[idx] += coords_[i];
  }
  return from_raw(primes_, raw);
}

CycInt CycInt::conj() const {
  std::vector<std::uint64_t> m(primes_.begin(), primes_.end());
  for (auto& x : m) --x;
  return galois(m);
}

CycInt CycInt::rotate(std::span<const std::uint64_t> exponents) const {
  if (exponents.size() != primes_.size()) throw Error("exponent count does not match primes");
  const auto radix = minus_one(primes_);
  std::vector<mpz_class> raw(raw_size(primes_));
  std::vector<std::uint64_t> d;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    digits(i, radix, d);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < primes_.size(); ++k) {
      idx = idx * primes_[k] + (d[k] + exponents[k] % primes_[k]) % primes_[k];
    }
    raw[idx] += coords_[i];
  }
  return from_raw(primes_, raw);
}

// ---------------------------------------------------------------------------

CycRational::CycRational(CycInt num, mpz_class den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw Error("zero denominator");
  normalize();
}

void CycRational::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    num_ = -num_;
  }
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  mpz_class g = num_.content();
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), den_.get_mpz_t());
  if (g != 1) {
    for (auto& c : num_.coords()) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

CycRational CycRational::rational(Primes primes, const mpq_class& q) {
  return {CycInt::constant(std::move(primes), q.get_num()), q.get_den()};
}

mpq_class CycRational::to_rational() const {
  if (!is_rational()) throw Error("value is not rational");
  mpq_class q(num_.constant_term(), den_);
  q.canonicalize();
  return q;
}

bool CycRational::is_real() const { return num_ == num_.conj(); }

CycRational operator+(const CycRational& a, const CycRational& b) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
  mpz_class fa = l / a.den_, fb = l / b.den_;
  return {a.num_ * fa + b.num_ * fb, l};
}

CycRational operator-(const CycRational& a, const CycRational& b) { return a + (-b); }

CycRational operator*(const CycRational& a, const CycRational& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

CycRational operator*(const CycRational& a, const mpq_class& q) {
  return {a.num_ * mpz_class(q.get_num()), a.den_ * q.get_den()};
}

// ---------------------------------------------------------------------------

std::string to_string(const CycInt& v) {
  const auto& primes = v.primes();
  const auto radix = minus_one(primes);
  std::vector<std::uint64_t> d;
  std::string out;
  for (std::size_t i = 0; i < v.coords().size(); ++i) {
    const mpz_class& c = v.coords()[i];
    if (c == 0) continue;
    digits(i, radix, d);
    std::string mono;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      if (d[k] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += 'w' + std::to_string(primes[k]);
      if (d[k] > 1) mono += '^' + std::to_string(d[k]);
    }
    mpz_class mag = abs(c);
    std::string term;
    if (mono.empty()) {
      term = mag.get_str();
    } else if (mag == 1) {
      term = mono;
    } else {
      term = mag.get_str() + '*' + mono;
    }
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + term;
    } else {
      out += (c < 0 ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

std::string to_string(const CycRational& v) {
  std::string num = to_string(v.numerator());
  if (v.denominator() == 1) return num;
  std::size_t nonzero = 0;
  for (const auto& c : v.numerator().coords()) nonzero += (c != 0);
  if (nonzero == 1) return num + '/' + v.denominator().get_str();
  return '(' + num + ")/" + v.denominator().get_str();
}

namespace {

class TermParser {
 public:
  TermParser(const Primes& primes, const std::string& s) : primes_(primes), s_(s) {}

  CycRational parse() {
    skip();
    bool paren = false;
    if (peek() == '(') {
      paren = true;
      ++pos_;
    }
    CycInt num = sum();
    if (paren) expect(')');
    mpz_class den = 1;
    skip();
    if (peek() == '/') {
      ++pos_;
      skip();
      den = integer();
      if (den <= 0) fail("denominator must be positive");
    }
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return {num, den};
  }

 private:
  CycInt sum() {
    std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>> terms;
    skip();
    bool first = true;
    while (true) {
      skip();
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        break;
      }
      first = false;
      mpz_class c = 1;
      bool have_coeff = false;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        c = integer();
        have_coeff = true;
      }
      std::vector<std::uint64_t> exps(primes_.size(), 0);
      bool have_mono = false;
      while (true) {
        skip();
        if (have_coeff || have_mono) {
          if (peek() != '*') break;
          ++pos_;
          skip();
        }
        if (peek() != 'w') {
          if (have_coeff || have_mono) fail("expected w<p> after '*'");
          break;
        }
        ++pos_;
        const mpz_class p = integer();
        auto it = std::find(primes_.begin(), primes_.end(), p.get_ui());
        if (it == primes_.end()) fail("root of unity w" + p.get_str() + " not in field");
        std::uint64_t e = 1;
        skip();
        if (peek() == '^') {
          ++pos_;
          skip();
          e = integer().get_ui();
        }
        exps[it - primes_.begin()] += e;
        have_mono = true;
      }
      if (!have_coeff && !have_mono) fail("expected a term");
      terms.emplace_back(exps, sign * c);
    }
    return CycInt::from_terms(primes_, terms);
  }

  mpz_class integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(1, what + " at column " + std::to_string(pos_ + 1) + " in \"" + s_ + "\"");
  }

  const Primes& primes_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

CycRational parse_cyclotomic(const Primes& primes, const std::string& text) {
  return TermParser(primes, text).parse();
}

// ---------------------------------------------------------------------------

namespace {

// Exponent of ω_m (m = Π p) for a coordinate index: Σ d_k·(m/p_k).
std::vector<std::uint64_t> angle_numerators(const Primes& primes, std::uint64_t& m) {
  m = 1;
  for (auto p : primes) m *= p;
  const auto radix = minus_one(primes);
  std::vector<std::uint64_t> out(coord_size(primes));
  std::vector<std::uint64_t> d;
  for (std::size_t i = 0; i < out.size(); ++i) {
    digits(i, radix, d);
    std::uint64_t e = 0;
    for (std::size_t k = 0; k < primes.size(); ++k) e = (e + d[k] * (m / primes[k])) % m;
    out[i] = e;
  }
  return out;
}

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

struct HighPrecision {
  mpq_class re, im, radius;
};

HighPrecision evaluate(const CycRational& v, unsigned bits) {
  const auto& coords = v.numerator().coords();
  std::uint64_t m = 1;
  const auto angles = angle_numerators(v.primes(), m);
  mpz_class l1 = 0;
  std::size_t maxbits = 1;
  std::size_t terms = 0;
  for (const auto& c : coords) {
    if (c == 0) continue;
    l1 += abs(c);
    maxbits = std::max(maxbits, mpz_sizeinbase(c.get_mpz_t(), 2));
    ++terms;
  }
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::max<std::size_t>(bits, maxbits + 8));
  Mpfr pi(prec), ang(prec), cs(prec), sn(prec), term(prec), re(prec), im(prec);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  mpfr_set_zero(re.get(), 1);
  mpfr_set_zero(im.get(), 1);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    mpfr_mul_ui(ang.get(), pi.get(), 2 * angles[i], MPFR_RNDN);
    mpfr_div_ui(ang.get(), ang.get(), m, MPFR_RNDN);
    mpfr_sin_cos(sn.get(), cs.get(), ang.get(), MPFR_RNDN);
    mpfr_mul_z(term.get(), cs.get(), coords[i].get_mpz_t(), MPFR_RNDN);
    mpfr_add(re.get(), re.get(), term.get(), MPFR_RNDN);
    mpfr_mul_z(term.get(), sn.get(), coords[i].get_mpz_t(), MPFR_RNDN);
    mpfr_add(im.get(), im.get(), term.get(), MPFR_RNDN);
  }
  HighPrecision out;
  mpfr_get_q(out.re.get_mpq_t(), re.get());
  mpfr_get_q(out.im.get_mpq_t(), im.get());
  out.re /= v.denominator();
  out.im /= v.denominator();
  // Per term: angle error ≤ 8 ulp(7), trig error ≤ 1 ulp, product and sum
  // roundings ≤ 1 ulp of the running magnitude (≤ l1); 64 covers the constants.
  mpz_class scale = 1;
  scale <<= static_cast<unsigned long>(prec);
  out.radius = mpq_class(l1 * static_cast<long>(terms + 64), scale * v.denominator());
  out.radius.canonicalize();
  return out;
}

}  // namespace

ComplexEnclosure numeric_eval(const CycRational& v) {
  const auto& coords = v.numerator().coords();
  std::uint64_t m = 1;
  const auto angles = angle_numerators(v.primes(), m);
  const double den = v.denominator().get_d();
  double re = 0, im = 0, l1 = 0;
  std::size_t terms = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    const double c = coords[i].get_d();
    const double a = 2.0 * M_PI * static_cast<double>(angles[i]) / static_cast<double>(m);
    re += c * std::cos(a);
    im += c * std::sin(a);
    l1 += std::abs(c);
    ++terms;
  }
  ComplexEnclosure out;
  out.value = {re / den, im / den};
  out.radius = (l1 / den) * static_cast<double>(terms + 16) * 0x1.0p-50;
  if (den > 0x1.0p52) out.radius += std::abs(out.value) * 0x1.0p-50;
  return out;
}

RealInterval real_enclosure(const CycRational& v, unsigned bits) {
  const HighPrecision h = evaluate(v, bits);
  return {h.re - h.radius, h.re + h.radius};
}

std::pair<std::string, std::string> decimal_eval(const CycRational& v, unsigned bits, int digits10) {
  const HighPrecision h = evaluate(v, bits);
  auto render = [&](const mpq_class& q) {
    Mpfr x(static_cast<mpfr_prec_t>(bits));
    mpfr_set_q(x.get(), q.get_mpq_t(), MPFR_RNDN);
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits10, x.get());
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  };
  return {render(h.re), render(h.im)};
}

MagnitudeSquared magnitude_squared(const CycRational& v, unsigned bits) {
  MagnitudeSquared out;
  out.exact = v.conj() * v;
  out.bounds = real_enclosure(out.exact, bits);
  if (out.bounds.lo < 0) out.bounds.lo = 0;
  return out;
}

int compare_real(const CycRational& v, const mpq_class& q) {
  const CycRational d = v - CycRational::rational(v.primes(), q);
  const CycRational re = (d + d.conj()) * mpq_class(1, 2);
  if (re.is_zero()) return 0;
  if (re.is_rational()) return sgn(re.to_rational());
  for (unsigned bits = 64;; bits *= 2) {
    const RealInterval r = real_enclosure(re, bits);
    if (r.lo > 0) return 1;
    if (r.hi < 0) return -1;
  }
}

int compare_real(const CycRational& a, const CycRational& b) {
  return compare_real(a - b, mpq_class(0));
}

double sqrt_upper(const mpq_class& hi) {
  if (hi <= 0) return 0;
  double x = std::sqrt(hi.get_d());
  x = std::nextafter(x, HUGE_VAL);
  x = std::nextafter(x, HUGE_VAL);
  while (mpq_class(x) * mpq_class(x) < hi) x = std::nextafter(x, HUGE_VAL);
  return x;
}

// ---------------------------------------------------------------------------

mpz_class galois_norm_product(const CycInt& g) {
  const auto& primes = g.primes();
  if (g.is_zero()) return 0;
  std::vector<std::uint32_t> radix = minus_one(primes);
  const std::size_t count = coord_size(primes);
  CycInt prod = CycInt::constant(primes, 1);
  std::vector<std::uint64_t> d;
  for (std::size_t i = 0; i < count; ++i) {
    digits(i, radix, d);
    for (auto& x : d) ++x;
    prod = prod * g.galois(d);
  }
  if (!prod.is_integer()) throw Error("norm product did not reduce to an integer");
  return prod.constant_term();
}

mpz_class galois_norm_product(
    const Primes& primes,
    const std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>>& terms) {
  return galois_norm_product(CycInt::from_terms(primes, terms));
}

mpz_class raw_l1_norm(const std::vector<std::pair<std::vector<std::uint64_t>, mpz_class>>& terms) {
  mpz_class s = 0;
  for (const auto& t : terms) s += abs(t.second);
  return s;
}

namespace {

mpz_class granular_denominator(const Primes& primes, std::span<const std::int64_t> k) {
  if (k.size() != primes.size()) throw Error("granularity vector does not match primes");
  mpz_class d = 1;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0) throw Error("granularity exponent must be nonnegative");
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), primes[i], static_cast<unsigned long>(k[i]));
    d *= pk;
  }
  return d;
}

}  // namespace

bool is_granular(const CycRational& v, std::span<const std::int64_t> k) {
  const mpz_class d = granular_denominator(v.primes(), k);
  if (v.is_zero()) return true;
  return mpz_divisible_p(d.get_mpz_t(), v.denominator().get_mpz_t()) != 0;
}

GranularCandidate nearest_granular(const CycRational& v, std::span<const std::int64_t> k) {
  const mpz_class d = granular_denominator(v.primes(), k);
  CycInt g(v.primes());
  for (std::size_t i = 0; i < g.coords().size(); ++i) {
    // round(c·d/den), ties to even
    const mpz_class num = v.numerator().coords()[i] * d;
    const mpz_class& den = v.denominator();
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const int half = cmp(mpz_class(2 * r), den);
    if (half > 0 || (half == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
    g.coords()[i] = q;
  }
  GranularCandidate out;
  out.candidate = CycRational(g, d);
  const auto diff = v - out.candidate;
  if (diff.is_zero()) {
    out.distance_squared_hi = 0;
    out.distance_bound = 0;
  } else {
    const auto m = magnitude_squared(diff, 128);
    out.distance_squared_hi = m.bounds.hi;
    out.distance_bound = sqrt_upper(m.bounds.hi);
  }
  return out;
}

}  // namespace absparse
