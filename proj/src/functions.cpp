#include "absparse/functions.hpp"

#include <map>

#include "absparse/error.hpp"
#include "absparse/rng.hpp"

namespace absparse {

DenseFunction threshold_univariate(std::uint32_t p) {
  if (p == 2 || !is_prime(p)) throw Error("threshold requires an odd prime");
  std::vector<std::int8_t> t(p);
  for (std::uint32_t x = 0; x < p; ++x) t[x] = x >= (p + 1) / 2 ? 1 : -1;
  return DenseFunction(GroupSpec::single(p, 1), std::move(t));
}

DenseFunction and_n(std::uint32_t n) {
  if (n < 1) throw Error("AND needs at least one input");
  const GroupSpec spec = GroupSpec::single(2, n);
  std::vector<std::int8_t> t(spec.order(), 1);
  t.back() = -1;
  return DenseFunction(spec, std::move(t));
}

DenseFunction at_function(std::uint32_t p, std::uint32_t n) {
  if (p == 2 || !is_prime(p)) throw Error("AT requires an odd prime");
  if (n < 1) throw Error("AT needs at least one coordinate");
  const GroupSpec spec = GroupSpec::single(p, n);
  std::vector<std::int8_t> t(spec.order());
  for (std::uint64_t i = 0; i < t.size(); ++i) {
    const GroupElement x = from_index(spec, i);
    bool all = true;
    for (auto c : x.coords()) all = all && c >= (p + 1) / 2;
    t[i] = all ? -1 : 1;
  }
  return DenseFunction(spec, std::move(t));
}

DenseFunction table1_z5sq() {
  // Rows x1 = 0..4, columns x2 = 0..4.
  static const std::int8_t rows[5][5] = {
      {-1, 1, -1, 1, -1},
      {-1, 1, -1, 1, -1},
      {-1, 1, -1, 1, -1},
      {-1, 1, -1, -1, -1},
      {-1, 1, -1, -1, -1},
  };
  std::vector<std::int8_t> t;
  for (const auto& row : rows) t.insert(t.end(), row, row + 5);
  return DenseFunction(GroupSpec::single(5, 2), std::move(t));
}

DenseFunction dilate_function(const DenseFunction& f, std::uint32_t i) {
  const auto& spec = f.spec();
  std::vector<std::int8_t> t(f.size());
  for (std::uint64_t k = 0; k < t.size(); ++k) {
    t[k] = static_cast<std::int8_t>(f(dilate_element(from_index(spec, k), i)));
  }
  return DenseFunction(spec, std::move(t));
}

DenseFunction coset_constant_random(const GroupSpec& spec, const ProductSubspace& k, Rng& rng) {
  if (!(k.spec() == spec)) throw Error("subspace from a different group");
  std::map<std::uint64_t, std::int8_t> sign;
  for (const auto& c : enumerate_cosets(k)) {
    sign.emplace(lex_index(c.representative()), static_cast<std::int8_t>(rng.sign()));
  }
  std::vector<std::int8_t> t(spec.order());
  for (std::uint64_t i = 0; i < t.size(); ++i) {
    t[i] = sign.at(lex_index(k.reduce(from_index(spec, i))));
  }
  return DenseFunction(spec, std::move(t));
}

DenseFunction random_function(const GroupSpec& spec, Rng& rng) {
  if (spec.order() > kEnumerationGuard) throw GuardExceeded("group too large for a dense table");
  std::vector<std::int8_t> t(spec.order());
  for (auto& v : t) v = static_cast<std::int8_t>(rng.sign());
  return DenseFunction(spec, std::move(t));
}

CycRational far_certificate(const DenseFunction& f, std::size_t s) {
  return tail_top_s(dft_factorized(f), s).mu;
}

Family parse_family(const std::string& name) {
  static const std::map<std::string, Family> names = {
      {"constant", Family::kConstant},   {"and", Family::kAnd},
      {"threshold", Family::kThreshold}, {"at", Family::kAt},
      {"table1", Family::kTable1},       {"coset_constant", Family::kCosetConstant},
      {"random", Family::kRandom},
  };
  auto it = names.find(name);
  if (it == names.end()) throw Error("unknown family '" + name + "'");
  return it->second;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::kConstant: return "constant";
    case Family::kAnd: return "and";
    case Family::kThreshold: return "threshold";
    case Family::kAt: return "at";
    case Family::kTable1: return "table1";
    case Family::kCosetConstant: return "coset_constant";
    case Family::kRandom: return "random";
  }
  return "unknown";
}

DenseFunction make_family(const FamilyDescriptor& d) {
  if (d.family != Family::kTable1 && d.family != Family::kAnd && !is_prime(d.p)) {
    throw Error(std::to_string(d.p) + " is not prime");
  }
  switch (d.family) {
    case Family::kConstant:
      if (d.value != 1 && d.value != -1) throw Error("constant value must be +1 or -1");
      return DenseFunction::constant(GroupSpec::single(d.p, d.n), d.value);
    case Family::kAnd:
      return and_n(d.n);
    case Family::kThreshold:
      return threshold_univariate(d.p);
    case Family::kAt:
      return at_function(d.p, d.n);
    case Family::kTable1:
      return table1_z5sq();
    case Family::kCosetConstant: {
      if (d.kdim > d.n) throw Error("subspace dimension exceeds n");
      Rng rng(d.seed);
      Rng sub = rng.split(0);
      Rng signs = rng.split(1);
      const GroupSpec spec = GroupSpec::single(d.p, d.n);
      const ProductSubspace k(spec, {random_subspace(d.p, d.n, d.kdim, sub)});
      return coset_constant_random(spec, k, signs);
    }
    case Family::kRandom: {
      Rng rng(d.seed);
      return random_function(GroupSpec::single(d.p, d.n), rng);
    }
  }
  throw Error("unknown family");
}

}  // namespace absparse
