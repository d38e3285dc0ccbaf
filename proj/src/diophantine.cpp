#include "latrule/diophantine.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace latrule {

namespace mp = boost::multiprecision;

Rational CFExpansion::value() const {
  if (quotients.empty()) return Rational(a0);
  Rational tail(quotients.back());
  for (auto it = quotients.rbegin() + 1; it != quotients.rend(); ++it) tail = Rational(*it) + 1 / tail;
  return Rational(a0) + 1 / tail;
}

CFExpansion CFExpansion::variant_form() const {
  CFExpansion v = *this;
  if (!v.quotients.empty() && v.quotients.back() >= 2) {
    v.quotients.back() -= 1;
    v.quotients.emplace_back(1);
  }
  v.canonical = v.quotients.empty() || v.quotients.back() >= 2;
  return v;
}

std::string CFExpansion::str() const {
  std::string s = "[" + a0.str();
  for (std::size_t i = 0; i < quotients.size(); ++i) s += (i == 0 ? "; " : ", ") + quotients[i].str();
  return s + "]";
}

CFExpansion cfrac_rational(const BigInt& p, const BigInt& q) {
  if (q <= 0) throw InvalidArgument("continued fraction needs a positive denominator");
  CFExpansion cf;
  BigInt num = p, den = q;
  cf.a0 = floor_int(Rational(num, den));
  BigInt rem = num - cf.a0 * den;
  num = den;
  den = rem;
  while (den != 0) {
    BigInt a = num / den;
    rem = num - a * den;
    cf.quotients.push_back(a);
    num = den;
    den = rem;
  }
  cf.canonical = cf.quotients.empty() || cf.quotients.back() >= 2;
  return cf;
}

BigInt K_value(const CFExpansion& cf) {
  if (cf.quotients.empty()) throw InvalidArgument("K is undefined for an expansion without partial quotients");
  return *std::max_element(cf.quotients.begin(), cf.quotients.end());
}

CertifiedQuotients certified_cfrac(const CertifiedReal& x, std::size_t max_quotients) {
  CertifiedQuotients out;
  Rational lo = x.lower(), hi = x.upper();
  const bool exact = x.is_exact();
  BigInt a = floor_int(lo);
  if (a != floor_int(hi)) throw PrecisionError("integer part of the enclosure is not certain", -1);
  out.expansion.a0 = a;
  while (true) {
    Rational flo = lo - Rational(a), fhi = hi - Rational(a);
    if (exact && flo == 0) {
      out.complete = true;
      break;
    }
    // The next complete quotient is unbounded when the enclosure touches a.
    if (flo == 0 || out.expansion.quotients.size() >= max_quotients) break;
    lo = 1 / fhi;
    hi = 1 / flo;
    a = floor_int(lo);
    if (a != floor_int(hi)) break;
    out.expansion.quotients.push_back(a);
  }
  const auto& q = out.expansion.quotients;
  out.expansion.canonical = q.empty() || q.back() >= 2;
  return out;
}

std::vector<Convergent> convergents(const CFExpansion& cf) {
  std::vector<Convergent> out;
  BigInt p_prev = 1, q_prev = 0, p = cf.a0, q = 1;
  for (const BigInt& a : cf.quotients) {
    BigInt pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
    out.push_back({p, q});
  }
  return out;
}

std::vector<Convergent> convergents(const CertifiedReal& alpha, std::size_t depth) {
  if (depth < 1) throw InvalidArgument("convergent depth must be at least 1");
  CertifiedQuotients cq = certified_cfrac(alpha, depth);
  const std::size_t have = cq.expansion.quotients.size();
  if (have < depth && !cq.complete)
    throw PrecisionError("enclosure certifies only " + std::to_string(have) + " partial quotients, " +
                             std::to_string(depth) + " requested",
                         static_cast<int>(have));
  return convergents(cq.expansion);
}

FibonacciRule fibonacci_rule(int n) {
  if (n < 3 || n > 92) throw InvalidArgument("Fibonacci rule index must lie in [3, 92]");
  std::int64_t prev = 1, cur = 1;
  for (int k = 3; k <= n; ++k) {
    std::int64_t next = prev + cur;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

KorobovVector korobov_vector(std::int64_t N, std::int64_t g, int d) {
  if (N < 1) throw InvalidArgument("Korobov vector needs N >= 1");
  if (d < 1) throw InvalidArgument("Korobov vector needs d >= 1");
  KorobovVector kv;
  const std::int64_t base = floor_mod(g, N);
  std::int64_t power = floor_mod(1, N);
  for (int j = 0; j < d; ++j) {
    kv.components.push_back(power);
    power = static_cast<std::int64_t>(int128(power) * base % N);
  }
  kv.gcd_with_N = gcd64(base, N);
  return kv;
}

std::size_t alpha_component_count(const AlphaKind& kind) {
  struct {
    std::size_t operator()(const alpha::GoldenRatio&) const { return 1; }
    std::size_t operator()(const alpha::SqrtPrimes& k) const { return k.primes.size(); }
    std::size_t operator()(const alpha::ExpRationals& k) const { return k.exponents.size(); }
    std::size_t operator()(const alpha::Explicit& k) const { return k.values.size(); }
  } count;
  return std::visit(count, kind);
}

NamedAlpha named_alpha(const AlphaKind& kind, int d) {
  if (d < 2) throw InvalidArgument("named alpha needs d >= 2");
  const auto need = static_cast<std::size_t>(d - 1);
  if (alpha_component_count(kind) < need)
    throw InvalidArgument("alpha supplies " + std::to_string(alpha_component_count(kind)) +
                          " components, dimension " + std::to_string(d) + " needs " + std::to_string(need));
  NamedAlpha out{kind, {}};
  if (std::holds_alternative<alpha::GoldenRatio>(kind)) {
    out.values.push_back(CertifiedReal::golden_ratio());
  } else if (const auto* sp = std::get_if<alpha::SqrtPrimes>(&kind)) {
    std::set<std::int64_t> seen;
    for (std::size_t j = 0; j < need; ++j) {
      std::int64_t p = sp->primes[j];
      if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
      if (!seen.insert(p).second) throw InvalidArgument("primes must be distinct");
      out.values.push_back(CertifiedReal::sqrt_of(p));
    }
  } else if (const auto* er = std::get_if<alpha::ExpRationals>(&kind)) {
    std::set<Rational> seen;
    for (std::size_t j = 0; j < need; ++j) {
      const Rational& r = er->exponents[j];
      if (r == 0) throw InvalidArgument("exponents must be nonzero");
      if (!seen.insert(r).second) throw InvalidArgument("exponents must be distinct");
      out.values.push_back(CertifiedReal::exp_of(r));
    }
  } else {
    const auto& ex = std::get<alpha::Explicit>(kind);
    for (std::size_t j = 0; j < need; ++j) out.values.emplace_back(ex.values[j]);
  }
  return out;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    parts.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return parts;
    start = comma + 1;
  }
}

std::int64_t parse_int(std::string_view s) {
  Rational r = parse_rational(s);
  if (mp::denominator(r) != 1) throw InvalidArgument("expected an integer, got '" + std::string(s) + "'");
  return static_cast<std::int64_t>(mp::numerator(r));
}

}  // namespace

AlphaKind parse_alpha_kind(std::string_view text) {
  if (text == "golden" || text == "phi") return alpha::GoldenRatio{};
  if (text == "e") return alpha::ExpRationals{{Rational(1)}};
  if (text.rfind("sqrtprimes:", 0) == 0) {
    alpha::SqrtPrimes k;
    for (auto part : split_commas(text.substr(11))) k.primes.push_back(parse_int(part));
    return k;
  }
  if (text.rfind("sqrt", 0) == 0 && text.size() > 4 && std::isdigit(static_cast<unsigned char>(text[4])))
    return alpha::SqrtPrimes{{parse_int(text.substr(4))}};
  if (text.rfind("exp:", 0) == 0) {
    alpha::ExpRationals k;
    for (auto part : split_commas(text.substr(4))) k.exponents.push_back(parse_rational(part));
    return k;
  }
  if (!text.empty() && std::isalpha(static_cast<unsigned char>(text[0])))
    throw InvalidArgument("unknown alpha name '" + std::string(text) + "'");
  alpha::Explicit k;
  for (auto part : split_commas(text)) k.values.push_back(parse_rational(part));
  return k;
}

}  // namespace latrule
