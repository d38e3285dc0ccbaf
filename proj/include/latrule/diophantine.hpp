#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "latrule/numeric.hpp"

namespace latrule {

/// Simple continued fraction [a0; a1, ..., al].
struct CFExpansion {
  BigInt a0 = 0;
  /// a1..al, all >= 1.
  std::vector<BigInt> quotients;
  /// True iff l == 0 or al >= 2.
  bool canonical = true;

  /// Exact value of the (finite) expansion.
  Rational value() const;
  /// Rewrites a trailing al >= 2 as (al - 1, 1). Unchanged otherwise.
  CFExpansion variant_form() const;
  /// "[a0; a1, a2, ...]"
  std::string str() const;
};

/// Euclidean expansion of p/q in canonical form. q must be positive.
CFExpansion cfrac_rational(const BigInt& p, const BigInt& q);
inline CFExpansion cfrac_rational(std::int64_t p, std::int64_t q) {
  return cfrac_rational(BigInt(p), BigInt(q));
}

/// Largest partial quotient a1..al of the expansion as given.
BigInt K_value(const CFExpansion& cf);

/// Partial quotients whose values are certain for every real in the
/// enclosure. `complete` is set when the enclosure is an exact rational whose
/// expansion terminated.
struct CertifiedQuotients {
  CFExpansion expansion;
  bool complete = false;
};
CertifiedQuotients certified_cfrac(const CertifiedReal& x, std::size_t max_quotients);

struct Convergent {
  BigInt p;
  BigInt q;
};

/// Convergents p_k/q_k for k = 1..depth. Exact rationals stop early when the
/// expansion terminates. Throws PrecisionError when the enclosure cannot
/// certify the quotients needed.
std::vector<Convergent> convergents(const CertifiedReal& alpha, std::size_t depth);
/// Convergents k = 1..l of a finite expansion.
std::vector<Convergent> convergents(const CFExpansion& cf);

struct FibonacciRule {
  std::int64_t N;
  std::int64_t g;
};
/// (F_n, F_{n-1}) with F_1 = F_2 = 1. Requires 3 <= n <= 92.
FibonacciRule fibonacci_rule(int n);

struct KorobovVector {
  /// (1, g, g^2, ..., g^{d-1}) mod N.
  std::vector<std::int64_t> components;
  std::int64_t gcd_with_N;
  /// The rank-1 generator: components without the leading 1.
  std::vector<std::int64_t> generator() const {
    return {components.begin() + 1, components.end()};
  }
};
KorobovVector korobov_vector(std::int64_t N, std::int64_t g, int d);

namespace alpha {
struct GoldenRatio {};
struct SqrtPrimes {
  std::vector<std::int64_t> primes;
};
struct ExpRationals {
  std::vector<Rational> exponents;
};
struct Explicit {
  std::vector<Rational> values;
};
}  // namespace alpha

using AlphaKind = std::variant<alpha::GoldenRatio, alpha::SqrtPrimes, alpha::ExpRationals, alpha::Explicit>;

struct NamedAlpha {
  AlphaKind kind;
  /// d - 1 certified components, at least 256 fractional bits each.
  std::vector<CertifiedReal> values;
};

NamedAlpha named_alpha(const AlphaKind& kind, int d);

/// Parses "golden", "sqrt2", "sqrtprimes:2,3,5", "exp:1,1/2", or an explicit
/// comma-separated list of exact numbers such as "1/3,0.25".
AlphaKind parse_alpha_kind(std::string_view text);
/// Number of components the kind can supply.
std::size_t alpha_component_count(const AlphaKind& kind);

}  // namespace latrule
