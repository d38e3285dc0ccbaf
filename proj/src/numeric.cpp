#include "latrule/numeric.hpp"

#include <cctype>
#include <cstdio>
#include <numeric>

#include <quadmath.h>

namespace latrule {

namespace mp = boost::multiprecision;

Real to_real(const Rational& q) {
  return Real(mp::numerator(q).convert_to<Real>() / mp::denominator(q).convert_to<Real>());
}

BigInt floor_int(const Rational& q) {
  BigInt n = mp::numerator(q);
  const BigInt& d = mp::denominator(q);
  BigInt r = n / d;
  if (n < 0 && r * d != n) r -= 1;
  return r;
}

BigInt ceil_int(const Rational& q) {
  BigInt f = floor_int(q);
  return Rational(f) == q ? f : BigInt(f + 1);
}

Rational floor_of(const Rational& q) { return Rational(floor_int(q)); }

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

int128 floor_mod(int128 a, int128 m) {
  int128 r = a % m;
  return r < 0 ? r + m : r;
}

int128 floor_div(int128 a, int128 m) { return (a - floor_mod(a, m)) / m; }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  int128 old_r = floor_mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    int128 q = old_r / r;
    int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw InvalidArgument("value has no inverse modulo m");
  return static_cast<std::int64_t>(floor_mod(old_s, int128(m)));
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return InvalidArgument("not a number: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  BigInt digits = 0;
  int frac_digits = 0;
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (dot) ++frac_digits;
      any = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw fail();
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    std::string rest(text.substr(i + 1));
    if (rest.empty()) throw fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(rest, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != rest.size() || exponent > 4000 || exponent < -4000) throw fail();
  }
  exponent -= frac_digits;
  Rational value(digits);
  BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  value = exponent < 0 ? Rational(value / scale) : Rational(value * scale);
  return negative ? Rational(-value) : value;
}

std::string rational_string(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

std::string format_sig17(const Real& x) {
  char buf[96];
  quadmath_snprintf(buf, sizeof buf, "%.17Qg", x.backend().value());
  return buf;
}

std::string format_sig17(const Rational& q) { return format_sig17(to_real(q)); }

std::string format_sig17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CertifiedReal::CertifiedReal(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw InvalidArgument("enclosure lower bound exceeds upper bound");
}

namespace {

Rational outward_lower(const Rational& x, unsigned bits) {
  BigInt scale = BigInt(1) << bits;
  return Rational(floor_int(x * scale), scale);
}

Rational outward_upper(const Rational& x, unsigned bits) {
  BigInt scale = BigInt(1) << bits;
  return Rational(ceil_int(x * scale), scale);
}

}  // namespace

CertifiedReal CertifiedReal::sqrt_of(const BigInt& n, unsigned bits) {
  if (n < 0) throw InvalidArgument("square root of a negative number");
  BigInt scaled = n << (2 * bits);
  BigInt s = mp::sqrt(scaled);
  BigInt scale = BigInt(1) << bits;
  if (s * s == scaled) return CertifiedReal(Rational(s, scale));
  return CertifiedReal(Rational(s, scale), Rational(s + 1, scale));
}

CertifiedReal CertifiedReal::exp_of(const Rational& r, unsigned bits) {
  if (r == 0) return CertifiedReal(Rational(1));
  const Rational x = r < 0 ? Rational(-r) : r;
  const Rational eps(BigInt(1), BigInt(1) << (bits + 8));
  Rational term(1), sum(1), remainder;
  for (unsigned k = 1;; ++k) {
    term *= x / k;
    sum += term;
    // Tail after term k is bounded by a geometric series with ratio x/(k+2).
    Rational ratio = x / (k + 2);
    if (ratio < Rational(1, 2)) {
      remainder = term * x / (k + 1) / (1 - ratio);
      if (remainder < eps) break;
    }
    if (k > 100000) throw InternalError("exp series did not converge");
  }
  Rational lo = sum, hi = sum + remainder;
  if (r < 0) {
    Rational inv_lo = 1 / hi, inv_hi = 1 / lo;
    lo = inv_lo;
    hi = inv_hi;
  }
  return CertifiedReal(outward_lower(lo, bits), outward_upper(hi, bits));
}

CertifiedReal CertifiedReal::golden_ratio(unsigned bits) {
  CertifiedReal s = sqrt_of(5, bits);
  return CertifiedReal((1 + s.lower()) / 2, (1 + s.upper()) / 2);
}

uint128 CertifiedReal::fraction_fixed128() const {
  Rational m = midpoint();
  Rational f = m - floor_of(m);
  BigInt v = floor_int(f * (BigInt(1) << 128));
  const BigInt mask = (BigInt(1) << 64) - 1;
  auto lo = static_cast<std::uint64_t>(BigInt(v & mask));
  auto hi = static_cast<std::uint64_t>(BigInt(v >> 64));
  return (uint128(hi) << 64) | uint128(lo);
}

Matrix<Real> to_real(const Matrix<Rational>& m) {
  Matrix<Real> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = to_real(m(i, j));
  return r;
}

}  // namespace latrule
