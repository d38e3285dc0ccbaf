#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/float128.hpp>

#include "latrule/errors.hpp"

namespace latrule {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
/// 113-bit significand; at least 100 fractional bits for magnitudes below 2^12.
using Real = boost::multiprecision::float128;

using int128 = __int128;
using uint128 = unsigned __int128;

Real to_real(const Rational& q);
Rational floor_of(const Rational& q);
BigInt floor_int(const Rational& q);
BigInt ceil_int(const Rational& q);

std::int64_t floor_mod(std::int64_t a, std::int64_t m);
int128 floor_mod(int128 a, int128 m);
/// Floor division for m > 0.
int128 floor_div(int128 a, int128 m);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
/// Inverse of a modulo m; requires gcd(a, m) == 1 and m >= 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);
bool is_prime(std::int64_t n);

/// Parses "7", "-3/5", "0.125", "1e-3" exactly.
Rational parse_rational(std::string_view text);
/// "p/q" or "p".
std::string rational_string(const Rational& q);

/// %.17g-style rendering (17 significant digits, trailing zeros trimmed).
std::string format_sig17(const Real& x);
std::string format_sig17(const Rational& q);
std::string format_sig17(double x);

/// A real number known only through a closed rational enclosure [lo, hi].
/// Exact rationals have lo == hi.
class CertifiedReal {
 public:
  CertifiedReal() = default;
  explicit CertifiedReal(Rational exact) : lo_(exact), hi_(std::move(exact)) {}
  CertifiedReal(Rational lo, Rational hi);

  static CertifiedReal sqrt_of(const BigInt& n, unsigned bits = 256);
  static CertifiedReal exp_of(const Rational& r, unsigned bits = 256);
  static CertifiedReal golden_ratio(unsigned bits = 256);

  const Rational& lower() const { return lo_; }
  const Rational& upper() const { return hi_; }
  bool is_exact() const { return lo_ == hi_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  Rational width() const { return hi_ - lo_; }
  Real to_real() const { return latrule::to_real(midpoint()); }

  /// floor(2^128 * frac(midpoint)), i.e. the fractional part as unsigned
  /// 0.128 fixed point. Multiplication by integers wraps modulo 1.
  uint128 fraction_fixed128() const;

 private:
  Rational lo_{0};
  Rational hi_{0};
};

template <class S>
S abs_value(const S& x) {
  return x < 0 ? S(-x) : x;
}

/// Dense square matrix, row-major.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t size() const { return n_; }
  S& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Matrix transpose() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        if ((*this)(i, k) == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
      }
    return r;
  }

  template <class V>
  std::vector<S> apply(const std::vector<V>& v) const {
    std::vector<S> r(n_, S(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * S(v[j]);
    return r;
  }

  Matrix scaled(const S& c) const {
    Matrix r = *this;
    for (auto& x : r.a_) x *= c;
    return r;
  }

  bool operator==(const Matrix& o) const = default;

  /// Gaussian elimination with partial pivoting on |entry|.
  S determinant() const {
    Matrix m = *this;
    S det(1);
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t piv = pivot_row(m, c);
      if (m(piv, c) == 0) return S(0);
      if (piv != c) {
        m.swap_rows(piv, c);
        det = -det;
      }
      det *= m(c, c);
      for (std::size_t r = c + 1; r < n_; ++r) {
        if (m(r, c) == 0) continue;
        S f = m(r, c) / m(c, c);
        for (std::size_t j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
      }
    }
    return det;
  }

  /// Gauss-Jordan inverse. Throws InvalidArgument when singular.
  Matrix inverse() const {
    Matrix m = *this;
    Matrix inv = identity(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t piv = pivot_row(m, c);
      if (m(piv, c) == 0) throw InvalidArgument("matrix is singular");
      m.swap_rows(piv, c);
      inv.swap_rows(piv, c);
      S p = m(c, c);
      for (std::size_t j = 0; j < n_; ++j) {
        m(c, j) /= p;
        inv(c, j) /= p;
      }
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == c || m(r, c) == 0) continue;
        S f = m(r, c);
        for (std::size_t j = 0; j < n_; ++j) {
          m(r, j) -= f * m(c, j);
          inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

 private:
  static std::size_t pivot_row(const Matrix& m, std::size_t c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < m.n_; ++r)
      if (abs_value(m(r, c)) > abs_value(m(best, c))) best = r;
    return best;
  }
  void swap_rows(std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t j = 0; j < n_; ++j) std::swap((*this)(r1, j), (*this)(r2, j));
  }

  std::size_t n_ = 0;
  std::vector<S> a_;
};

Matrix<Real> to_real(const Matrix<Rational>& m);

}  // namespace latrule
