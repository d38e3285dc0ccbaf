#include <algorithm>

#include "latrule/lattice.hpp"

namespace latrule {

namespace mp = boost::multiprecision;

std::vector<BigInt> frolov_polynomial(int d) {
  if (d < 1) throw InvalidArgument("Frolov polynomial needs d >= 1");
  std::vector<BigInt> c{1};
  for (int j = 1; j <= d; ++j) {
    const BigInt root = 2 * j - 1;
    std::vector<BigInt> next(c.size() + 1, 0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= root * c[k];
    }
    c = std::move(next);
  }
  c[0] -= 1;
  return c;
}

namespace {

template <class S>
S horner(const std::vector<BigInt>& c, const S& x) {
  S acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + S(*it);
  return acc;
}

Real horner_real(const std::vector<BigInt>& c, const Real& x) {
  Real acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->convert_to<Real>();
  return acc;
}

int sign_of(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

std::vector<BigInt> rational_roots(const std::vector<BigInt>& monic) {
  if (monic.empty() || monic.back() != 1) throw InvalidArgument("polynomial must be monic");
  std::vector<BigInt> roots;
  std::size_t low = 0;
  while (low + 1 < monic.size() && monic[low] == 0) ++low;
  if (low > 0) roots.push_back(0);
  BigInt c0 = mp::abs(monic[low]);
  if (low + 1 == monic.size()) return roots;
  for (BigInt q = 1; q * q <= c0; ++q) {
    if (c0 % q != 0) continue;
    for (const BigInt& cand : {q, BigInt(c0 / q)})
      for (const BigInt& s : {cand, BigInt(-cand)})
        if (horner<BigInt>(monic, s) == 0 && std::find(roots.begin(), roots.end(), s) == roots.end())
          roots.push_back(s);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

FrolovGenerator frolov_matrix(int d, const Real& a) {
  if (d < 1) throw InvalidArgument("Frolov lattice needs d >= 1");
  if (!(a > 1)) throw InvalidArgument("Frolov shrinking factor must exceed 1");
  const std::vector<BigInt> p = frolov_polynomial(d);

  // Roots sit near the odd integers 1, 3, ..., 2d-1; bracket them on the
  // integer grid [-1, 2d] by sign changes.
  std::vector<Real> roots;
  std::vector<std::pair<int, int>> brackets;
  for (int x = -1; x <= 2 * d; ++x) {
    int s = sign_of(horner<BigInt>(p, BigInt(x)));
    if (s == 0) {
      roots.emplace_back(x);
      continue;
    }
    if (x < 2 * d) {
      int t = sign_of(horner<BigInt>(p, BigInt(x + 1)));
      if (t != 0 && t != s) brackets.emplace_back(x, s);
    }
  }
  if (roots.size() + brackets.size() != static_cast<std::size_t>(d))
    throw InternalError("could not isolate " + std::to_string(d) + " real roots of the Frolov polynomial");

  const Real tol = mp::ldexp(Real(1), -104);
  for (auto [left, left_sign] : brackets) {
    Real lo = left, hi = left + 1;
    while (hi - lo > tol) {
      Real mid = (lo + hi) / 2;
      Real v = horner_real(p, mid);
      if (v == 0) {
        lo = hi = mid;
        break;
      }
      if ((v > 0) == (left_sign > 0))
        lo = mid;
      else
        hi = mid;
    }
    roots.push_back((lo + hi) / 2);
  }
  std::sort(roots.begin(), roots.end());

  const auto n = static_cast<std::size_t>(d);
  Matrix<Real> B(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real power = 1;
    for (std::size_t j = 0; j < n; ++j) {
      B(i, j) = power;
      power *= roots[i];
    }
  }
  Real vdet = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) vdet *= roots[j] - roots[i];

  Matrix<Real> T = B.transpose().inverse().scaled(Real(1) / a);
  Real inverse_det = mp::pow(a, d) * mp::abs(vdet);
  return FrolovGenerator{GeneratorMatrix(std::move(T)), std::move(roots), std::move(B), vdet, inverse_det};
}

}  // namespace latrule
