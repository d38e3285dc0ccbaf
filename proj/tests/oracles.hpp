#pragma once

// Slow reference implementations, written against the definitions with plain
// integer and long double arithmetic.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

namespace oracle {

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t fib(int n) {
  std::int64_t a = 1, b = 1;
  for (int i = 3; i <= n; ++i) {
    std::int64_t c = a + b;
    a = b;
    b = c;
  }
  return b;
}

/// Rank-1 Zaremba index: every nonzero dual point of the rank-1 lattice is
/// (N k_d - g.k, k); scan |k_j| <= N and the best k_d for each k.
inline std::int64_t rank1_rho(std::int64_t N, const std::vector<std::int64_t>& g) {
  const std::size_t m = g.size();
  std::int64_t best = N;
  std::vector<std::int64_t> k(m, -N);
  while (true) {
    bool zero = true;
    std::int64_t P = 1;
    __int128 dot = 0;
    for (std::size_t j = 0; j < m; ++j) {
      zero = zero && k[j] == 0;
      P *= std::max<std::int64_t>(1, std::llabs(k[j]));
      dot += static_cast<__int128>(g[j]) * k[j];
    }
    if (!zero) {
      std::int64_t r = static_cast<std::int64_t>(((dot % N) + N) % N);
      std::int64_t dist = std::min(r, N - r);
      best = std::min(best, P * std::max<std::int64_t>(1, dist));
    }
    std::size_t c = 0;
    for (; c < m; ++c) {
      if (k[c] < N) {
        ++k[c];
        break;
      }
      k[c] = -N;
    }
    if (c == m) break;
  }
  return best;
}

/// Nonzero dual points (z1, k) of the 2-d rank-1 lattice in the annulus m.
inline std::uint64_t rank1_dyadic_2d(std::int64_t N, std::int64_t g, int m1, int m2) {
  auto lower2 = [](int m) { return m == 0 ? 0LL : (1LL << (m - 1)); };
  const std::int64_t U1 = 1LL << m1, U2 = 1LL << m2;
  std::uint64_t count = 0;
  for (std::int64_t k = -U2; k <= U2; ++k) {
    if (2 * std::llabs(k) < lower2(m2)) continue;
    for (std::int64_t z = -U1; z <= U1; ++z) {
      if (2 * std::llabs(z) < lower2(m1)) continue;
      if (z == 0 && k == 0) continue;
      if ((((z + g * k) % N) + N) % N == 0) ++count;
    }
  }
  return count;
}

/// Frolov d = 2: roots 2 -+ sqrt 2, T = (1/a) (B^T)^{-1}; counts T l in [0,1)^2.
inline std::int64_t frolov2_count(long double a) {
  const long double r = std::sqrt(2.0L);
  const long double x1 = 2 - r, x2 = 2 + r;
  // B = [[1, x1], [1, x2]], B^T = [[1, 1], [x1, x2]], det = x2 - x1.
  const long double det = x2 - x1;
  const long double t00 = x2 / det / a, t01 = -1 / det / a, t10 = -x1 / det / a, t11 = 1 / det / a;
  // T^{-1} = a B^T.
  const long long reach = static_cast<long long>(a * (1 + x2)) + 2;
  std::int64_t count = 0;
  for (long long l0 = -reach; l0 <= reach; ++l0)
    for (long long l1 = -reach; l1 <= reach; ++l1) {
      long double y0 = t00 * l0 + t01 * l1, y1 = t10 * l0 + t11 * l1;
      if (y0 >= 0 && y0 < 1 && y1 >= 0 && y1 < 1) ++count;
    }
  return count;
}

/// Canonical continued fraction of p/q, q > 0.
inline std::vector<std::int64_t> cfrac(std::int64_t p, std::int64_t q) {
  std::vector<std::int64_t> a;
  std::int64_t a0 = p >= 0 ? p / q : -((-p + q - 1) / q);
  a.push_back(a0);
  std::int64_t num = q, den = p - a0 * q;
  while (den != 0) {
    a.push_back(num / den);
    std::int64_t r = num % den;
    num = den;
    den = r;
  }
  return a;
}

}  // namespace oracle
