#include "latrule/dyadic.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>

#include "latrule/parallel.hpp"
#include "structured.hpp"

namespace latrule {

namespace mp = boost::multiprecision;

int DyadicIndex::l1() const {
  int s = 0;
  for (int x : m) s += x;
  return s;
}

std::vector<DyadicIndex> dyadic_shell(std::size_t d, int l) {
  std::vector<DyadicIndex> out;
  if (d == 0 || l < 0) return out;
  std::vector<int> m(d, 0);
  auto rec = [&](auto&& self, std::size_t j, int left) -> void {
    if (j + 1 == d) {
      m[j] = left;
      out.push_back({m});
      return;
    }
    for (int v = 0; v <= left; ++v) {
      m[j] = v;
      self(self, j + 1, left - v);
    }
  };
  rec(rec, 0, l);
  return out;
}

int default_dyadic_cap() {
  if (const char* env = std::getenv("LATRULE_DYADIC_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 64) return static_cast<int>(v);
  }
  return 24;
}

namespace {

/// Lower edge doubled: floor(2^{m-1}).
std::int64_t twice_lower(int m) { return m == 0 ? 0 : std::int64_t{1} << (m - 1); }
std::int64_t upper(int m) { return std::int64_t{1} << m; }

/// Integers x with lo <= |x| <= hi.
struct RangeSet {
  int128 lo = 0, hi = -1;
  bool empty() const { return lo > hi; }
  int128 size() const {
    if (empty()) return 0;
    return lo == 0 ? 2 * hi + 1 : 2 * (hi - lo + 1);
  }
  /// x in the set with x == r (mod M), 0 <= r < M.
  int128 count_class(int128 r, int128 M) const {
    if (empty()) return 0;
    auto in = [&](int128 a, int128 b) { return floor_div(b - r, M) - floor_div(a - 1 - r, M); };
    int128 c = in(lo, hi) + in(-hi, -lo);
    if (lo == 0 && r == 0) c -= 1;
    return c;
  }
  template <class F>
  void for_each(F&& f) const {
    if (empty()) return;
    for (int128 x = -hi; x <= -lo; ++x) f(x);
    for (int128 x = (lo == 0 ? 1 : lo); x <= hi; ++x) f(x);
  }
  template <class F>
  void for_each_nonnegative(F&& f) const {
    if (empty()) return;
    for (int128 x = lo; x <= hi; ++x) f(x);
  }
};

RangeSet integer_range(int m) {
  RangeSet r;
  r.lo = (twice_lower(m) + 1) / 2;
  r.hi = upper(m);
  return r;
}

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int128 inverse128(int128 a, int128 m) {
  int128 t = 0, nt = 1, r = m, nr = floor_mod(a, m);
  while (nr != 0) {
    int128 q = r / nr;
    int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return floor_mod(t, m);
}

}  // namespace

struct DyadicCounter::Impl {
  std::size_t d = 0;
  std::optional<detail::StructuredDual> sd;
  // General lattices.
  std::optional<Matrix<Rational>> B_exact;
  Matrix<Real> B_real;
  Matrix<Real> T_real;

  std::uint64_t count_exact(const std::vector<int>& m, std::uint64_t limit) const;
  std::uint64_t count_float(const std::vector<int>& m, std::uint64_t limit) const;
  std::uint64_t count_general(const std::vector<int>& m, std::uint64_t limit) const;
};

std::uint64_t DyadicCounter::Impl::count_exact(const std::vector<int>& m, std::uint64_t limit) const {
  // Coordinate 0 is w = Q k_d - sum residue_j k_j, with z_1 = N w / Q; the
  // rest are k_j. Constraint: w + sum residue_j k_j == 0 (mod Q).
  const int128 Q = sd->Q, N = sd->N;
  std::vector<RangeSet> ranges(d);
  std::vector<int128> coef(d);
  // 2 L0 Q <= 2 N |w|  and  N |w| <= U0 Q.
  ranges[0].lo = floor_div(twice_lower(m[0]) * Q + 2 * N - 1, 2 * N);
  ranges[0].hi = floor_div(upper(m[0]) * Q, N);
  coef[0] = 1;
  for (std::size_t j = 1; j < d; ++j) {
    ranges[j] = integer_range(m[j]);
    coef[j] = floor_mod(sd->residue[j - 1], Q);
  }
  for (const auto& r : ranges)
    if (r.empty()) return 0;

  std::size_t free = 0;
  for (std::size_t j = 1; j < d; ++j)
    if (ranges[j].size() > ranges[free].size()) free = j;
  long double work = 1;
  for (std::size_t j = 0; j < d; ++j)
    if (j != free) work *= static_cast<long double>(ranges[j].size());
  if (work > static_cast<long double>(limit))
    throw ResourceLimit("dyadic count needs " + std::to_string(static_cast<unsigned long long>(work)) +
                            " enumeration steps, cap is " + std::to_string(limit),
                        static_cast<std::uint64_t>(work));

  const int128 h = gcd128(coef[free], Q);
  const int128 Qr = Q / h;
  const int128 inv = Qr == 1 ? 0 : inverse128(coef[free] / h, Qr);
  const RangeSet& fr = ranges[free];

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < d; ++j)
    if (j != free) others.push_back(j);

  int128 total = 0;
  std::vector<int128> x(d, 0);
  auto tally = [&]() {
    int128 rest = 0;
    bool zero = true;
    for (std::size_t j : others) {
      rest = floor_mod(rest + floor_mod(coef[j] * x[j], Q), Q);
      zero = zero && x[j] == 0;
    }
    int128 need = floor_mod(-rest, Q);
    if (need % h != 0) return;
    int128 r0 = Qr == 1 ? 0 : floor_mod((need / h) % Qr * inv, Qr);
    int128 c = fr.count_class(r0, Qr);
    if (zero && fr.lo == 0 && r0 == 0) c -= 1;
    total += c;
  };
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == others.size()) {
      tally();
      return;
    }
    const std::size_t j = others[idx];
    ranges[j].for_each([&](int128 v) {
      x[j] = v;
      self(self, idx + 1);
    });
  };
  rec(rec, 0);
  return static_cast<std::uint64_t>(total);
}

std::uint64_t DyadicCounter::Impl::count_float(const std::vector<int>& m, std::uint64_t limit) const {
  const Real N = sd->N;
  const Real lo0 = Real(twice_lower(m[0])) / (2 * N), hi0 = Real(upper(m[0])) / N;
  std::vector<RangeSet> ranges(d - 1);
  long double work = 1;
  for (std::size_t j = 1; j < d; ++j) {
    ranges[j - 1] = integer_range(m[j]);
    work *= static_cast<long double>(ranges[j - 1].size());
  }
  if (work > static_cast<long double>(limit))
    throw ResourceLimit("dyadic count needs " + std::to_string(static_cast<unsigned long long>(work)) +
                            " enumeration steps, cap is " + std::to_string(limit),
                        static_cast<std::uint64_t>(work));
  const double lo0d = static_cast<double>(lo0), hi0d = static_cast<double>(hi0);
  const bool closed_ball = lo0 == 0;
  const double margin = std::ldexp(1.0, -40) * (1 + hi0d);
  auto ifloor = [](double x) {
    auto i = static_cast<std::int64_t>(x);
    return i - (x < static_cast<double>(i));
  };
  auto clear = [&](double b) {
    const double r = b - static_cast<double>(ifloor(b));
    return r > margin && r < 1 - margin;
  };
  auto count_in_d = [&](double a, double b) {
    std::int64_t c = ifloor(b) + ifloor(-a) + 1;
    return c > 0 ? c : 0;
  };
  auto count_in = [](const Real& a, const Real& b) {
    std::int64_t c = static_cast<std::int64_t>(mp::floor(b)) - static_cast<std::int64_t>(mp::ceil(a)) + 1;
    return c > 0 ? c : 0;
  };

  if (d == 2) {
    const RangeSet& r = ranges[0];
    std::int64_t total = 0;
    if (r.empty()) return 0;
    const uint128 step = sd->frac[0];
    uint128 F = static_cast<uint128>(r.lo) * step;
    for (int128 x = r.lo; x <= r.hi; ++x, F += step) {
      const double fd = static_cast<double>(static_cast<std::uint64_t>(F >> 64)) * 0x1p-64;
      std::int64_t c;
      if (closed_ball) {
        if (clear(fd - hi0d) && clear(fd + hi0d)) {
          c = count_in_d(fd - hi0d, fd + hi0d);
        } else {
          Real f = detail::fixed128_to_real(F);
          c = count_in(f - hi0, f + hi0);
        }
        if (x == 0) c -= 1;
      } else if (clear(fd + lo0d) && clear(fd + hi0d) && clear(fd - hi0d) && clear(fd - lo0d)) {
        c = count_in_d(fd + lo0d, fd + hi0d) + count_in_d(fd - hi0d, fd - lo0d);
      } else {
        Real f = detail::fixed128_to_real(F);
        c = count_in(f + lo0, f + hi0) + count_in(f - hi0, f - lo0);
      }
      total += x == 0 ? c : 2 * c;
    }
    return static_cast<std::uint64_t>(total);
  }

  // k and -k carry the same count, so only k with a positive leading entry
  // (plus k = 0) are visited.
  std::vector<std::int64_t> k(d - 1, 0);
  std::int64_t total = 0;
  auto tally = [&](bool zero) {
    const uint128 F = sd->dot_frac(k);
    const double fd = static_cast<double>(static_cast<std::uint64_t>(F >> 64)) * 0x1p-64;
    std::int64_t c;
    if (closed_ball) {
      if (clear(fd - hi0d) && clear(fd + hi0d)) {
        c = count_in_d(fd - hi0d, fd + hi0d);
      } else {
        Real f = detail::fixed128_to_real(F);
        c = count_in(f - hi0, f + hi0);
      }
      if (zero) c -= 1;
    } else if (clear(fd + lo0d) && clear(fd + hi0d) && clear(fd - hi0d) && clear(fd - lo0d)) {
      c = count_in_d(fd + lo0d, fd + hi0d) + count_in_d(fd - hi0d, fd - lo0d);
    } else {
      Real f = detail::fixed128_to_real(F);
      c = count_in(f + lo0, f + hi0) + count_in(f - hi0, f - lo0);
    }
    total += zero ? c : 2 * c;
  };
  auto rec = [&](auto&& self, std::size_t j, bool zero) -> void {
    if (j == d - 1) {
      tally(zero);
      return;
    }
    auto visit = [&](int128 v) {
      k[j] = static_cast<std::int64_t>(v);
      self(self, j + 1, zero && v == 0);
    };
    if (zero)
      ranges[j].for_each_nonnegative(visit);
    else
      ranges[j].for_each(visit);
  };
  rec(rec, 0, true);
  return static_cast<std::uint64_t>(total);
}

std::uint64_t DyadicCounter::Impl::count_general(const std::vector<int>& m, std::uint64_t limit) const {
  std::vector<std::int64_t> hi(d), lo(d);
  long double work = 1;
  for (std::size_t i = 0; i < d; ++i) {
    Real reach = 0;
    for (std::size_t j = 0; j < d; ++j) reach += mp::abs(T_real(j, i)) * upper(m[j]);
    hi[i] = static_cast<std::int64_t>(mp::floor(reach)) + 1;
    lo[i] = -hi[i];
    work *= static_cast<long double>(2 * hi[i] + 1);
  }
  if (work > static_cast<long double>(limit))
    throw ResourceLimit("dyadic count needs " + std::to_string(static_cast<unsigned long long>(work)) +
                            " enumeration steps, cap is " + std::to_string(limit),
                        static_cast<std::uint64_t>(work));
  std::vector<std::int64_t> k = lo;
  std::uint64_t total = 0;
  while (true) {
    bool zero = true;
    for (auto v : k) zero = zero && v == 0;
    if (!zero) {
      bool inside = true;
      for (std::size_t i = 0; i < d && inside; ++i) {
        if (B_exact) {
          Rational z = 0;
          for (std::size_t j = 0; j < d; ++j) z += (*B_exact)(i, j) * k[j];
          if (z < 0) z = -z;
          inside = 2 * z >= twice_lower(m[i]) && z <= upper(m[i]);
        } else {
          Real z = 0;
          for (std::size_t j = 0; j < d; ++j) z += B_real(i, j) * k[j];
          z = mp::abs(z);
          inside = 2 * z >= twice_lower(m[i]) && z <= upper(m[i]);
        }
      }
      if (inside) ++total;
    }
    std::size_t c = 0;
    for (; c < d; ++c) {
      if (k[c] < hi[c]) {
        ++k[c];
        break;
      }
      k[c] = lo[c];
    }
    if (c == d) break;
  }
  return total;
}

DyadicCounter::DyadicCounter(const LatticeSpec& spec, int cap) : impl_(std::make_unique<Impl>()), cap_(cap) {
  impl_->d = spec.dim();
  impl_->sd = detail::structured_dual(spec);
  if (!impl_->sd) {
    GeneratorMatrix T = generator_matrix(spec);
    DualBasis B = dual_basis(T);
    if (B.exact()) impl_->B_exact = B.rational();
    impl_->B_real = B.real();
    impl_->T_real = T.real();
  }
}

DyadicCounter::~DyadicCounter() = default;
DyadicCounter::DyadicCounter(DyadicCounter&&) noexcept = default;
DyadicCounter& DyadicCounter::operator=(DyadicCounter&&) noexcept = default;

std::size_t DyadicCounter::dim() const { return impl_->d; }

std::uint64_t DyadicCounter::count(const DyadicIndex& m) const {
  if (m.m.size() != impl_->d) throw InvalidArgument("dyadic index has the wrong dimension");
  for (int v : m.m)
    if (v < 0) throw InvalidArgument("dyadic index entries must be nonnegative");
  if (m.l1() > cap_)
    throw ResourceLimit("|m|_1 = " + std::to_string(m.l1()) + " exceeds the dyadic cap " + std::to_string(cap_),
                        static_cast<std::uint64_t>(m.l1()));
  for (int v : m.m)
    if (v > 60) throw ResourceLimit("dyadic index entry exceeds 60");
  if (impl_->sd) {
    if (impl_->sd->exact) return impl_->count_exact(m.m, work_limit_);
    return impl_->count_float(m.m, work_limit_);
  }
  return impl_->count_general(m.m, work_limit_);
}

std::uint64_t dyadic_count(const LatticeSpec& spec, const DyadicIndex& m, int cap) {
  return DyadicCounter(spec, cap).count(m);
}

double annulus_count_bound(const DyadicIndex& m, double rho) {
  const int l = m.l1();
  if (l < std::log2(rho)) return 0;
  return std::ldexp(1.0, l + static_cast<int>(m.m.size()) + 1) / rho;
}

std::vector<CensusRow> dyadic_census(const LatticeSpec& spec, int mmax, double rho) {
  if (mmax < 0) throw InvalidArgument("mmax must be nonnegative");
  DyadicCounter counter(spec);
  std::vector<CensusRow> rows;
  for (int l = 0; l <= mmax; ++l)
    for (auto& m : dyadic_shell(spec.dim(), l)) rows.push_back({m, l, 0, annulus_count_bound(m, rho)});
  if (!rows.empty() && rows.back().l1 > counter.cap())
    throw ResourceLimit("mmax " + std::to_string(mmax) + " exceeds the dyadic cap " + std::to_string(counter.cap()),
                        static_cast<std::uint64_t>(mmax));
  parallel_chunks(rows.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) rows[i].count = counter.count(rows[i].m);
  });
  return rows;
}

void write_census_csv(std::ostream& out, const std::vector<CensusRow>& rows) {
  const std::size_t d = rows.empty() ? 0 : rows.front().m.m.size();
  for (std::size_t j = 0; j < d; ++j) out << "m" << (j + 1) << ",";
  out << "|m|1,count,bound\n";
  for (const auto& r : rows) {
    for (int v : r.m.m) out << v << ",";
    out << r.l1 << "," << r.count << "," << format_sig17(r.bound) << "\n";
  }
}

}  // namespace latrule
