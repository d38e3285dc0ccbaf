#include "latrule/lattice.hpp"

#include <cmath>
#include <ostream>

namespace latrule {

namespace mp = boost::multiprecision;

std::size_t LatticeMatrix::dim() const {
  return std::visit([](const auto& m) { return m.size(); }, m_);
}

const Matrix<Rational>& LatticeMatrix::rational() const {
  if (!exact()) throw InvalidArgument("matrix has no exact rational representation");
  return std::get<Matrix<Rational>>(m_);
}

Matrix<Real> LatticeMatrix::real() const {
  if (exact()) return to_real(std::get<Matrix<Rational>>(m_));
  return std::get<Matrix<Real>>(m_);
}

Real LatticeMatrix::determinant() const {
  if (exact()) return to_real(std::get<Matrix<Rational>>(m_).determinant());
  return std::get<Matrix<Real>>(m_).determinant();
}

std::optional<Rational> LatticeMatrix::exact_determinant() const {
  if (!exact()) return std::nullopt;
  return std::get<Matrix<Rational>>(m_).determinant();
}

bool KroneckerParams::rational() const {
  for (const auto& a : alpha)
    if (!a.is_exact()) return false;
  return true;
}

LatticeSpec LatticeSpec::kronecker(std::int64_t N, std::vector<CertifiedReal> alpha) {
  if (N < 1) throw InvalidArgument("Kronecker rule needs N >= 1");
  if (alpha.empty()) throw InvalidArgument("Kronecker rule needs dimension d >= 2");
  return LatticeSpec(KroneckerParams{N, std::move(alpha)});
}

LatticeSpec LatticeSpec::rank1(std::int64_t N, std::vector<std::int64_t> g) {
  if (N < 1) throw InvalidArgument("rank-1 rule needs N >= 1");
  if (g.empty()) throw InvalidArgument("rank-1 rule needs dimension d >= 2");
  Rank1Params p;
  p.N = N;
  for (std::int64_t gj : g) {
    std::int64_t r = floor_mod(gj, N);
    p.g.push_back(r);
    p.gcd_with_N.push_back(gcd64(r, N));
    if (r == 0) p.degenerate = true;
  }
  return LatticeSpec(std::move(p));
}

LatticeSpec LatticeSpec::frolov(int d, Real a) {
  if (d < 1) throw InvalidArgument("Frolov lattice needs d >= 1");
  if (!(a > 1)) throw InvalidArgument("Frolov shrinking factor must exceed 1");
  return LatticeSpec(FrolovParams{d, a});
}

LatticeSpec LatticeSpec::general(GeneratorMatrix T) {
  if (T.dim() == 0) throw InvalidArgument("generator matrix is empty");
  if (T.determinant() == 0) throw InvalidArgument("generator matrix is singular");
  return LatticeSpec(GeneralParams{std::move(T)});
}

LatticeSpec::Family LatticeSpec::family() const { return static_cast<Family>(v_.index()); }

std::string LatticeSpec::family_name() const {
  static const char* names[] = {"kronecker", "rank1", "frolov", "general"};
  return names[v_.index()];
}

std::size_t LatticeSpec::dim() const {
  switch (family()) {
    case Family::Kronecker: return kronecker_params()->alpha.size() + 1;
    case Family::Rank1: return rank1_params()->g.size() + 1;
    case Family::Frolov: return static_cast<std::size_t>(frolov_params()->d);
    case Family::GeneralMatrix: return general_params()->T.dim();
  }
  return 0;
}

bool LatticeSpec::structured() const {
  return family() == Family::Kronecker || family() == Family::Rank1;
}

std::int64_t LatticeSpec::point_count() const {
  if (auto* k = kronecker_params()) return k->N;
  if (auto* r = rank1_params()) return r->N;
  throw InvalidArgument("point count is only known a priori for Kronecker and rank-1 rules");
}

namespace {

template <class S>
Matrix<S> companion_layout(std::int64_t N, const std::vector<S>& alpha) {
  const std::size_t d = alpha.size() + 1;
  Matrix<S> t(d);
  t(0, d - 1) = S(1) / S(N);
  for (std::size_t i = 1; i < d; ++i) {
    t(i, i - 1) = S(1);
    t(i, d - 1) += alpha[i - 1];
  }
  return t;
}

}  // namespace

GeneratorMatrix kronecker_matrix(std::int64_t N, const std::vector<CertifiedReal>& alpha) {
  if (N < 1) throw InvalidArgument("Kronecker rule needs N >= 1");
  if (alpha.empty()) throw InvalidArgument("Kronecker layout needs d >= 2");
  bool exact = true;
  for (const auto& a : alpha) exact = exact && a.is_exact();
  if (exact) {
    std::vector<Rational> q;
    for (const auto& a : alpha) q.push_back(a.lower());
    return GeneratorMatrix(companion_layout<Rational>(N, q));
  }
  std::vector<Real> r;
  for (const auto& a : alpha) r.push_back(a.to_real());
  return GeneratorMatrix(companion_layout<Real>(N, r));
}

GeneratorMatrix rank1_matrix(std::int64_t N, const std::vector<std::int64_t>& g) {
  if (N < 1) throw InvalidArgument("rank-1 rule needs N >= 1");
  if (g.empty()) throw InvalidArgument("rank-1 layout needs d >= 2");
  std::vector<Rational> q;
  for (std::int64_t gj : g) q.emplace_back(floor_mod(gj, N), N);
  return GeneratorMatrix(companion_layout<Rational>(N, q));
}

DualBasis dual_basis(const GeneratorMatrix& T) {
  if (T.exact()) return DualBasis(T.rational().transpose().inverse());
  Matrix<Real> t = T.real();
  if (t.determinant() == 0) throw InvalidArgument("generator matrix is singular");
  return DualBasis(t.transpose().inverse());
}

GeneratorMatrix generator_matrix(const LatticeSpec& spec) {
  switch (spec.family()) {
    case LatticeSpec::Family::Kronecker: {
      const auto* k = spec.kronecker_params();
      return kronecker_matrix(k->N, k->alpha);
    }
    case LatticeSpec::Family::Rank1: {
      const auto* r = spec.rank1_params();
      return rank1_matrix(r->N, r->g);
    }
    case LatticeSpec::Family::Frolov: {
      const auto* f = spec.frolov_params();
      return frolov_matrix(f->d, f->a).T;
    }
    case LatticeSpec::Family::GeneralMatrix: return spec.general_params()->T;
  }
  throw InternalError("unknown lattice family");
}

PointSet::PointSet(std::size_t dim, std::vector<Real> coords, Real weight)
    : dim_(dim), coords_(std::move(coords)), weight_(std::move(weight)) {}

PointSet::PointSet(std::size_t dim, std::vector<std::int64_t> numerators,
                   std::vector<std::int64_t> denominators, Rational weight)
    : dim_(dim),
      numerators_(std::move(numerators)),
      denominators_(std::move(denominators)),
      weight_(to_real(weight)),
      exact_weight_(std::move(weight)) {
  coords_.resize(numerators_.size());
  for (std::size_t k = 0; k < numerators_.size(); ++k)
    coords_[k] = Real(numerators_[k]) / Real(denominators_[k % dim_]);
}

std::vector<double> PointSet::point(std::size_t i) const {
  std::vector<double> p(dim_);
  for (std::size_t j = 0; j < dim_; ++j) p[j] = static_cast<double>(coordinate(i, j));
  return p;
}

Rational PointSet::exact_coordinate(std::size_t i, std::size_t j) const {
  if (!exact()) throw InvalidArgument("point set has no exact representation");
  return Rational(numerators_[i * dim_ + j], denominators_[j]);
}

bool PointSet::operator==(const PointSet& o) const {
  if (dim_ != o.dim_ || size() != o.size()) return false;
  if (exact() && o.exact()) {
    if (*exact_weight_ != *o.exact_weight_) return false;
    for (std::size_t k = 0; k < numerators_.size(); ++k) {
      std::size_t j = k % dim_;
      if (int128(numerators_[k]) * o.denominators_[j] != int128(o.numerators_[k]) * denominators_[j])
        return false;
    }
    return true;
  }
  return weight_ == o.weight_ && coords_ == o.coords_;
}

namespace {

PointSet structured_points(std::int64_t N, const std::vector<Rational>& alpha) {
  const std::size_t d = alpha.size() + 1;
  std::vector<std::int64_t> den(d);
  std::vector<std::int64_t> num_alpha(d, 0);
  den[0] = N;
  for (std::size_t j = 1; j < d; ++j) {
    den[j] = static_cast<std::int64_t>(mp::denominator(alpha[j - 1]));
    num_alpha[j] = static_cast<std::int64_t>(
        floor_mod(static_cast<int128>(static_cast<std::int64_t>(mp::numerator(alpha[j - 1]) % den[j])),
                  int128(den[j])));
  }
  std::vector<std::int64_t> num(static_cast<std::size_t>(N) * d);
  for (std::int64_t n = 0; n < N; ++n) {
    num[n * d] = n;
    for (std::size_t j = 1; j < d; ++j)
      num[n * d + j] = static_cast<std::int64_t>(int128(n) * num_alpha[j] % den[j]);
  }
  return PointSet(d, std::move(num), std::move(den), Rational(1, N));
}

bool fits_int64(const Rational& q) {
  const BigInt limit = BigInt(1) << 62;
  return mp::denominator(q) < limit && mp::abs(mp::numerator(q)) < limit;
}

template <class S>
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> box_bounds(const Matrix<S>& tinv) {
  const std::size_t d = tinv.size();
  std::vector<std::int64_t> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    Real neg = 0, pos = 0;
    for (std::size_t j = 0; j < d; ++j) {
      Real v;
      if constexpr (std::is_same_v<S, Rational>)
        v = to_real(tinv(i, j));
      else
        v = tinv(i, j);
      (v < 0 ? neg : pos) += v;
    }
    lo[i] = static_cast<std::int64_t>(boost::multiprecision::floor(neg)) - 1;
    hi[i] = static_cast<std::int64_t>(boost::multiprecision::ceil(pos)) + 1;
  }
  return {lo, hi};
}

std::uint64_t candidate_count(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi) {
  long double total = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) total *= static_cast<long double>(hi[i] - lo[i] + 1);
  return total > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(total);
}

template <class Visit>
void odometer(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi, Visit&& visit) {
  const std::size_t d = lo.size();
  std::vector<std::int64_t> l = lo;
  while (true) {
    visit(l);
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (l[i] < hi[i]) {
        ++l[i];
        break;
      }
      l[i] = lo[i];
    }
    if (i == d) return;
  }
}

PointSet general_points(const GeneratorMatrix& T, const EnumerateOptions& options) {
  const std::size_t d = T.dim();
  if (T.exact()) {
    const Matrix<Rational>& t = T.rational();
    auto [lo, hi] = box_bounds(t.inverse());
    std::uint64_t need = candidate_count(lo, hi);
    if (need > options.max_candidates)
      throw ResourceLimit("lattice enumeration needs " + std::to_string(need) +
                              " candidates, cap is " + std::to_string(options.max_candidates),
                          need);
    std::vector<std::int64_t> den(d, 1);
    Matrix<Rational> scaled(d);
    for (std::size_t i = 0; i < d; ++i) {
      BigInt l = 1;
      for (std::size_t j = 0; j < d; ++j) l = mp::lcm(l, BigInt(mp::denominator(t(i, j))));
      if (l >= (BigInt(1) << 62)) throw ResourceLimit("generator denominators too large for exact enumeration");
      den[i] = static_cast<std::int64_t>(l);
      for (std::size_t j = 0; j < d; ++j) scaled(i, j) = t(i, j) * den[i];
    }
    std::vector<std::int64_t> num;
    odometer(lo, hi, [&](const std::vector<std::int64_t>& l) {
      std::vector<BigInt> x(d, 0);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) x[i] += mp::numerator(scaled(i, j)) * l[j];
        if (x[i] < 0 || x[i] >= den[i]) return;
      }
      for (const auto& v : x) num.push_back(static_cast<std::int64_t>(v));
    });
    Rational w = *T.exact_determinant();
    return PointSet(d, std::move(num), std::move(den), w < 0 ? Rational(-w) : w);
  }
  Matrix<Real> t = T.real();
  auto [lo, hi] = box_bounds(t.inverse());
  std::uint64_t need = candidate_count(lo, hi);
  if (need > options.max_candidates)
    throw ResourceLimit("lattice enumeration needs " + std::to_string(need) +
                            " candidates, cap is " + std::to_string(options.max_candidates),
                        need);
  std::vector<Real> coords;
  std::vector<Real> x(d);
  odometer(lo, hi, [&](const std::vector<std::int64_t>& l) {
    for (std::size_t i = 0; i < d; ++i) {
      Real s = 0;
      for (std::size_t j = 0; j < d; ++j) s += t(i, j) * l[j];
      // Half-open cube: coordinates equal to 1 are outside.
      if (s < 0 || s >= 1) return;
      x[i] = s;
    }
    coords.insert(coords.end(), x.begin(), x.end());
  });
  return PointSet(d, std::move(coords), boost::multiprecision::abs(t.determinant()));
}

}  // namespace

PointSet enumerate_points(const LatticeSpec& spec, const EnumerateOptions& options) {
  if (const auto* r = spec.rank1_params()) {
    std::vector<Rational> alpha;
    for (std::int64_t g : r->g) alpha.emplace_back(g, r->N);
    return structured_points(r->N, alpha);
  }
  if (const auto* k = spec.kronecker_params()) {
    bool small = k->rational();
    for (const auto& a : k->alpha) small = small && fits_int64(a.lower());
    if (small) {
      std::vector<Rational> alpha;
      for (const auto& a : k->alpha) alpha.push_back(a.lower());
      return structured_points(k->N, alpha);
    }
    const std::size_t d = k->alpha.size() + 1;
    std::vector<uint128> frac;
    for (const auto& a : k->alpha) frac.push_back(a.fraction_fixed128());
    const Real two113 = boost::multiprecision::ldexp(Real(1), 113);
    std::vector<Real> coords(static_cast<std::size_t>(k->N) * d);
    for (std::int64_t n = 0; n < k->N; ++n) {
      coords[n * d] = Real(n) / Real(k->N);
      for (std::size_t j = 1; j < d; ++j) {
        uint128 f = (uint128(n) * frac[j - 1]) >> 15;
        coords[n * d + j] = Real(static_cast<__float128>(f)) / two113;
      }
    }
    return PointSet(d, std::move(coords), Real(1) / Real(k->N));
  }
  return general_points(generator_matrix(spec), options);
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  for (std::size_t j = 0; j < points.dim(); ++j) out << (j ? "," : "") << "x" << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.dim(); ++j)
      out << (j ? "," : "") << format_sig17(points.coordinate(i, j));
    out << '\n';
  }
}

}  // namespace latrule
