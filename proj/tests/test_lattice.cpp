#include <doctest.h>

#include <random>
#include <sstream>

#include "latrule/diophantine.hpp"
#include "latrule/lattice.hpp"
#include "oracles.hpp"

using namespace latrule;
namespace mp = boost::multiprecision;

namespace {

std::vector<CertifiedReal> exact_alpha(std::initializer_list<Rational> qs) {
  std::vector<CertifiedReal> v;
  for (const auto& q : qs) v.emplace_back(q);
  return v;
}

}  // namespace

TEST_CASE("kronecker_matrix layout") {
  GeneratorMatrix T = kronecker_matrix(4, exact_alpha({Rational(1, 3)}));
  REQUIRE(T.exact());
  const auto& t = T.rational();
  CHECK(t(0, 0) == 0);
  CHECK(t(0, 1) == Rational(1, 4));
  CHECK(t(1, 0) == 1);
  CHECK(t(1, 1) == Rational(1, 3));
  CHECK_THROWS_AS(kronecker_matrix(0, exact_alpha({Rational(1, 3)})), InvalidArgument);
  CHECK_THROWS_AS(kronecker_matrix(1, {}), InvalidArgument);
}

TEST_CASE("irrational kronecker determinant is 1/N up to sign") {
  std::vector<CertifiedReal> alpha{CertifiedReal::golden_ratio(), CertifiedReal::sqrt_of(2)};
  GeneratorMatrix T = kronecker_matrix(5, alpha);
  CHECK_FALSE(T.exact());
  CHECK(static_cast<double>(mp::abs(T.determinant())) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("rank1_matrix reduces generators") {
  auto a = rank1_matrix(5, {3}).rational();
  auto b = rank1_matrix(5, {8}).rational();
  CHECK(a == b);
  CHECK(a(1, 1) == Rational(3, 5));
  GeneratorMatrix T = rank1_matrix(7, {2, 3});
  CHECK(mp::abs(*T.exact_determinant()) == Rational(1, 7));
  auto spec = LatticeSpec::rank1(5, {10});
  CHECK(spec.rank1_params()->degenerate);
  CHECK(spec.rank1_params()->gcd_with_N[0] == 5);
}

TEST_CASE("dual_basis matches the displayed structure") {
  DualBasis B = dual_basis(kronecker_matrix(4, exact_alpha({Rational(1, 3)})));
  const auto& b = B.rational();
  CHECK(b(0, 0) == Rational(-4, 3));
  CHECK(b(0, 1) == 4);
  CHECK(b(1, 0) == 1);
  CHECK(b(1, 1) == 0);
  Matrix<Rational> id = Matrix<Rational>::identity(3);
  CHECK(dual_basis(GeneratorMatrix(id)).rational() == id);
  Matrix<Rational> sing(2);
  CHECK_THROWS_AS(dual_basis(GeneratorMatrix(sing)), InvalidArgument);
}

TEST_CASE("dual pairing is integral") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(-5, 5);
  for (std::int64_t N : {5, 13, 89}) {
    GeneratorMatrix T = rank1_matrix(N, {3, 7});
    DualBasis B = dual_basis(T);
    const auto& t = T.rational();
    const auto& b = B.rational();
    CHECK(b.transpose() * t == Matrix<Rational>::identity(3));
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> k(3), l(3);
      for (int j = 0; j < 3; ++j) {
        k[j] = small(rng);
        l[j] = small(rng);
      }
      auto z = b.apply(k);
      auto x = t.apply(l);
      Rational dot = 0;
      for (int j = 0; j < 3; ++j) dot += z[j] * x[j];
      CHECK(mp::denominator(dot) == 1);
    }
  }
  auto alpha = named_alpha(alpha::SqrtPrimes{{2, 3}}, 3).values;
  GeneratorMatrix T = kronecker_matrix(11, alpha);
  Matrix<Real> t = T.real(), b = dual_basis(T).real();
  Matrix<Real> prod = b.transpose() * t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(mp::abs(prod(i, j) - (i == j ? 1 : 0)) < mp::ldexp(Real(1), -50));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Real> k(3), l(3);
    for (int j = 0; j < 3; ++j) {
      k[j] = small(rng);
      l[j] = small(rng);
    }
    auto z = b.apply(k);
    auto x = t.apply(l);
    Real dot = 0;
    for (int j = 0; j < 3; ++j) dot += z[j] * x[j];
    CHECK(mp::abs(dot - mp::round(dot)) < Real(1e-10));
  }
}

TEST_CASE("frolov_matrix small cases") {
  auto p1 = frolov_polynomial(1);
  CHECK(p1 == std::vector<BigInt>{-2, 1});
  auto f1 = frolov_matrix(1, 2);
  CHECK(f1.roots.size() == 1);
  CHECK(static_cast<double>(f1.roots[0]) == doctest::Approx(2.0));
  CHECK(static_cast<double>(f1.T.real()(0, 0)) == doctest::Approx(0.5));

  auto p2 = frolov_polynomial(2);
  CHECK(p2 == std::vector<BigInt>{2, -4, 1});
  auto f2 = frolov_matrix(2, Real(1.5));
  const Real r2 = mp::sqrt(Real(2));
  CHECK(mp::abs(f2.roots[0] - (2 - r2)) < mp::ldexp(Real(1), -100));
  CHECK(mp::abs(f2.roots[1] - (2 + r2)) < mp::ldexp(Real(1), -100));
  CHECK(mp::abs(f2.vandermonde_det - 2 * r2) < mp::ldexp(Real(1), -98));
  CHECK(mp::abs(f2.inverse_det - Real(2.25) * 2 * r2) < mp::ldexp(Real(1), -96));

  for (int d = 3; d <= 10; ++d) {
    CHECK(rational_roots(frolov_polynomial(d)).empty());
    auto f = frolov_matrix(d, 2);
    CHECK(f.roots.size() == static_cast<std::size_t>(d));
    for (std::size_t i = 1; i < f.roots.size(); ++i) CHECK(f.roots[i] > f.roots[i - 1]);
  }
  CHECK(rational_roots({-6, 1, 1}) == std::vector<BigInt>{-3, 2});
  CHECK_THROWS_AS(frolov_matrix(2, 1), InvalidArgument);
}

TEST_CASE("enumerate_points for structured rules") {
  PointSet ps = enumerate_points(LatticeSpec::rank1(4, {1}));
  REQUIRE(ps.size() == 4);
  REQUIRE(ps.exact());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(ps.exact_coordinate(i, 0) == Rational(static_cast<long>(i), 4));
    CHECK(ps.exact_coordinate(i, 1) == Rational(static_cast<long>(i), 4));
  }
  CHECK(*ps.exact_weight() == Rational(1, 4));

  PointSet k = enumerate_points(LatticeSpec::kronecker(5, exact_alpha({Rational(3, 5)})));
  PointSet r = enumerate_points(LatticeSpec::rank1(5, {3}));
  CHECK(k == r);

  PointSet irr = enumerate_points(LatticeSpec::kronecker(50, {CertifiedReal::golden_ratio()}));
  CHECK(irr.size() == 50);
  for (std::size_t i = 0; i < irr.size(); ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(irr.coordinate(i, j) >= 0);
      CHECK(irr.coordinate(i, j) < 1);
    }
  CHECK(irr.coordinate(0, 1) == 0);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(static_cast<double>(irr.coordinate(7, 1)) == doctest::Approx(7 * phi - std::floor(7 * phi)).epsilon(1e-12));
}

TEST_CASE("kronecker with gcd 1 has N distinct points") {
  PointSet ps = enumerate_points(LatticeSpec::rank1(12, {5, 7}));
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < ps.size(); ++i) seen.insert(ps.point(i));
  CHECK(seen.size() == 12);
}

TEST_CASE("general lattice enumeration") {
  Matrix<Rational> half = Matrix<Rational>::identity(2).scaled(Rational(1, 2));
  PointSet ps = enumerate_points(LatticeSpec::general(GeneratorMatrix(half)));
  CHECK(ps.size() == 4);
  CHECK(*ps.exact_weight() == Rational(1, 4));
  for (double a : {4.0, 8.0}) {
    PointSet f = enumerate_points(LatticeSpec::frolov(2, Real(a)));
    CHECK(static_cast<std::int64_t>(f.size()) == oracle::frolov2_count(a));
  }
  EnumerateOptions tiny;
  tiny.max_candidates = 10;
  try {
    enumerate_points(LatticeSpec::frolov(2, 8), tiny);
    FAIL("expected ResourceLimit");
  } catch (const ResourceLimit& e) {
    CHECK(e.required() > 10);
  }
}

TEST_CASE("frolov count approaches the determinant") {
  PointSet f = enumerate_points(LatticeSpec::frolov(2, 8));
  const double expected = 64 * 2 * std::sqrt(2.0);
  CHECK(std::fabs(static_cast<double>(f.size()) / expected - 1) < 0.25);
}

TEST_CASE("points CSV") {
  std::ostringstream out;
  write_points_csv(out, enumerate_points(LatticeSpec::rank1(4, {1})));
  CHECK(out.str() == "x1,x2\n0,0\n0.25,0.25\n0.5,0.5\n0.75,0.75\n");
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(LatticeSpec::rank1(0, {1}), InvalidArgument);
  CHECK_THROWS_AS(LatticeSpec::rank1(5, {}), InvalidArgument);
  CHECK_THROWS_AS(LatticeSpec::frolov(2, 1), InvalidArgument);
  CHECK_THROWS_AS(LatticeSpec::general(GeneratorMatrix(Matrix<Rational>(2))), InvalidArgument);
  auto s = LatticeSpec::rank1(5, {2});
  CHECK(s.family_name() == "rank1");
  CHECK(s.dim() == 2);
  CHECK(s.point_count() == 5);
  CHECK_THROWS_AS(LatticeSpec::frolov(2, 2).point_count(), InvalidArgument);
}
