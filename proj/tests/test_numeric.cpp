#include <doctest.h>

#include "latrule/numeric.hpp"
#include "latrule/parallel.hpp"

using namespace latrule;

TEST_CASE("parse_rational reads fractions and decimals exactly") {
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-3/5") == Rational(-3, 5));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == Rational(250));
  CHECK(parse_rational("1/0.5") == Rational(2));
  CHECK_THROWS_AS(parse_rational("abc"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational(""), InvalidArgument);
}

TEST_CASE("floor helpers") {
  CHECK(floor_int(Rational(-7, 2)) == -4);
  CHECK(ceil_int(Rational(-7, 2)) == -3);
  CHECK(floor_int(Rational(7, 2)) == 3);
  CHECK(floor_mod(std::int64_t{-3}, std::int64_t{5}) == 2);
  CHECK(floor_div(int128(-7), int128(2)) == -4);
  CHECK(mod_inverse(3, 7) == 5);
  CHECK_THROWS_AS(mod_inverse(2, 4), InvalidArgument);
  CHECK(is_prime(97));
  CHECK_FALSE(is_prime(91));
}

TEST_CASE("format_sig17 trims and keeps 17 digits") {
  CHECK(format_sig17(2.0) == "2");
  CHECK(format_sig17(0.25) == "0.25");
  CHECK(format_sig17(Rational(1, 3)) == "0.33333333333333333");
  CHECK(rational_string(Rational(6, 4)) == "3/2");
  CHECK(rational_string(Rational(5)) == "5");
}

TEST_CASE("certified enclosures contain the true value") {
  auto s2 = CertifiedReal::sqrt_of(2);
  CHECK(s2.lower() * s2.lower() <= 2);
  CHECK(s2.upper() * s2.upper() >= 2);
  CHECK(s2.width() < Rational(1, BigInt(1) << 250));
  auto phi = CertifiedReal::golden_ratio();
  // phi^2 = phi + 1
  CHECK(phi.lower() * phi.lower() <= phi.upper() + 1);
  CHECK(phi.upper() * phi.upper() >= phi.lower() + 1);
  auto e = CertifiedReal::exp_of(1);
  CHECK(e.lower() < Rational(27182818285, 10000000000) + Rational(1, 100000000000));
  CHECK(e.upper() > Rational(27182818284, 10000000000));
  CHECK(e.width() < Rational(1, BigInt(1) << 250));
  auto einv = CertifiedReal::exp_of(-1);
  CHECK(einv.lower() * e.lower() <= 1);
  CHECK(einv.upper() * e.upper() >= 1);
  CHECK(CertifiedReal(Rational(1, 3)).is_exact());
}

TEST_CASE("fraction_fixed128 is the fractional part") {
  auto q = CertifiedReal(Rational(7, 4));
  CHECK(q.fraction_fixed128() == (uint128(1) << 126) * 3);
  auto neg = CertifiedReal(Rational(-1, 4));
  CHECK(neg.fraction_fixed128() == (uint128(1) << 126) * 3);
}

TEST_CASE("matrix inverse and determinant") {
  Matrix<Rational> m(2);
  m(0, 0) = 0;
  m(0, 1) = Rational(1, 4);
  m(1, 0) = 1;
  m(1, 1) = Rational(1, 3);
  CHECK(m.determinant() == Rational(-1, 4));
  CHECK(m * m.inverse() == Matrix<Rational>::identity(2));
  Matrix<Rational> singular(2);
  singular(0, 0) = 1;
  singular(0, 1) = 2;
  singular(1, 0) = 2;
  singular(1, 1) = 4;
  CHECK(singular.determinant() == 0);
  CHECK_THROWS_AS(singular.inverse(), InvalidArgument);
}

TEST_CASE("parallel_chunks covers the range and rethrows") {
  set_thread_limit(3);
  std::vector<int> hit(100, 0);
  parallel_chunks(hit.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) hit[i] += 1;
  });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_chunks(10, [](std::size_t, std::size_t) { throw InvalidArgument("x"); }),
                  InvalidArgument);
  set_thread_limit(0);
}
