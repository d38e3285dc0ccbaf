#include <doctest.h>

#include <cmath>
#include <sstream>

#include "latrule/diophantine.hpp"
#include "latrule/quadrature.hpp"

using namespace latrule;

namespace {

std::vector<LatticeSpec> fibonacci_family(int lo, int hi) {
  std::vector<LatticeSpec> out;
  for (int n = lo; n <= hi; ++n) {
    auto r = fibonacci_rule(n);
    out.push_back(LatticeSpec::rank1(r.N, {r.g}));
  }
  return out;
}

ConvergenceRow synthetic(std::int64_t N, double err) {
  ConvergenceRow r;
  r.N = N;
  r.abs_error = err;
  return r;
}

}  // namespace

TEST_CASE("bump_exact_integral") {
  CHECK(bump_exact_integral(1, 1) == Rational(1, 6));
  CHECK(bump_exact_integral(2, 2) == Rational(1, 900));
  CHECK(bump_exact_integral(1, 3) == Rational(1, 216));
  CHECK(*Integrand(Bump{2, 2}).exact_integral() == doctest::Approx(1.0 / 900));
  CHECK(Integrand(Bump{3, 2}).smoothness_hint() == 3.5);
  CHECK_THROWS_AS(bump_exact_integral(0, 2), InvalidArgument);
}

TEST_CASE("qmc_apply on a small rule") {
  auto spec = LatticeSpec::rank1(4, {1});
  Integrand bump(Bump{1, 2});
  CHECK(qmc_apply(spec, bump) == doctest::Approx(0.033203125).epsilon(1e-15));
  CHECK(qmc_apply_exact(spec, bump) == Rational(17, 512));
  Integrand zero(CustomIntegrand{[](const std::vector<double>&) { return 0.0; }, {}, 0.0}, 1);
  CHECK(qmc_apply(spec, zero) == 0);
  Integrand one(CustomIntegrand{[](const std::vector<double>&) { return 1.0; },
                                [](const std::vector<Rational>&) { return Rational(1); }, 1.0},
                1);
  CHECK(qmc_apply(LatticeSpec::rank1(89, {55}), one) == doctest::Approx(1).epsilon(1e-15));
  CHECK(qmc_apply_exact(LatticeSpec::rank1(89, {55}), one) == 1);
}

TEST_CASE("linearity") {
  auto spec = LatticeSpec::rank1(89, {55});
  Integrand f(Bump{1, 2}), g(Bump{2, 2});
  Integrand h(CustomIntegrand{[&](const std::vector<double>& x) { return 3 * f(x) - 2 * g(x); },
                              [&](const std::vector<Rational>& x) { return 3 * f.exact(x) - 2 * g.exact(x); }, {}},
              1);
  CHECK(qmc_apply_exact(spec, h) == 3 * qmc_apply_exact(spec, f) - 2 * qmc_apply_exact(spec, g));
  CHECK(qmc_apply(spec, h) == doctest::Approx(3 * qmc_apply(spec, f) - 2 * qmc_apply(spec, g)).epsilon(1e-13));
}

TEST_CASE("rules integrate the bump more accurately as N grows") {
  Integrand f(Bump{2, 2});
  const double I = *f.exact_integral();
  double prev = 1;
  for (int n = 8; n <= 18; n += 2) {
    auto r = fibonacci_rule(n);
    double err = std::fabs(qmc_apply(LatticeSpec::rank1(r.N, {r.g}), f) - I);
    CHECK(err < prev);
    prev = err;
  }
  auto fr = std::fabs(qmc_apply(LatticeSpec::frolov(2, 8), f) - I);
  CHECK(fr < 0.01 * I);
}

TEST_CASE("fit_rate on synthetic data") {
  std::vector<ConvergenceRow> rows;
  for (int k = 5; k <= 15; ++k) rows.push_back(synthetic(1LL << k, std::pow(2.0, -2.0 * k)));
  auto fit = fit_rate(rows);
  CHECK(fit.slope == doctest::Approx(-2).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.used == rows.size());

  rows.clear();
  for (int k = 5; k <= 15; ++k) rows.push_back(synthetic(1LL << k, std::pow(2.0, -2.0 * k) * k));
  fit = fit_rate(rows);
  CHECK(fit.slope > -2.0);
  CHECK(fit.slope < -1.7);

  CHECK_THROWS_AS(fit_rate({synthetic(8, 0.1), synthetic(16, 0.01)}), InsufficientData);
  CHECK_THROWS_AS(fit_rate({synthetic(8, 0.1), synthetic(8, 0.1), synthetic(8, 0.1)}), InsufficientData);
  CHECK_THROWS_AS(fit_rate({synthetic(8, 0.1), synthetic(16, 0), synthetic(32, 0.01)}), InsufficientData);
}

TEST_CASE("convergence_study on fibonacci rules") {
  BoundParams params{2, 2, 2, 0};
  auto a2 = convergence_study(fibonacci_family(10, 20), Integrand(Bump{2, 2}), params);
  CHECK(a2.rows.size() == 11);
  CHECK(a2.fit.slope <= -1.9);
  auto a1 = convergence_study(fibonacci_family(10, 20), Integrand(Bump{1, 2}), params);
  CHECK(a1.fit.slope <= -1.2);
  for (const auto& row : a2.rows) {
    CHECK(row.rho > 0);
    CHECK(row.bound_closed > 0);
    CHECK_FALSE(row.bound_sum.has_value());
  }
  std::vector<LatticeSpec> same(3, LatticeSpec::rank1(89, {55}));
  CHECK_THROWS_AS(convergence_study(same, Integrand(Bump{2, 2}), params), InsufficientData);
}

TEST_CASE("error tracks the closed bound on fibonacci rules") {
  BoundParams params{2, 2, 2, 0};
  // Bump a=1: error / bound_closed measured in [0.0103, 0.0206] for n = 8..20.
  auto a1 = convergence_study(fibonacci_family(8, 20), Integrand(Bump{1, 2}), params);
  for (const auto& row : a1.rows) {
    const double ratio = row.abs_error / row.bound_closed;
    INFO("N=" << row.N << " ratio=" << ratio);
    CHECK(ratio > 0.005);
    CHECK(ratio < 0.04);
  }
  auto a2 = convergence_study(fibonacci_family(8, 20), Integrand(Bump{2, 2}), params);
  for (const auto& row : a2.rows) CHECK(row.abs_error < row.bound_closed);
}

TEST_CASE("convergence CSV") {
  ConvergenceStudy s;
  ConvergenceRow r = synthetic(8, 0.5);
  r.bound_closed = 0.25;
  s.rows = {r};
  s.fit.slope = -2;
  s.fit.residual = 0;
  std::ostringstream out;
  write_convergence_csv(out, s);
  CHECK(out.str() == "N,error,bound_closed,bound_sum\n8,0.5,0.25,\n# slope=-2 residual=0\n");
}
