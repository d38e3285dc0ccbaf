#include "latrule/quadrature.hpp"

#include <cfloat>
#include <cmath>
#include <ostream>
#include <set>

#include "latrule/parallel.hpp"
#include "latrule/zaremba.hpp"

namespace latrule {

namespace mp = boost::multiprecision;

namespace {

Rational rpow(const Rational& x, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

Integrand::Integrand(Bump b) : kind_(b), hint_(b.a + 0.5) {
  if (b.a < 1) throw InvalidArgument("bump exponent must be at least 1");
  if (b.d < 1) throw InvalidArgument("bump dimension must be at least 1");
}

Integrand::Integrand(CustomIntegrand c, double smoothness_hint) : kind_(std::move(c)), hint_(smoothness_hint) {
  if (!std::get<CustomIntegrand>(kind_).eval) throw InvalidArgument("custom integrand needs an evaluator");
}

double Integrand::operator()(const std::vector<double>& x) const {
  if (const auto* b = bump()) {
    double v = 1;
    for (double xi : x) {
      if (xi < 0 || xi > 1) return 0;
      v *= std::pow(xi * (1 - xi), b->a);
    }
    return v;
  }
  return std::get<CustomIntegrand>(kind_).eval(x);
}

bool Integrand::has_exact_eval() const {
  return bump() || static_cast<bool>(std::get<CustomIntegrand>(kind_).exact_eval);
}

Rational Integrand::exact(const std::vector<Rational>& x) const {
  if (const auto* b = bump()) {
    Rational v = 1;
    for (const auto& xi : x) {
      if (xi < 0 || xi > 1) return 0;
      v *= rpow(xi * (1 - xi), b->a);
    }
    return v;
  }
  const auto& c = std::get<CustomIntegrand>(kind_);
  if (!c.exact_eval) throw InvalidArgument("integrand has no exact evaluator");
  return c.exact_eval(x);
}

std::optional<double> Integrand::exact_integral() const {
  if (const auto* b = bump()) return static_cast<double>(to_real(bump_exact_integral(b->a, b->d)));
  return std::get<CustomIntegrand>(kind_).exact_integral;
}

Rational bump_exact_integral(int a, int d) {
  if (a < 1) throw InvalidArgument("bump exponent must be at least 1");
  if (d < 1) throw InvalidArgument("bump dimension must be at least 1");
  BigInt fa = 1, f2 = 1;
  for (int i = 2; i <= a; ++i) fa *= i;
  for (int i = 2; i <= 2 * a + 1; ++i) f2 *= i;
  Rational one(fa * fa, f2);
  return rpow(one, d);
}

namespace {

double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise(v, h) + pairwise(v + h, n - h);
}

}  // namespace

double qmc_apply(const PointSet& points, const Integrand& f) {
  const std::size_t n = points.size();
  std::vector<double> values(n);
  parallel_chunks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) values[i] = f(points.point(i));
  });
  return static_cast<double>(points.weight()) * pairwise(values.data(), n);
}

double qmc_apply(const LatticeSpec& spec, const Integrand& f, const EnumerateOptions& options) {
  return qmc_apply(enumerate_points(spec, options), f);
}

Rational qmc_apply_exact(const PointSet& points, const Integrand& f) {
  if (!points.exact()) throw InvalidArgument("point set has no exact representation");
  Rational sum = 0;
  std::vector<Rational> x(points.dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.dim(); ++j) x[j] = points.exact_coordinate(i, j);
    sum += f.exact(x);
  }
  return sum * *points.exact_weight();
}

Rational qmc_apply_exact(const LatticeSpec& spec, const Integrand& f) {
  return qmc_apply_exact(enumerate_points(spec), f);
}

RateFit fit_rate(const std::vector<ConvergenceRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  std::set<std::int64_t> distinct;
  for (const auto& r : rows) {
    if (!(r.abs_error > 0) || r.N < 1) continue;
    pts.emplace_back(std::log2(static_cast<double>(r.N)), std::log2(r.abs_error));
    distinct.insert(r.N);
  }
  if (pts.size() < 3 || distinct.size() < 3)
    throw InsufficientData("rate fit needs at least 3 rows with distinct N and positive error, got " +
                           std::to_string(distinct.size()));
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (auto [x, y] : pts) {
    double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.used = pts.size();
  return fit;
}

ConvergenceStudy convergence_study(const std::vector<LatticeSpec>& family, const Integrand& f,
                                   const BoundParams& params, const StudyOptions& options) {
  auto exact = f.exact_integral();
  if (!exact) throw InvalidArgument("convergence study needs a known exact integral");
  ConvergenceStudy study;
  std::vector<ConvergenceRow> usable;
  const double floor = 10 * DBL_EPSILON * std::fabs(*exact);
  for (const auto& spec : family) {
    PointSet pts = enumerate_points(spec);
    ConvergenceRow row;
    row.N = static_cast<std::int64_t>(pts.size());
    row.abs_error = std::fabs(qmc_apply(pts, f) - *exact);
    ZarembaResult z = zaremba_index(spec);
    row.rho = static_cast<double>(z.rho);
    const double dT = static_cast<double>(1 / pts.weight());
    row.bound_closed = wce_bound_closed(row.rho, std::max(1.0, dT), static_cast<int>(spec.dim()), params);
    if (options.with_bound_sum) row.bound_sum = wce_bound_sum(spec, params, row.rho).value;
    study.rows.push_back(row);
    if (row.abs_error >= floor) usable.push_back(row);
  }
  study.fit = fit_rate(usable);
  return study;
}

void write_convergence_csv(std::ostream& out, const ConvergenceStudy& study) {
  out << "N,error,bound_closed,bound_sum\n";
  for (const auto& r : study.rows)
    out << r.N << "," << format_sig17(r.abs_error) << "," << format_sig17(r.bound_closed) << ","
        << (r.bound_sum ? format_sig17(*r.bound_sum) : std::string()) << "\n";
  out << "# slope=" << format_sig17(study.fit.slope) << " residual=" << format_sig17(study.fit.residual) << "\n";
}

}  // namespace latrule
