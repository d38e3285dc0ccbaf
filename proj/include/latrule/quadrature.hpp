#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "latrule/error_model.hpp"
#include "latrule/lattice.hpp"

namespace latrule {

/// prod_j (x_j (1 - x_j))^a on [0,1]^d, zero outside.
struct Bump {
  int a = 1;
  int d = 2;
};

struct CustomIntegrand {
  std::function<double(const std::vector<double>&)> eval;
  std::function<Rational(const std::vector<Rational>&)> exact_eval;
  std::optional<double> exact_integral;
};

class Integrand {
 public:
  Integrand(Bump b);
  Integrand(CustomIntegrand c, double smoothness_hint);

  double operator()(const std::vector<double>& x) const;
  bool has_exact_eval() const;
  Rational exact(const std::vector<Rational>& x) const;
  std::optional<double> exact_integral() const;
  /// a + 1/2 for bumps.
  double smoothness_hint() const { return hint_; }
  const Bump* bump() const { return std::get_if<Bump>(&kind_); }

 private:
  std::variant<Bump, CustomIntegrand> kind_;
  double hint_;
};

/// ((a!)^2 / (2a+1)!)^d
Rational bump_exact_integral(int a, int d);

/// Q_T(f) = |det T| sum f(x) with pairwise summation.
double qmc_apply(const LatticeSpec& spec, const Integrand& f, const EnumerateOptions& options = {});
double qmc_apply(const PointSet& points, const Integrand& f);
/// Exact rational evaluation; requires an exact point set and evaluator.
Rational qmc_apply_exact(const LatticeSpec& spec, const Integrand& f);
Rational qmc_apply_exact(const PointSet& points, const Integrand& f);

struct ConvergenceRow {
  std::int64_t N = 0;
  double abs_error = 0;
  double bound_closed = 0;
  std::optional<double> bound_sum;
  double rho = 0;
};

struct RateFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;
  std::size_t used = 0;
};

/// Least squares of log2(error) on log2(N). Throws InsufficientData with
/// fewer than three rows or fewer than three distinct N.
RateFit fit_rate(const std::vector<ConvergenceRow>& rows);

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  RateFit fit;
};

struct StudyOptions {
  bool with_bound_sum = false;
};

/// Rows with error below 10 eps |I(f)| are kept but left out of the fit.
ConvergenceStudy convergence_study(const std::vector<LatticeSpec>& family, const Integrand& f,
                                   const BoundParams& params, const StudyOptions& options = {});

/// N,error,bound_closed,bound_sum then "# slope=<v> residual=<v>".
void write_convergence_csv(std::ostream& out, const ConvergenceStudy& study);

}  // namespace latrule
