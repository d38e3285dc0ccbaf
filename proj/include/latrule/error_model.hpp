#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "latrule/lattice.hpp"

namespace latrule {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct BoundParams {
  double s = 2;
  /// In [1, inf].
  double p = 2;
  /// In [1, inf].
  double theta = 2;
  /// Truncation level for |m|_1; 0 selects ceil(2 log2 N) + 8.
  int Mmax = 0;

  /// Throws InvalidArgument unless p, theta in [1, inf] and s > 1/p.
  void validate() const;
};

/// theta / (theta - 1), with 1 -> inf and inf -> 1.
double theta_conjugate(double theta);

/// ceil(2 log2 N) + 8.
int default_mmax(double N);

struct BoundSum {
  double value = 0;
  /// Majorant of the omitted |m|_1 > Mmax part, in the units of value.
  double tail_estimate = 0;
  int Mmax = 0;
  double rho = 0;
  std::optional<std::string> warning;
};

/// Truncated dyadic sum over |m|_1 <= Mmax using exact annulus counts.
/// `rho` may be supplied to skip recomputing the Zaremba index.
BoundSum wce_bound_sum(const LatticeSpec& spec, const BoundParams& params, std::optional<double> rho = {});

/// rho^{-s} (1 + log2 dT)^{(d-1)(1-1/theta)}.
double wce_bound_closed(double rho, double dT, int d, const BoundParams& params);

/// (log N)^{(d-1)(s+1-1/theta)} / N^s * (log log N)^{s(d-1)(1+delta)}, base 2.
double metrical_rate(double N, int d, double s, double theta, double delta);

namespace psi {
/// psi(N) = log N (log log N)^{1+delta} for N >= 3, else 1.
struct LogLogLog {
  double delta;
  double c = 1;
};
/// psi == 1.
struct Constant {
  double c;
};
}  // namespace psi
using PsiKind = std::variant<psi::LogLogLog, psi::Constant>;

double psi_value(const PsiKind& kind, double N);

/// c' N / psi(N)^{d-1} with c' = min(c, psi(1)^{d-1}).
double psi_lower_bound(double N, int d, const PsiKind& kind);

struct BoundRow {
  std::int64_t N = 0;
  double rho = 0;
  BoundSum sum;
  double closed = 0;
};

/// N,rho,bound_sum,bound_closed,tail_estimate
void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows);

}  // namespace latrule
