#include "latrule/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "latrule/dyadic.hpp"
#include "latrule/parallel.hpp"
#include "latrule/zaremba.hpp"

namespace latrule {

void BoundParams::validate() const {
  if (std::isnan(p) || p < 1) throw InvalidArgument("p must lie in [1, inf]");
  if (std::isnan(theta) || theta < 1) throw InvalidArgument("theta must lie in [1, inf]");
  if (!std::isfinite(s)) throw InvalidArgument("s must be finite");
  if (!(s > 1 / p)) throw InvalidArgument("smoothness must satisfy s > 1/p");
  if (Mmax < 0) throw InvalidArgument("Mmax must be nonnegative");
}

double theta_conjugate(double theta) {
  if (std::isnan(theta) || theta < 1) throw InvalidArgument("theta must be at least 1");
  if (theta == 1) return kInfinity;
  if (std::isinf(theta)) return 1;
  return theta / (theta - 1);
}

int default_mmax(double N) { return static_cast<int>(std::ceil(2 * std::log2(std::max(N, 1.0)))) + 8; }

namespace {

double count_power(double count, double exponent) {
  if (exponent == 0) return count >= 1 ? 1 : 0;
  return std::pow(count, exponent);
}

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

BoundSum wce_bound_sum(const LatticeSpec& spec, const BoundParams& params, std::optional<double> rho) {
  params.validate();
  const int d = static_cast<int>(spec.dim());
  BoundSum out;
  if (!rho) rho = static_cast<double>(zaremba_index(spec).rho);
  out.rho = *rho;
  double dT = spec.structured() ? static_cast<double>(spec.point_count())
                                : static_cast<double>(boost::multiprecision::abs(1 / generator_matrix(spec).determinant()));
  out.Mmax = params.Mmax > 0 ? params.Mmax : default_mmax(dT);

  const double tp = theta_conjugate(params.theta);
  const bool sup = std::isinf(tp);
  const double e = std::isinf(params.p) ? 0 : (sup ? 1 / params.p : tp / params.p);

  DyadicCounter counter(spec);
  counter.set_cap(std::max(counter.cap(), out.Mmax));
  std::vector<DyadicIndex> ms;
  for (int l = 0; l <= out.Mmax; ++l)
    for (auto& m : dyadic_shell(spec.dim(), l)) ms.push_back(m);
  std::vector<double> terms(ms.size(), 0);
  parallel_chunks(ms.size(), [&](std::size_t b, std::size_t e2) {
    for (std::size_t i = b; i < e2; ++i) {
      const int l = ms[i].l1();
      // Empty when 2^{|m|_1} < rho.
      if (l < std::log2(*rho)) continue;
      const double c = static_cast<double>(counter.count(ms[i]));
      if (c == 0) continue;
      terms[i] = sup ? std::exp2(-params.s * l) * count_power(c, e) : std::exp2(-params.s * l * tp) * count_power(c, e);
    }
  });

  double total = 0;
  for (double t : terms) total = sup ? std::max(total, t) : total + t;
  out.value = sup ? total : std::pow(total, 1 / tp);

  const double lrho = std::log2(*rho);
  if (sup) {
    double tail = 0;
    for (int l = out.Mmax + 1; l <= out.Mmax + 200; ++l) {
      if (l < lrho) continue;
      double t = std::exp2(-params.s * l) * count_power(std::exp2(l + d + 1) / *rho, e);
      tail = std::max(tail, t);
    }
    out.tail_estimate = std::max(0.0, tail - out.value);
  } else {
    double tail = 0;
    for (int l = out.Mmax + 1; l <= out.Mmax + 100000; ++l) {
      if (l < lrho) continue;
      double t = binomial(l + d - 1, d - 1) * std::exp2(-params.s * l * tp) *
                 count_power(std::exp2(l + d + 1) / *rho, e);
      tail += t;
      if (t == 0 || t < tail * 1e-18) break;
    }
    out.tail_estimate = std::pow(total + tail, 1 / tp) - out.value;
  }
  if (out.Mmax < lrho)
    out.warning = "Mmax " + std::to_string(out.Mmax) + " is below log2(rho); the truncated sum vanishes";
  return out;
}

double wce_bound_closed(double rho, double dT, int d, const BoundParams& params) {
  if (!(rho >= 1)) throw InvalidArgument("rho must be at least 1");
  if (!(dT >= 1)) throw InvalidArgument("d_T must be at least 1");
  if (d < 1) throw InvalidArgument("dimension must be positive");
  const double exponent = (d - 1) * (1 - 1 / params.theta);
  return std::pow(rho, -params.s) * std::pow(1 + std::log2(dT), exponent);
}

double metrical_rate(double N, int d, double s, double theta, double delta) {
  if (!(N >= 3)) throw InvalidArgument("metrical rate needs N >= 3");
  if (!(delta > 0)) throw InvalidArgument("delta must be positive");
  const double lg = std::log2(N), llg = std::log2(lg);
  return std::pow(lg, (d - 1) * (s + 1 - 1 / theta)) / std::pow(N, s) * std::pow(llg, s * (d - 1) * (1 + delta));
}

double psi_value(const PsiKind& kind, double N) {
  if (const auto* l = std::get_if<psi::LogLogLog>(&kind)) {
    if (N < 3) return 1;
    const double lg = std::log2(N);
    return lg * std::pow(std::log2(lg), 1 + l->delta);
  }
  return 1;
}

double psi_lower_bound(double N, int d, const PsiKind& kind) {
  if (!(N >= 1)) throw InvalidArgument("psi bound needs N >= 1");
  const double c = std::visit([](const auto& k) { return k.c; }, kind);
  const double cp = std::min(c, std::pow(psi_value(kind, 1), d - 1));
  return cp * N / std::pow(psi_value(kind, N), d - 1);
}

void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
  out << "N,rho,bound_sum,bound_closed,tail_estimate\n";
  for (const auto& r : rows)
    out << r.N << "," << format_sig17(r.rho) << "," << format_sig17(r.sum.value) << "," << format_sig17(r.closed)
        << "," << format_sig17(r.sum.tail_estimate) << "\n";
}

}  // namespace latrule
