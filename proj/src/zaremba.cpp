#include "latrule/zaremba.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>

#include "latrule/diophantine.hpp"
#include "latrule/parallel.hpp"
#include "structured.hpp"

namespace latrule {

namespace mp = boost::multiprecision;

Real r_product(const std::vector<Real>& z) {
  Real r = 1;
  for (const Real& x : z) r *= std::max(Real(1), mp::abs(x));
  return r;
}

double r_product(const std::vector<double>& z) {
  double r = 1;
  for (double x : z) r *= std::max(1.0, std::fabs(x));
  return r;
}

namespace {

using detail::StructuredDual;
using KVec = std::vector<std::int64_t>;

void atomic_min(std::atomic<std::int64_t>& a, std::int64_t v) {
  std::int64_t cur = a.load(std::memory_order_relaxed);
  while (v < cur && !a.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

/// Canonical k in Z^m \ {0} (first nonzero entry positive) with
/// prod max(1,|k_j|) <= cutoff(). Worker w of W takes k_1 = w, w+W, ...
template <class Cutoff, class Visit>
class CrossWalker {
 public:
  CrossWalker(std::size_t m, Cutoff cutoff, Visit visit) : m_(m), k_(m, 0), cutoff_(cutoff), visit_(visit) {}

  void run(std::int64_t first, std::int64_t stride) {
    for (std::int64_t t = first;; t += stride) {
      const std::int64_t c = cutoff_();
      if (t > 0 && t > c) break;
      if (c < 1) break;
      k_[0] = t;
      rec(1, std::max<std::int64_t>(1, t), t == 0);
    }
  }

 private:
  void rec(std::size_t j, std::int64_t P, bool all_zero) {
    if (j == m_) {
      if (!all_zero) visit_(k_, P);
      return;
    }
    k_[j] = 0;
    rec(j + 1, P, all_zero);
    for (std::int64_t t = 1;; ++t) {
      const std::int64_t c = cutoff_();
      if (int128(t) * P > c) break;
      k_[j] = t;
      rec(j + 1, P * t, false);
      if (!all_zero) {
        k_[j] = -t;
        rec(j + 1, P * t, false);
      }
    }
    k_[j] = 0;
  }

  std::size_t m_;
  KVec k_;
  Cutoff cutoff_;
  Visit visit_;
};

template <class Cutoff, class Visit>
void walk_cross(std::size_t m, std::int64_t first, std::int64_t stride, Cutoff cutoff, Visit visit) {
  CrossWalker<Cutoff, Visit>(m, cutoff, visit).run(first, stride);
}

bool lex_less(const KVec& a, const KVec& b) { return a < b; }

/// Numerator of r over the common denominator Q: P * max(Q, N * D).
template <class W>
struct ExactBest {
  W value;
  KVec k;
};

template <class W>
ZarembaResult structured_exact(const StructuredDual& sd, const ZarembaOptions& options) {
  const std::size_t m = sd.d - 1;
  const W Q = W(sd.Q), N = W(sd.N);
  const W k0_value = N * Q;
  std::atomic<std::int64_t> cutoff{sd.N};
  std::atomic<bool> stop{false};
  std::optional<W> abort_num;
  if (options.abort_below) {
    // r < a  <=>  numerator < a*Q; a is an integer for rank-1 searches.
    Real a = *options.abort_below;
    abort_num = W(static_cast<std::int64_t>(mp::ceil(a))) * Q;
    if (mp::ceil(a) != a) abort_num.reset();
  }
  const auto workers = static_cast<unsigned>(std::max<std::int64_t>(1, std::min<std::int64_t>(thread_limit(), sd.N)));
  std::vector<ExactBest<W>> bests(workers, ExactBest<W>{k0_value, KVec(m, 0)});
  parallel_chunks(workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t w = b; w < e; ++w) {
      auto& best = bests[w];
      auto cut = [&] { return stop.load(std::memory_order_relaxed) ? std::int64_t{-1} : cutoff.load(std::memory_order_relaxed); };
      walk_cross(m, static_cast<std::int64_t>(w), static_cast<std::int64_t>(workers), cut, [&](const KVec& k, std::int64_t P) {
        int128 s = sd.dot_residue(k);
        int128 D = std::min(s, sd.Q - s);
        W nd = N * W(D);
        W v = W(P) * (nd > Q ? nd : Q);
        if (v < best.value || (v == best.value && lex_less(k, best.k))) {
          best.value = v;
          best.k = k;
          W fl = v / Q;
          atomic_min(cutoff, fl > W(sd.N) ? sd.N : static_cast<std::int64_t>(fl));
          if (abort_num && v < *abort_num) stop = true;
        }
      });
    }
  });
  ExactBest<W> best = bests[0];
  for (const auto& b : bests)
    if (b.value < best.value || (b.value == best.value && lex_less(b.k, best.k))) best = b;

  ZarembaResult res;
  res.exact = true;
  res.complete = !stop;
  Rational rho(BigInt(best.value), BigInt(sd.Q));
  res.rho_exact = rho;
  res.rho = to_real(rho);
  bool zero = true;
  for (auto x : best.k) zero = zero && x == 0;
  if (zero) {
    res.witness.assign(sd.d, Real(0));
    res.witness[0] = Real(sd.N);
    res.coefficients.assign(sd.d, 0);
    res.coefficients[sd.d - 1] = 1;
    return res;
  }
  BigInt sum = 0;
  for (std::size_t j = 0; j < m; ++j) sum += BigInt(static_cast<std::int64_t>(sd.residue[j])) * best.k[j];
  const BigInt Qb(static_cast<std::int64_t>(sd.Q));
  BigInt q = floor_int(Rational(sum, Qb));
  BigInt s = sum - q * Qb;
  BigInt kd = BigInt(static_cast<std::int64_t>(sd.dot_int(best.k))) + q + (2 * s > Qb ? 1 : 0);
  Rational z1 = Rational(sd.N) * (Rational(kd) - Rational(BigInt(static_cast<std::int64_t>(sd.dot_int(best.k)))) -
                                  Rational(sum, Qb));
  res.witness.push_back(to_real(z1));
  for (auto x : best.k) {
    res.witness.emplace_back(x);
    res.coefficients.push_back(x);
  }
  res.coefficients.push_back(static_cast<std::int64_t>(kd));
  return res;
}

struct FloatBest {
  Real value;
  KVec k;
};

ZarembaResult structured_float(const StructuredDual& sd, const ZarembaOptions& options) {
  const std::size_t m = sd.d - 1;
  const Real N = sd.N;
  const double Nd = static_cast<double>(sd.N);
  auto value_of = [&](const KVec& k, std::int64_t P) {
    uint128 f = sd.dot_frac(k);
    uint128 D = f >> 127 ? uint128(0) - f : f;
    Real nd = N * detail::fixed128_to_real(D);
    return Real(P) * (nd > 1 ? nd : Real(1));
  };
  auto approx_of = [&](const KVec& k, std::int64_t P) {
    uint128 f = sd.dot_frac(k);
    uint128 D = f >> 127 ? uint128(0) - f : f;
    double nd = Nd * std::ldexp(static_cast<double>(static_cast<std::uint64_t>(D >> 64)), -64);
    return static_cast<double>(P) * std::max(1.0, nd);
  };

  std::atomic<std::int64_t> cutoff{sd.N};
  std::atomic<bool> stop{false};
  const auto workers = static_cast<unsigned>(std::max<std::int64_t>(1, std::min<std::int64_t>(thread_limit(), sd.N)));
  std::vector<FloatBest> bests(workers, FloatBest{N, KVec(m, 0)});
  parallel_chunks(workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t w = b; w < e; ++w) {
      auto& best = bests[w];
      double best_approx = Nd;
      auto cut = [&] { return stop.load(std::memory_order_relaxed) ? std::int64_t{-1} : cutoff.load(std::memory_order_relaxed); };
      walk_cross(m, static_cast<std::int64_t>(w), static_cast<std::int64_t>(workers), cut, [&](const KVec& k, std::int64_t P) {
        if (approx_of(k, P) > best_approx * (1 + 1e-9) + 1e-9) return;
        Real v = value_of(k, P);
        if (v < best.value || (v == best.value && lex_less(k, best.k))) {
          best.value = v;
          best.k = k;
          best_approx = static_cast<double>(v);
          atomic_min(cutoff, static_cast<std::int64_t>(mp::floor(v)));
          if (options.abort_below && v < *options.abort_below) stop = true;
        }
      });
    }
  });
  FloatBest best = bests[0];
  for (const auto& b : bests)
    if (b.value < best.value || (b.value == best.value && lex_less(b.k, best.k))) best = b;

  ZarembaResult res;
  res.exact = false;
  res.complete = !stop;
  res.rho = best.value;

  // Near ties: any other canonical k within 2^-40 of rho.
  if (res.complete) {
    const Real limit = best.value * (1 + mp::ldexp(Real(1), -40));
    const std::int64_t fixed_cut = static_cast<std::int64_t>(mp::floor(limit));
    bool tie = false;
    bool zero_best = true;
    for (auto x : best.k) zero_best = zero_best && x == 0;
    if (!zero_best && N <= limit) tie = true;
    walk_cross(m, 0, 1, [&] { return tie ? std::int64_t{-1} : fixed_cut; }, [&](const KVec& k, std::int64_t P) {
      if (k == best.k) return;
      if (approx_of(k, P) > static_cast<double>(limit) * (1 + 1e-9) + 1e-9) return;
      if (value_of(k, P) <= limit) tie = true;
    });
    res.near_tie = tie;
  }

  bool zero = true;
  for (auto x : best.k) zero = zero && x == 0;
  if (zero) {
    res.witness.assign(sd.d, Real(0));
    res.witness[0] = N;
    res.coefficients.assign(sd.d, 0);
    res.coefficients[sd.d - 1] = 1;
    return res;
  }
  uint128 f = sd.dot_frac(best.k);
  const bool up = (f >> 127) != 0;
  Real fr = detail::fixed128_to_real(f);
  Real z1 = up ? N * (1 - fr) : -N * fr;
  // floor(alpha.k): integer parts plus the carries of the fractional products.
  Real beta = 0;
  for (std::size_t j = 0; j < m; ++j)
    beta += Real(best.k[j]) * (Real(sd.int_part[j]) + detail::fixed128_to_real(sd.frac[j]));
  Real kd = mp::round(beta - fr) + (up ? 1 : 0);
  res.witness.push_back(z1);
  for (auto x : best.k) {
    res.witness.emplace_back(x);
    res.coefficients.push_back(x);
  }
  res.coefficients.push_back(static_cast<std::int64_t>(kd));
  return res;
}

bool small_enough(const StructuredDual& sd) {
  auto bits = [](int128 v) {
    int b = 0;
    while (v > 0) {
      v >>= 1;
      ++b;
    }
    return b;
  };
  return 2 * bits(sd.N) + bits(sd.Q) + 2 < 126;
}

struct BruteOutcome {
  Real rho;
  std::optional<Rational> rho_exact;
  std::vector<Real> witness;
  KVec coefficients;
  bool aborted = false;
};

void canonicalize(KVec& k, std::vector<Real>& z) {
  for (auto x : k) {
    if (x == 0) continue;
    if (x < 0) {
      for (auto& y : k) y = -y;
      for (auto& y : z) y = -y;
    }
    return;
  }
}

BruteOutcome brute_exact(const Matrix<Rational>& B, std::int64_t box, const std::optional<Real>& abort_below) {
  const std::size_t d = B.size();
  std::vector<std::int64_t> L(d);
  std::vector<std::int64_t> M(d * d);
  long double magnitude = 1;
  for (std::size_t i = 0; i < d; ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < d; ++j) l = mp::lcm(l, BigInt(mp::denominator(B(i, j))));
    BigInt row = 0;
    for (std::size_t j = 0; j < d; ++j) {
      BigInt v = mp::numerator(B(i, j)) * (l / mp::denominator(B(i, j)));
      row += mp::abs(v);
      if (mp::abs(v) >= (BigInt(1) << 62)) throw ResourceLimit("dual basis entries too large for brute force");
      M[i * d + j] = static_cast<std::int64_t>(v);
    }
    if (l >= (BigInt(1) << 62) || row * box >= (BigInt(1) << 62))
      throw ResourceLimit("dual basis entries too large for brute force");
    L[i] = static_cast<std::int64_t>(l);
    magnitude *= std::max(static_cast<long double>(L[i]), static_cast<long double>(row) * box);
  }
  if (magnitude >= 0x1p125L) throw ResourceLimit("brute-force products exceed 128 bits");

  KVec k(d, -box);
  std::vector<std::int64_t> n(d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) n[i] += M[i * d + j] * k[j];
  int128 best = std::numeric_limits<int128>::max();
  KVec best_k;
  int128 abort_num = -1;
  if (abort_below) {
    int128 denom = 1;
    for (auto l : L) denom *= l;
    abort_num = static_cast<int128>(static_cast<std::int64_t>(mp::ceil(*abort_below))) * denom;
  }
  while (true) {
    int128 prod = 1;
    std::size_t i = 0;
    for (; i < d; ++i) {
      std::int64_t a = n[i] < 0 ? -n[i] : n[i];
      prod *= (a > L[i] ? a : L[i]);
      if (prod >= best) break;
    }
    if (i == d) {
      bool zero = true;
      for (auto x : k) zero = zero && x == 0;
      if (!zero) {
        best = prod;
        best_k = k;
        if (prod < abort_num) break;
      }
    }
    std::size_t c = 0;
    for (; c < d; ++c) {
      if (k[c] < box) {
        ++k[c];
        for (std::size_t r = 0; r < d; ++r) n[r] += M[r * d + c];
        break;
      }
      k[c] = -box;
      for (std::size_t r = 0; r < d; ++r) n[r] -= 2 * box * M[r * d + c];
    }
    if (c == d) break;
  }
  BruteOutcome out;
  out.aborted = abort_num >= 0 && best < abort_num;
  BigInt denom = 1;
  for (auto l : L) denom *= l;
  Rational rho(BigInt(best), denom);
  out.rho_exact = rho;
  out.rho = to_real(rho);
  out.coefficients = best_k;
  for (std::size_t i = 0; i < d; ++i) {
    Rational zi = 0;
    for (std::size_t j = 0; j < d; ++j) zi += B(i, j) * best_k[j];
    out.witness.push_back(to_real(zi));
  }
  canonicalize(out.coefficients, out.witness);
  return out;
}

BruteOutcome brute_real(const Matrix<Real>& B, std::int64_t box, const std::optional<Real>& abort_below) {
  const std::size_t d = B.size();
  KVec k(d, -box);
  std::vector<Real> z(d, Real(0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) z[i] += B(i, j) * k[j];
  Real best = std::numeric_limits<Real>::infinity();
  KVec best_k;
  bool aborted = false;
  while (true) {
    Real prod = 1;
    std::size_t i = 0;
    for (; i < d; ++i) {
      Real a = mp::abs(z[i]);
      if (a > 1) prod *= a;
      if (prod >= best) break;
    }
    if (i == d) {
      bool zero = true;
      for (auto x : k) zero = zero && x == 0;
      if (!zero) {
        best = prod;
        best_k = k;
        if (abort_below && prod < *abort_below) {
          aborted = true;
          break;
        }
      }
    }
    std::size_t c = 0;
    for (; c < d; ++c) {
      if (k[c] < box) {
        ++k[c];
        for (std::size_t r = 0; r < d; ++r) {
          Real s = 0;
          for (std::size_t j = 0; j < d; ++j) s += B(r, j) * k[j];
          z[r] = s;
        }
        break;
      }
      k[c] = -box;
    }
    if (c == d) break;
  }
  BruteOutcome out;
  out.aborted = aborted;
  out.rho = best;
  out.coefficients = best_k;
  for (std::size_t i = 0; i < d; ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < d; ++j) s += B(i, j) * best_k[j];
    out.witness.push_back(s);
  }
  canonicalize(out.coefficients, out.witness);
  return out;
}

BruteOutcome brute(const DualBasis& B, std::int64_t box, const std::optional<Real>& abort_below) {
  if (box < 1) throw InvalidArgument("brute-force box must be positive");
  if (B.exact()) return brute_exact(B.rational(), box, abort_below);
  return brute_real(B.real(), box, abort_below);
}

ZarembaResult general_index(const LatticeSpec& spec, const ZarembaOptions& options) {
  GeneratorMatrix T = generator_matrix(spec);
  const std::size_t d = T.dim();
  std::int64_t box = options.box;
  if (box <= 0) {
    box = static_cast<std::int64_t>(
        (std::pow(static_cast<double>(options.max_candidates), 1.0 / static_cast<double>(d)) - 1) / 2);
    box = std::max<std::int64_t>(box, 1);
  }
  BruteOutcome b = brute(dual_basis(T), box, options.abort_below);
  ZarembaResult res;
  res.rho = b.rho;
  res.witness = b.witness;
  res.coefficients = b.coefficients;
  // Any dual z with r(z) < rho has |z_i| < rho, hence |k'_i| < sum_j |T_ji| rho.
  Matrix<Real> t = T.real();
  bool complete = !b.aborted;
  for (std::size_t i = 0; i < d && complete; ++i) {
    Real reach = 0;
    for (std::size_t j = 0; j < d; ++j) reach += mp::abs(t(j, i));
    if (reach * b.rho > Real(box)) complete = false;
  }
  res.complete = complete;
  res.exact = complete && T.exact();
  if (res.exact) res.rho_exact = b.rho_exact;
  return res;
}

}  // namespace

ZarembaResult zaremba_index(const LatticeSpec& spec, const ZarembaOptions& options) {
  auto sd = detail::structured_dual(spec);
  if (!sd) return general_index(spec, options);
  if (!sd->exact) return structured_float(*sd, options);
  if (small_enough(*sd)) return structured_exact<int128>(*sd, options);
  return structured_exact<BigInt>(*sd, options);
}

ZarembaResult zaremba_brute(const LatticeSpec& spec, std::int64_t box) {
  GeneratorMatrix T = generator_matrix(spec);
  BruteOutcome b = brute(dual_basis(T), box, std::nullopt);
  ZarembaResult res;
  res.rho = b.rho;
  res.rho_exact = b.rho_exact;
  res.witness = b.witness;
  res.coefficients = b.coefficients;
  res.exact = T.exact();
  res.complete = true;
  return res;
}

SearchResult search_best_gen(std::int64_t N, int d, SearchMode mode) {
  if (N < 2) throw InvalidArgument("generator search needs N >= 2");
  if (d < 2) throw InvalidArgument("generator search needs d >= 2");
  std::vector<std::int64_t> units;
  for (std::int64_t g = 1; g < N; ++g)
    if (gcd64(g, N) == 1) units.push_back(g);

  std::vector<std::vector<std::int64_t>> candidates;
  std::vector<std::int64_t> bases;
  if (mode == SearchMode::Full) {
    if (d == 2) {
      for (auto g : units) candidates.push_back({g});
    } else if (d == 3) {
      if (N > 2000) throw ResourceLimit("full search for d = 3 is capped at N <= 2000", static_cast<std::uint64_t>(N));
      for (auto g1 : units)
        for (auto g2 : units) candidates.push_back({g1, g2});
    } else {
      throw ResourceLimit("full search is capped at d <= 3; use Korobov mode");
    }
  } else {
    if (N > 1'000'000 / d)
      throw ResourceLimit("Korobov search is capped at N <= 10^6/d = " + std::to_string(1'000'000 / d),
                          static_cast<std::uint64_t>(N));
    for (auto g : units) {
      candidates.push_back(korobov_vector(N, g, d).generator());
      bases.push_back(g);
    }
  }

  std::atomic<std::int64_t> global{0};
  struct Local {
    std::int64_t rho = 0;
    std::size_t index = 0;
    bool found = false;
  };
  const unsigned workers = std::max(1u, thread_limit());
  std::vector<Local> locals(workers);
  std::size_t chunk_count = std::min<std::size_t>(workers, candidates.size());
  parallel_chunks(chunk_count, [&](std::size_t b, std::size_t e) {
    for (std::size_t w = b; w < e; ++w) {
      Local& loc = locals[w];
      for (std::size_t idx = w; idx < candidates.size(); idx += chunk_count) {
        ZarembaOptions opt;
        std::int64_t floor_best = global.load(std::memory_order_relaxed);
        if (floor_best > 0) opt.abort_below = Real(floor_best);
        ZarembaResult r = zaremba_index(LatticeSpec::rank1(N, candidates[idx]), opt);
        if (!r.complete) continue;
        auto rho = static_cast<std::int64_t>(r.rho);
        if (!loc.found || rho > loc.rho) {
          loc = {rho, idx, true};
          std::int64_t cur = global.load();
          while (rho > cur && !global.compare_exchange_weak(cur, rho)) {
          }
        }
      }
    }
  });
  Local best;
  for (const auto& l : locals)
    if (l.found && (!best.found || l.rho > best.rho || (l.rho == best.rho && l.index < best.index))) best = l;
  if (!best.found) throw InternalError("generator search found no candidate");

  SearchResult out;
  out.g = candidates[best.index];
  if (mode == SearchMode::Korobov) out.korobov_g = bases[best.index];
  out.result = zaremba_index(LatticeSpec::rank1(N, out.g));
  out.candidates = candidates.size();
  return out;
}

double zaremba_existence_bound(std::int64_t N, int d) {
  if (N < 2 || d < 2) throw InvalidArgument("existence bound needs N >= 2 and d >= 2");
  double c = 1;
  for (int j = 1; j < d; ++j) c *= static_cast<double>(j) / 2;
  return c * static_cast<double>(N) / std::pow(std::log2(static_cast<double>(N)), d - 1);
}

}  // namespace latrule
