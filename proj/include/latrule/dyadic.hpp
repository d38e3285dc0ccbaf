#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "latrule/lattice.hpp"

namespace latrule {

/// m in N_0^d naming the annulus
/// I_m = { x : floor(2^{m_i - 1}) / 2 <= |x_i| <= 2^{m_i} for all i }.
struct DyadicIndex {
  std::vector<int> m;
  int l1() const;
};

/// All m in N_0^d with |m|_1 == l, lexicographically increasing.
std::vector<DyadicIndex> dyadic_shell(std::size_t d, int l);

/// 24 unless LATRULE_DYADIC_CAP holds a positive integer.
int default_dyadic_cap();

/// Counts nonzero dual points in dyadic annuli. Structure derived from the
/// spec is computed once and reused across indices.
class DyadicCounter {
 public:
  explicit DyadicCounter(const LatticeSpec& spec, int cap = default_dyadic_cap());
  ~DyadicCounter();
  DyadicCounter(DyadicCounter&&) noexcept;
  DyadicCounter& operator=(DyadicCounter&&) noexcept;

  std::size_t dim() const;
  int cap() const { return cap_; }
  void set_cap(int cap) { cap_ = cap; }
  /// Cap on enumerated candidates per index.
  void set_work_limit(std::uint64_t n) { work_limit_ = n; }

  /// Throws ResourceLimit when |m|_1 exceeds the cap.
  std::uint64_t count(const DyadicIndex& m) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int cap_;
  std::uint64_t work_limit_ = 2'000'000'000ULL;
};

std::uint64_t dyadic_count(const LatticeSpec& spec, const DyadicIndex& m, int cap = default_dyadic_cap());

/// 0 when |m|_1 < log2(rho), otherwise 2^{|m|_1 + d + 1} / rho.
double annulus_count_bound(const DyadicIndex& m, double rho);

struct CensusRow {
  DyadicIndex m;
  int l1 = 0;
  std::uint64_t count = 0;
  double bound = 0;
};

/// Every m with |m|_1 <= mmax, ordered by |m|_1 then lexicographically.
std::vector<CensusRow> dyadic_census(const LatticeSpec& spec, int mmax, double rho);

/// m1,...,md,|m|1,count,bound
void write_census_csv(std::ostream& out, const std::vector<CensusRow>& rows);

}  // namespace latrule
