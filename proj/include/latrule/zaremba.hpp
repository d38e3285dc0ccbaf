#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latrule/lattice.hpp"

namespace latrule {

/// prod_j max(1, |z_j|).
Real r_product(const std::vector<Real>& z);
double r_product(const std::vector<double>& z);

struct ZarembaResult {
  Real rho = 0;
  /// Set for rational lattices searched completely.
  std::optional<Rational> rho_exact;
  /// Dual point attaining rho.
  std::vector<Real> witness;
  /// Integer coordinates k' with witness = B k'.
  std::vector<std::int64_t> coefficients;
  bool exact = false;
  /// False when a search budget stopped the scan before rho was certified.
  bool complete = true;
  /// Floating Kronecker only: another dual point came within 2^-40
  /// (relative) of rho.
  bool near_tie = false;
};

struct ZarembaOptions {
  /// Frolov / general matrices: half-width of the coefficient box, 0 picks
  /// the largest box within max_candidates.
  std::int64_t box = 0;
  std::uint64_t max_candidates = 20'000'000;
  /// Stop as soon as a dual point with r < abort_below is found; the result
  /// is then marked incomplete.
  std::optional<Real> abort_below;
};

ZarembaResult zaremba_index(const LatticeSpec& spec, const ZarembaOptions& options = {});

/// Minimum of r(B k') over 0 < |k'|_inf <= box, straight from the dual basis.
ZarembaResult zaremba_brute(const LatticeSpec& spec, std::int64_t box);

enum class SearchMode { Full, Korobov };

struct SearchResult {
  /// g_1..g_{d-1}.
  std::vector<std::int64_t> g;
  /// Korobov base; 0 in full mode.
  std::int64_t korobov_g = 0;
  ZarembaResult result;
  std::uint64_t candidates = 0;
};

SearchResult search_best_gen(std::int64_t N, int d, SearchMode mode);

/// C_d N / (log2 N)^{d-1} with C_d = (d-1)!/2^{d-1}.
double zaremba_existence_bound(std::int64_t N, int d);

}  // namespace latrule
