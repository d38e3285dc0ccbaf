#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latrule/lattice.hpp"

namespace latrule::detail {

/// Dual of a Kronecker/rank-1 rule. Dual points are
/// z = (N (k_d - alpha.k), k_1, ..., k_{d-1}).
struct StructuredDual {
  std::int64_t N = 1;
  std::size_t d = 2;
  bool exact = true;

  // Exact: alpha_j = int_part_j + residue_j / Q with 0 <= residue_j < Q.
  int128 Q = 1;
  std::vector<int128> residue;

  // Floating: fractional parts as 0.128 fixed point.
  std::vector<uint128> frac;

  std::vector<std::int64_t> int_part;

  /// alpha.k mod 1 scaled to Q (exact mode).
  int128 dot_residue(const std::vector<std::int64_t>& k) const;
  /// alpha.k mod 1 as 0.128 fixed point (floating mode).
  uint128 dot_frac(const std::vector<std::int64_t>& k) const;
  /// floor(alpha.k) contribution from the integer parts.
  int128 dot_int(const std::vector<std::int64_t>& k) const;
};

/// Empty for Frolov and general matrices.
std::optional<StructuredDual> structured_dual(const LatticeSpec& spec);

Real fixed128_to_real(uint128 f);

}  // namespace latrule::detail
