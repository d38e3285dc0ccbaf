#include "structured.hpp"

namespace latrule::detail {

namespace mp = boost::multiprecision;

int128 StructuredDual::dot_residue(const std::vector<std::int64_t>& k) const {
  int128 s = 0;
  for (std::size_t j = 0; j < k.size(); ++j) s = floor_mod(s + floor_mod(residue[j] * k[j], Q), Q);
  return s;
}

uint128 StructuredDual::dot_frac(const std::vector<std::int64_t>& k) const {
  uint128 s = 0;
  for (std::size_t j = 0; j < k.size(); ++j) s += static_cast<uint128>(static_cast<int128>(k[j])) * frac[j];
  return s;
}

int128 StructuredDual::dot_int(const std::vector<std::int64_t>& k) const {
  int128 s = 0;
  for (std::size_t j = 0; j < k.size(); ++j) s += int128(int_part[j]) * k[j];
  return s;
}

std::optional<StructuredDual> structured_dual(const LatticeSpec& spec) {
  StructuredDual sd;
  if (const auto* r = spec.rank1_params()) {
    sd.N = r->N;
    sd.d = r->g.size() + 1;
    sd.Q = r->N;
    for (std::int64_t g : r->g) {
      sd.residue.push_back(g);
      sd.int_part.push_back(0);
    }
    return sd;
  }
  const auto* k = spec.kronecker_params();
  if (!k) return std::nullopt;
  sd.N = k->N;
  sd.d = k->alpha.size() + 1;
  const BigInt cap = BigInt(1) << 62;
  if (k->rational()) {
    BigInt Q = 1;
    for (const auto& a : k->alpha) Q = mp::lcm(Q, BigInt(mp::denominator(a.lower())));
    bool fits = Q < cap;
    for (const auto& a : k->alpha) fits = fits && mp::abs(floor_int(a.lower())) < cap;
    if (fits) {
      sd.Q = static_cast<int128>(static_cast<std::int64_t>(Q));
      for (const auto& a : k->alpha) {
        BigInt ip = floor_int(a.lower());
        Rational rest = (a.lower() - Rational(ip)) * Q;
        sd.residue.push_back(static_cast<std::int64_t>(mp::numerator(rest)));
        sd.int_part.push_back(static_cast<std::int64_t>(ip));
      }
      return sd;
    }
  }
  sd.exact = false;
  for (const auto& a : k->alpha) {
    BigInt ip = floor_int(a.midpoint());
    if (mp::abs(ip) >= cap) throw InvalidArgument("alpha component too large");
    sd.int_part.push_back(static_cast<std::int64_t>(ip));
    sd.frac.push_back(a.fraction_fixed128());
  }
  return sd;
}

Real fixed128_to_real(uint128 f) {
  const std::uint64_t hi = static_cast<std::uint64_t>(f >> 64), lo = static_cast<std::uint64_t>(f);
  return mp::ldexp(Real(hi), -64) + mp::ldexp(Real(lo), -128);
}

}  // namespace latrule::detail
