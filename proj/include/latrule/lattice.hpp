#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "latrule/numeric.hpp"

namespace latrule {

/// A d x d real matrix held exactly (rationals) when possible, otherwise as
/// float128.
class LatticeMatrix {
 public:
  explicit LatticeMatrix(Matrix<Rational> m) : m_(std::move(m)) {}
  explicit LatticeMatrix(Matrix<Real> m) : m_(std::move(m)) {}

  bool exact() const { return std::holds_alternative<Matrix<Rational>>(m_); }
  std::size_t dim() const;
  /// Requires exact().
  const Matrix<Rational>& rational() const;
  Matrix<Real> real() const;
  Real determinant() const;
  std::optional<Rational> exact_determinant() const;

 protected:
  std::variant<Matrix<Rational>, Matrix<Real>> m_;
};

class GeneratorMatrix : public LatticeMatrix {
 public:
  using LatticeMatrix::LatticeMatrix;
};

/// B = (T^T)^{-1}; columns generate the dual lattice.
class DualBasis : public LatticeMatrix {
 public:
  using LatticeMatrix::LatticeMatrix;
};

struct KroneckerParams {
  std::int64_t N = 1;
  std::vector<CertifiedReal> alpha;
  bool rational() const;
};

struct Rank1Params {
  std::int64_t N = 1;
  /// Reduced into [0, N-1].
  std::vector<std::int64_t> g;
  std::vector<std::int64_t> gcd_with_N;
  /// Some g_j == 0 mod N: the point set collapses in that coordinate.
  bool degenerate = false;
};

struct FrolovParams {
  int d = 1;
  Real a = 2;
};

struct GeneralParams {
  GeneratorMatrix T;
};

class LatticeSpec {
 public:
  enum class Family { Kronecker, Rank1, Frolov, GeneralMatrix };

  static LatticeSpec kronecker(std::int64_t N, std::vector<CertifiedReal> alpha);
  static LatticeSpec rank1(std::int64_t N, std::vector<std::int64_t> g);
  static LatticeSpec frolov(int d, Real a);
  static LatticeSpec general(GeneratorMatrix T);

  Family family() const;
  std::string family_name() const;
  std::size_t dim() const;

  /// Kronecker and Rank1 rules: the companion-like layout with N points.
  bool structured() const;
  /// N for structured rules.
  std::int64_t point_count() const;

  const KroneckerParams* kronecker_params() const { return std::get_if<KroneckerParams>(&v_); }
  const Rank1Params* rank1_params() const { return std::get_if<Rank1Params>(&v_); }
  const FrolovParams* frolov_params() const { return std::get_if<FrolovParams>(&v_); }
  const GeneralParams* general_params() const { return std::get_if<GeneralParams>(&v_); }

 private:
  template <class P>
  explicit LatticeSpec(P p) : v_(std::move(p)) {}
  std::variant<KroneckerParams, Rank1Params, FrolovParams, GeneralParams> v_;
};

GeneratorMatrix kronecker_matrix(std::int64_t N, const std::vector<CertifiedReal>& alpha);
GeneratorMatrix rank1_matrix(std::int64_t N, const std::vector<std::int64_t>& g);
DualBasis dual_basis(const GeneratorMatrix& T);

struct FrolovGenerator {
  GeneratorMatrix T;
  /// Increasing roots of p_d(x) = -1 + prod_{j=1}^d (x - 2j + 1).
  std::vector<Real> roots;
  /// B_{ij} = roots_i^{j-1}.
  Matrix<Real> vandermonde;
  Real vandermonde_det;
  /// |det T^{-1}| = a^d |det B|, the asymptotic point count.
  Real inverse_det;
};

/// Coefficients of p_d, constant term first.
std::vector<BigInt> frolov_polynomial(int d);
/// Integer roots of a monic integer polynomial (its only possible rational roots).
std::vector<BigInt> rational_roots(const std::vector<BigInt>& monic);
FrolovGenerator frolov_matrix(int d, const Real& a);

GeneratorMatrix generator_matrix(const LatticeSpec& spec);

class PointSet {
 public:
  PointSet(std::size_t dim, std::vector<Real> coords, Real weight);
  PointSet(std::size_t dim, std::vector<std::int64_t> numerators,
           std::vector<std::int64_t> denominators, Rational weight);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  const Real& coordinate(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }
  std::vector<double> point(std::size_t i) const;
  const Real& weight() const { return weight_; }

  bool exact() const { return exact_weight_.has_value(); }
  /// Requires exact().
  Rational exact_coordinate(std::size_t i, std::size_t j) const;
  const std::optional<Rational>& exact_weight() const { return exact_weight_; }

  /// Exact comparison for exact sets; bitwise float128 comparison otherwise.
  bool operator==(const PointSet& o) const;

 private:
  std::size_t dim_;
  std::vector<Real> coords_;
  std::vector<std::int64_t> numerators_;
  std::vector<std::int64_t> denominators_;
  Real weight_;
  std::optional<Rational> exact_weight_;
};

struct EnumerateOptions {
  /// Cap on integer candidates scanned for Frolov / general lattices.
  std::uint64_t max_candidates = 50'000'000;
};

PointSet enumerate_points(const LatticeSpec& spec, const EnumerateOptions& options = {});

/// Header x1,...,xd then one row per point, 17 significant digits.
void write_points_csv(std::ostream& out, const PointSet& points);

}  // namespace latrule
