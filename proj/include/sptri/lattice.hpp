#ifndef SPTRI_LATTICE_HPP
#define SPTRI_LATTICE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sptri/diagram.hpp"
#include "sptri/dps.hpp"

// Exact integer linear algebra and the relation lattice
// L = Z^{points} / <p + q + r : {p, q, r} a line>.

namespace sptri::lattice {

using BigInt = mpz_class;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix from_rows(
      const std::vector<std::vector<long>>& rows);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  BigInt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  IntMatrix operator*(const IntMatrix& rhs) const;
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Fraction-free (Bareiss) determinant of a square matrix.
BigInt determinant(const IntMatrix& m);

struct SNFResult {
  /// Nonzero invariant factors d_1 | d_2 | ... , all positive.
  std::vector<BigInt> diagonal;
  /// U (rows x rows) and V (cols x cols), unimodular, with U*M*V = S.
  std::optional<IntMatrix> left;
  std::optional<IntMatrix> right;

  std::size_t rank() const noexcept { return diagonal.size(); }
  IntMatrix diagonal_matrix(std::size_t rows, std::size_t cols) const;
};

SNFResult smith_normal_form(const IntMatrix& m, bool with_transforms = false);

/// Row-sparse integer matrix with small entries.
struct SparseIntMatrix {
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows;
};

/// Point-line incidence relations, one +1 per point of each line.
SparseIntMatrix relation_matrix(const dps::DualPolarSpace& space);

/// Rank over F2 by sparse elimination.
std::size_t f2_rank(const SparseIntMatrix& m);

struct EliminationStats {
  std::size_t unit_pivots = 0;
  std::size_t residual_rows = 0;
  std::size_t residual_cols = 0;
  bool used_bigint = false;
};

/// A presentation of Z^{cols} / rowspace with explicit coordinates for the
/// free part. Coordinates are a section: a homomorphism Z^{cols} -> Z^{free}
/// vanishing on every relation, surjective, and injective modulo torsion.
class LatticePresentation {
 public:
  std::size_t genus = 0;
  std::size_t points = 0;
  std::size_t lines = 0;
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;   // invariant factors > 1
  std::string method;            // "snf" or "closure-certificate"
  EliminationStats stats;

  std::span<const std::int64_t> coordinates(dps::PointIndex p) const;
  void set_coordinates(std::vector<std::int64_t> coords);

 private:
  std::vector<std::int64_t> coords_;  // points x free_rank, row-major
};

/// Quotient Z^{cols} / rowspan(m): sparse elimination on +-1 pivots, then a
/// dense Smith normal form on whatever is left.
LatticePresentation quotient(const SparseIntMatrix& m);

/// Relation lattice of DSp(2g,2) through exact elimination.
LatticePresentation build_lattice(const dps::DualPolarSpace& space);

/// Relation lattice certified from a proposed basis: coordinates propagate
/// along the closure of `generators` and are checked against every line.
/// Succeeding proves the lattice is free on `generators`; throws
/// kBasisNotVerified otherwise.
LatticePresentation lattice_from_basis(
    const dps::DualPolarSpace& space,
    std::span<const dps::PointIndex> generators);

/// Relation lattice from any spanning set S: coordinates propagate along the
/// closure of S in Z^S, the nonzero line sums generate the kernel K, and
/// L = Z^S / K is resolved by `quotient`. Throws kBasisNotVerified when S
/// does not span.
LatticePresentation lattice_from_spanning_set(
    const dps::DualPolarSpace& space,
    std::span<const dps::PointIndex> generators);

/// F2 rank of the relation matrix through the same spanning-set quotient,
/// taken mod 2. Memory stays O(points * |generators|) bits.
std::size_t f2_rank_from_spanning_set(
    const dps::DualPolarSpace& space,
    std::span<const dps::PointIndex> generators);

enum class BasisVerdict { kUnimodular, kRankDeficient, kNonIntegralInverse };

const char* verdict_name(BasisVerdict v) noexcept;

struct BasisCheck {
  BasisVerdict verdict = BasisVerdict::kRankDeficient;
  BigInt determinant = 0;
};

/// Determinant test on the square coordinate matrix of `images`; throws
/// kInvalidArgument unless |images| equals the free rank.
BasisCheck verify_basis(std::span<const dps::PointIndex> images,
                        const LatticePresentation& lat);

/// Integer rank of the coordinate matrix of `images`.
std::size_t coordinate_rank(std::span<const dps::PointIndex> images,
                            const LatticePresentation& lat);

struct Expression {
  std::vector<BigInt> coefficients;
  bool residual_zero = false;
};

/// Unique integer c with coords(target) = sum_i c_i coords(basis_i). Throws
/// kBasisNotVerified unless the basis is unimodular.
Expression express_point(dps::PointIndex target,
                         std::span<const dps::PointIndex> basis,
                         const LatticePresentation& lat);

/// express_point on mu-images of diagrams.
Expression express(const diagram::CrossinglessDiagram& d,
                   std::span<const diagram::CrossinglessDiagram> basis,
                   const dps::DualPolarSpace& space,
                   const LatticePresentation& lat);

}  // namespace sptri::lattice

#endif  // SPTRI_LATTICE_HPP
