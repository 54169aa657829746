#ifndef SPTRI_DPS_HPP
#define SPTRI_DPS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sptri/gf2.hpp"

// The binary symplectic dual polar space DSp(2g,2): points are Lagrangian
// subspaces of F2^{2g}, lines are the triples of Lagrangians through a common
// (g-1)-dimensional isotropic subspace.

namespace sptri::dps {

inline constexpr std::size_t kMaxGenus = 8;

using PointIndex = std::uint32_t;

/// A g-dimensional isotropic subspace of F2^{2g}, held by its canonical
/// (reduced row echelon) g x 2g basis.
class Lagrangian {
 public:
  /// Canonicalizes `span` and checks isotropy and dimension; throws
  /// ErrorCode::kInvariantViolation otherwise.
  static Lagrangian from_span(const gf2::BitMatrix& span, std::size_t genus);

  std::size_t genus() const noexcept { return genus_; }
  const gf2::BitMatrix& basis() const noexcept { return basis_; }
  bool contains(const gf2::BitVec& v) const;
  std::vector<std::string> to_strings() const { return basis_.to_strings(); }

  friend bool operator==(const Lagrangian&, const Lagrangian&) = default;
  friend bool operator<(const Lagrangian& lhs, const Lagrangian& rhs);

 private:
  Lagrangian(std::size_t genus, gf2::BitMatrix basis)
      : genus_(genus), basis_(std::move(basis)) {}

  std::size_t genus_ = 0;
  gf2::BitMatrix basis_;
};

struct IsotropicLine {
  gf2::BitMatrix axis;                // canonical (g-1) x 2g
  std::array<PointIndex, 3> points;   // sorted ascending
};

struct Limits {
  std::uint64_t max_points = 100000;
};

/// prod_{i=1}^{g} (2^i + 1).
std::uint64_t lagrangian_count(std::size_t genus);

/// (#points) * (2^g - 1) / 3; zero for g = 0.
std::uint64_t line_count(std::size_t genus);

/// Unique third Lagrangian through p ∩ q. Throws kNotCollinear unless
/// dim(p ∩ q) = g - 1.
Lagrangian third_point(const Lagrangian& p, const Lagrangian& q);

/// Points, lines and point-line incidence for one genus. Points are kept in
/// the canonical order (lexicographic on the serialized basis); lines are
/// sorted by their point triples.
class DualPolarSpace {
 public:
  static DualPolarSpace build(std::size_t genus, const Limits& limits = {},
                              unsigned threads = 1);

  std::size_t genus() const noexcept { return genus_; }
  std::size_t point_count() const noexcept { return keys_.size(); }
  std::size_t line_count() const noexcept { return lines_.size(); }

  Lagrangian point(PointIndex i) const;
  std::optional<PointIndex> index_of(const gf2::BitMatrix& span) const;
  PointIndex index_of(const Lagrangian& l) const;

  const std::vector<std::array<PointIndex, 3>>& lines() const noexcept {
    return lines_;
  }
  IsotropicLine line(std::size_t i) const;
  std::span<const std::uint32_t> lines_through(PointIndex p) const;

  /// Index version of the free function; throws kNotCollinear.
  PointIndex third_point(PointIndex p, PointIndex q) const;

  /// Smallest superset of `seed` containing the third point of every line
  /// that meets it twice. Returned sorted.
  std::vector<PointIndex> closure(std::span<const PointIndex> seed) const;

  /// Packed row r of point i (bit k = coordinate k).
  std::uint32_t packed_row(PointIndex i, std::size_t r) const {
    return rows_[static_cast<std::size_t>(i) * genus_ + r];
  }

 private:
  struct KeyHash {
    std::size_t operator()(unsigned __int128 k) const noexcept {
      const auto lo = static_cast<std::uint64_t>(k);
      const auto hi = static_cast<std::uint64_t>(k >> 64);
      return static_cast<std::size_t>(lo * 0x9e3779b97f4a7c15ULL ^
                                      (hi + 0x632be59bd9b4e019ULL));
    }
  };

  std::optional<PointIndex> lookup_packed(
      std::span<const std::uint32_t> rows) const;

  std::size_t genus_ = 0;
  std::vector<unsigned __int128> keys_;
  std::vector<std::uint32_t> rows_;
  std::unordered_map<unsigned __int128, PointIndex, KeyHash> index_;
  std::vector<std::array<PointIndex, 3>> lines_;
  std::vector<std::uint32_t> incidence_offsets_;
  std::vector<std::uint32_t> incidence_;
};

/// Canonically ordered Lagrangians of F2^{2g}; throws kResourceLimit when
/// the count would exceed limits.max_points.
std::vector<Lagrangian> enumerate_lagrangians(std::size_t genus,
                                              const Limits& limits = {});

/// All lines of DSp(2g,2), g >= 1, with indices into the canonical order.
std::vector<IsotropicLine> enumerate_lines(std::size_t genus,
                                           const Limits& limits = {});

std::vector<PointIndex> geometric_closure(const DualPolarSpace& space,
                                          std::span<const PointIndex> seed);

}  // namespace sptri::dps

#endif  // SPTRI_DPS_HPP
