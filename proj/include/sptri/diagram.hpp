#ifndef SPTRI_DIAGRAM_HPP
#define SPTRI_DIAGRAM_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

// Minimal crossingless link diagrams in the thickened g-punctured disk,
// modelled as noncrossing partitions of a subset of the punctures 1..g.

namespace sptri::diagram {

using Mask = std::uint64_t;

inline constexpr std::size_t kMaxGenus = 63;

/// Puncture i (1-based) is bit i-1 of a Mask.
constexpr Mask puncture_bit(std::size_t i) { return Mask{1} << (i - 1); }

class CrossinglessDiagram {
 public:
  CrossinglessDiagram() = default;

  /// Validates the blocks (nonempty, pairwise disjoint, pairwise
  /// noncrossing, within 1..genus) and sorts them by minimum puncture.
  static CrossinglessDiagram make(std::size_t genus, std::vector<Mask> blocks);

  std::size_t genus() const noexcept { return genus_; }
  const std::vector<Mask>& blocks() const noexcept { return blocks_; }
  Mask circled() const noexcept;
  bool empty() const noexcept { return blocks_.empty(); }

  friend bool operator==(const CrossinglessDiagram&,
                         const CrossinglessDiagram&) = default;

 private:
  std::size_t genus_ = 0;
  std::vector<Mask> blocks_;
};

/// Canonical enumeration order: circled set, then block count, then block
/// masks lexicographically.
bool canonical_less(const CrossinglessDiagram& lhs,
                    const CrossinglessDiagram& rhs);

/// Symbol grammar: diagram := block*; block := '(' p (','? p)* ')'.
/// Juxtaposed digits are read one puncture per digit and only for g <= 9.
CrossinglessDiagram parse(std::string_view text, std::size_t genus);

/// Canonical symbol: juxtaposed for g <= 9, comma separated otherwise. The
/// empty diagram prints as "".
std::string print(const CrossinglessDiagram& d);

/// True when two disjoint blocks interleave as a < b < c < d with a, c in
/// one block and b, d in the other.
bool blocks_cross(Mask x, Mask y);

/// Every almost-special diagram (noncrossing partition of a subset of the
/// punctures) in canonical order.
std::vector<CrossinglessDiagram> enumerate_almost_special(std::size_t genus);

struct ReductionRecord {
  CrossinglessDiagram original;
  Mask filled = 0;   // uncircled punctures after deleting singletons
  Mask deleted = 0;  // punctures of deleted singleton blocks
  CrossinglessDiagram core;
  std::vector<std::size_t> relabeling;  // core puncture k+1 <- original
                                        // puncture relabeling[k]
};

ReductionRecord reduce(const CrossinglessDiagram& d);

/// Rebuilds the original diagram from a reduction record.
CrossinglessDiagram unreduce(const ReductionRecord& rec);

bool is_irreducible(const CrossinglessDiagram& d);

/// Cyclic interval test in the order 1, 2, ..., g, 1.
bool cyclically_consecutive(Mask block, std::size_t genus);

bool is_special(const CrossinglessDiagram& d);

std::vector<CrossinglessDiagram> enumerate_special(std::size_t genus);

std::vector<CrossinglessDiagram> enumerate_irreducible_special(
    std::size_t genus);

/// The three constructions that build irreducible specials of genus g from
/// those of genus g-1 (insert after the leftmost puncture of the leftmost
/// block) and g-2 (prepend a {1,2} block; wrap with a {1,g} block).
CrossinglessDiagram grow_insert(const CrossinglessDiagram& d);
CrossinglessDiagram grow_prepend(const CrossinglessDiagram& d);
CrossinglessDiagram grow_wrap(const CrossinglessDiagram& d);

mpz_class catalan(std::size_t k);
mpz_class binomial(std::size_t n, std::size_t k);
/// (2^{g-1} + (-1)^g) / 3 for g >= 1; g = 0 is rejected.
mpz_class count_m(std::size_t genus);
/// (2^g + 1)(2^{g-1} + 1) / 3.
mpz_class count_n(std::size_t genus);
/// sum_k C(g,k) C_k.
mpz_class count_N(std::size_t genus);
/// sum_k sum_l C(g,k) C(g-k,l) m(g-k-l) with m(0) = 1.
mpz_class count_n_by_sum(std::size_t genus);

}  // namespace sptri::diagram

#endif  // SPTRI_DIAGRAM_HPP
