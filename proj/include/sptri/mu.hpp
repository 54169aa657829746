#ifndef SPTRI_MU_HPP
#define SPTRI_MU_HPP

#include <cstddef>

#include <gmpxx.h>

#include "sptri/diagram.hpp"
#include "sptri/dps.hpp"
#include "sptri/gf2.hpp"

namespace sptri::mu {

/// F2 first-homology presentation of a surgered handlebody.
///
/// Surface basis a_1..a_g, b_1..b_g; target generators are the puncture
/// loops gamma_1..gamma_g followed by one meridian per component. Row i of
/// `boundary` is the image of surface basis vector i; row j of `relations`
/// is the framed longitude of component j, sum of gamma_i over its block.
struct H1Presentation {
  std::size_t genus = 0;
  std::size_t components = 0;
  gf2::BitMatrix boundary;   // 2g x (g + components)
  gf2::BitMatrix relations;  // components x (g + components)
};

H1Presentation presentation(const diagram::CrossinglessDiagram& d);

struct MuClass {
  std::size_t h2_rank = 0;
  mpz_class weight = 1;  // (-2)^h2_rank
  dps::Lagrangian point;
};

/// Kernel of H1(surface) -> coker(relations). Throws kInvariantViolation if
/// the kernel is not Lagrangian.
MuClass mu(const diagram::CrossinglessDiagram& d);

/// Span of b_i for uncircled i, sum of a_i over each block, and b_i + b_j
/// for neighbours i < j within a block.
dps::Lagrangian mu_closed_form(const diagram::CrossinglessDiagram& d);

/// (-2)^a + (-2)^b + (-2)^c == 0 in exact integers.
bool triangle_weight_identity(unsigned long a, unsigned long b,
                              unsigned long c);

}  // namespace sptri::mu

#endif  // SPTRI_MU_HPP
