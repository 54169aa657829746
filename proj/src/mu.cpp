#include "sptri/mu.hpp"

#include <bit>

#include "sptri/error.hpp"

namespace sptri::mu {

using diagram::Mask;

H1Presentation presentation(const diagram::CrossinglessDiagram& d) {
  const std::size_t g = d.genus();
  const std::size_t k = d.blocks().size();
  H1Presentation p;
  p.genus = g;
  p.components = k;
  p.boundary = gf2::BitMatrix(2 * g, g + k);
  p.relations = gf2::BitMatrix(k, g + k);
  for (std::size_t i = 0; i < g; ++i) p.boundary.set(i, i);
  for (std::size_t j = 0; j < k; ++j) {
    const Mask block = d.blocks()[j];
    for (std::size_t i = 0; i < g; ++i) {
      if (block & diagram::puncture_bit(i + 1)) {
        p.boundary.set(g + i, g + j);
        p.relations.set(j, i);
      }
    }
  }
  return p;
}

MuClass mu(const diagram::CrossinglessDiagram& d) {
  const auto pres = presentation(d);
  const std::size_t g = pres.genus;
  const std::size_t rows = 2 * g + pres.components;
  // Left kernel of [boundary; relations], projected to the surface part.
  gf2::BitMatrix stacked_t(pres.boundary.cols(), rows);
  for (std::size_t r = 0; r < 2 * g; ++r) {
    for (std::size_t c = 0; c < pres.boundary.cols(); ++c) {
      if (pres.boundary.get(r, c)) stacked_t.set(c, r);
    }
  }
  for (std::size_t j = 0; j < pres.components; ++j) {
    for (std::size_t c = 0; c < pres.relations.cols(); ++c) {
      if (pres.relations.get(j, c)) stacked_t.set(c, 2 * g + j);
    }
  }
  const auto left = gf2::kernel(stacked_t);
  gf2::BitMatrix projected(2 * g);
  for (std::size_t r = 0; r < left.rows(); ++r) {
    gf2::BitVec v(2 * g);
    for (std::size_t c = 0; c < 2 * g; ++c) {
      if (left.get(r, c)) v.set(c);
    }
    projected.append_row(std::move(v));
  }
  MuClass out{0, 1, dps::Lagrangian::from_span(projected, g)};
  return out;
}

dps::Lagrangian mu_closed_form(const diagram::CrossinglessDiagram& d) {
  const std::size_t g = d.genus();
  gf2::BitMatrix span(2 * g);
  const Mask circled = d.circled();
  for (std::size_t i = 1; i <= g; ++i) {
    if (!(circled & diagram::puncture_bit(i))) {
      span.append_row(gf2::BitVec::unit(2 * g, g + i - 1));
    }
  }
  for (const Mask block : d.blocks()) {
    gf2::BitVec sum_a(2 * g);
    std::size_t prev = 0;
    for (Mask s = block; s != 0; s &= s - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(s)) + 1;
      sum_a.set(i - 1);
      if (prev != 0) {
        gf2::BitVec link(2 * g);
        link.set(g + prev - 1);
        link.set(g + i - 1);
        span.append_row(std::move(link));
      }
      prev = i;
    }
    span.append_row(std::move(sum_a));
  }
  return dps::Lagrangian::from_span(span, g);
}

bool triangle_weight_identity(unsigned long a, unsigned long b,
                              unsigned long c) {
  auto power = [](unsigned long n) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
    return n % 2 == 0 ? r : mpz_class(-r);
  };
  return power(a) + power(b) + power(c) == 0;
}

}  // namespace sptri::mu
