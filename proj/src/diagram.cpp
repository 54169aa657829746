#include "sptri/diagram.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "sptri/error.hpp"

namespace sptri::diagram {

namespace {

Mask full_mask(std::size_t genus) {
  return genus == 64 ? ~Mask{0} : (Mask{1} << genus) - 1;
}

std::size_t lowest_puncture(Mask m) {
  return static_cast<std::size_t>(std::countr_zero(m)) + 1;
}

// Keeps only the bits of `m` selected by `support`, packed to the bottom in
// order (a software pext).
Mask compress(Mask m, Mask support) {
  Mask out = 0;
  std::size_t k = 0;
  for (Mask s = support; s != 0; s &= s - 1) {
    const Mask bit = s & (~s + 1);
    if (m & bit) out |= Mask{1} << k;
    ++k;
  }
  return out;
}

// Inverse of compress: spreads the low bits of `m` onto the bits of
// `support` (a software pdep).
Mask expand(Mask m, Mask support) {
  Mask out = 0;
  std::size_t k = 0;
  for (Mask s = support; s != 0; s &= s - 1) {
    const Mask bit = s & (~s + 1);
    if (m & (Mask{1} << k)) out |= bit;
    ++k;
  }
  return out;
}

// Shift every puncture >= `from` up by `by`.
Mask shift_from(Mask m, std::size_t from, std::size_t by) {
  const Mask low = (Mask{1} << (from - 1)) - 1;
  return (m & low) | ((m & ~low) << by);
}

void gen_partitions(Mask remaining, std::vector<Mask>& blocks,
                    std::size_t genus,
                    std::vector<CrossinglessDiagram>& out) {
  if (remaining == 0) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        if (blocks_cross(blocks[i], blocks[j])) return;
      }
    }
    out.push_back(CrossinglessDiagram::make(genus, blocks));
    return;
  }
  const Mask bit = remaining & (~remaining + 1);
  const Mask rest = remaining & ~bit;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i] |= bit;
    gen_partitions(rest, blocks, genus, out);
    blocks[i] &= ~bit;
  }
  blocks.push_back(bit);
  gen_partitions(rest, blocks, genus, out);
  blocks.pop_back();
}

bool irreducible_is_special(const CrossinglessDiagram& core);

}  // namespace

bool blocks_cross(Mask x, Mask y) {
  if (x == 0 || y == 0) return false;
  // Noncrossing iff every element of y falls into the same gap of x, where
  // the gaps before the first and after the last element of x coincide.
  const int xs = std::popcount(x);
  int gap = -1;
  for (Mask s = y; s != 0; s &= s - 1) {
    const Mask bit = s & (~s + 1);
    int g = std::popcount(x & (bit - 1));
    if (g == xs) g = 0;
    if (gap < 0) {
      gap = g;
    } else if (gap != g) {
      return true;
    }
  }
  return false;
}

CrossinglessDiagram CrossinglessDiagram::make(std::size_t genus,
                                              std::vector<Mask> blocks) {
  if (genus > kMaxGenus) {
    throw Error(ErrorCode::kInvalidArgument,
                "genus " + std::to_string(genus) + " is too large");
  }
  const Mask all = full_mask(genus);
  Mask seen = 0;
  for (auto b : blocks) {
    if (b == 0) {
      throw Error(ErrorCode::kSyntax, "diagram blocks must be nonempty");
    }
    if (b & ~all) {
      throw Error(ErrorCode::kPunctureOutOfRange,
                  "puncture outside 1.." + std::to_string(genus));
    }
    if (b & seen) {
      throw Error(ErrorCode::kMinimalityViolation,
                  "puncture " + std::to_string(lowest_puncture(b & seen)) +
                      " is circled by more than one component");
    }
    seen |= b;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (blocks_cross(blocks[i], blocks[j])) {
        throw Error(ErrorCode::kNoncrossingViolation,
                    "diagram components cross");
      }
    }
  }
  std::sort(blocks.begin(), blocks.end(), [](Mask a, Mask b) {
    return std::countr_zero(a) < std::countr_zero(b);
  });
  CrossinglessDiagram d;
  d.genus_ = genus;
  d.blocks_ = std::move(blocks);
  return d;
}

Mask CrossinglessDiagram::circled() const noexcept {
  Mask m = 0;
  for (auto b : blocks_) m |= b;
  return m;
}

bool canonical_less(const CrossinglessDiagram& lhs,
                    const CrossinglessDiagram& rhs) {
  if (lhs.genus() != rhs.genus()) return lhs.genus() < rhs.genus();
  if (lhs.circled() != rhs.circled()) return lhs.circled() < rhs.circled();
  if (lhs.blocks().size() != rhs.blocks().size()) {
    return lhs.blocks().size() < rhs.blocks().size();
  }
  return lhs.blocks() < rhs.blocks();
}

CrossinglessDiagram parse(std::string_view text, std::size_t genus) {
  if (genus > kMaxGenus) {
    throw Error(ErrorCode::kInvalidArgument,
                "genus " + std::to_string(genus) + " is too large");
  }
  const bool juxtaposed = genus <= 9;
  std::vector<Mask> blocks;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kSyntax, "cannot parse diagram \"" +
                                        std::string(text) + "\": " + why);
  };
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') fail("expected '('");
    ++i;
    Mask block = 0;
    bool expect_puncture = true;
    bool any = false;
    while (true) {
      skip_ws();
      if (i >= text.size()) fail("unterminated block");
      const char c = text[i];
      if (c == ')') {
        if (!any) fail("empty block");
        if (expect_puncture) fail("trailing ','");
        ++i;
        break;
      }
      if (c == ',') {
        if (!any || expect_puncture) fail("misplaced ','");
        expect_puncture = true;
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        fail(std::string("unexpected character '") + c + "'");
      }
      std::size_t value = 0;
      if (juxtaposed) {
        value = static_cast<std::size_t>(c - '0');
        ++i;
      } else {
        if (!expect_puncture) fail("punctures must be separated by ','");
        while (i < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i]))) {
          value = value * 10 + static_cast<std::size_t>(text[i] - '0');
          if (value > 1000) fail("puncture index too large");
          ++i;
        }
      }
      if (value < 1 || value > genus) {
        throw Error(ErrorCode::kPunctureOutOfRange,
                    "puncture " + std::to_string(value) + " outside 1.." +
                        std::to_string(genus));
      }
      const Mask bit = puncture_bit(value);
      if (block & bit) {
        throw Error(ErrorCode::kMinimalityViolation,
                    "puncture " + std::to_string(value) +
                        " repeated within a component");
      }
      block |= bit;
      any = true;
      expect_puncture = false;
    }
    blocks.push_back(block);
    skip_ws();
  }
  return CrossinglessDiagram::make(genus, std::move(blocks));
}

std::string print(const CrossinglessDiagram& d) {
  const bool juxtaposed = d.genus() <= 9;
  std::string out;
  for (auto b : d.blocks()) {
    out += '(';
    bool first = true;
    for (Mask s = b; s != 0; s &= s - 1) {
      if (!first && !juxtaposed) out += ',';
      out += std::to_string(lowest_puncture(s));
      first = false;
    }
    out += ')';
  }
  return out;
}

std::vector<CrossinglessDiagram> enumerate_almost_special(std::size_t genus) {
  if (genus > 16) {
    throw Error(ErrorCode::kResourceLimit,
                "almost-special enumeration is capped at genus 16");
  }
  std::vector<CrossinglessDiagram> out;
  const Mask all = full_mask(genus);
  for (Mask t = 0;; ++t) {
    std::vector<Mask> blocks;
    gen_partitions(t, blocks, genus, out);
    if (t == all) break;
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

ReductionRecord reduce(const CrossinglessDiagram& d) {
  ReductionRecord rec;
  rec.original = d;
  std::vector<Mask> kept;
  for (auto b : d.blocks()) {
    if (std::popcount(b) == 1) {
      rec.deleted |= b;
    } else {
      kept.push_back(b);
    }
  }
  Mask support = 0;
  for (auto b : kept) support |= b;
  rec.filled = full_mask(d.genus()) & ~support;
  for (Mask s = support; s != 0; s &= s - 1) {
    rec.relabeling.push_back(lowest_puncture(s));
  }
  std::vector<Mask> core_blocks;
  core_blocks.reserve(kept.size());
  for (auto b : kept) core_blocks.push_back(compress(b, support));
  rec.core = CrossinglessDiagram::make(
      static_cast<std::size_t>(std::popcount(support)), std::move(core_blocks));
  return rec;
}

CrossinglessDiagram unreduce(const ReductionRecord& rec) {
  Mask support = 0;
  for (auto p : rec.relabeling) support |= puncture_bit(p);
  std::vector<Mask> blocks;
  for (auto b : rec.core.blocks()) blocks.push_back(expand(b, support));
  for (Mask s = rec.deleted; s != 0; s &= s - 1) {
    blocks.push_back(s & (~s + 1));
  }
  return CrossinglessDiagram::make(rec.original.genus(), std::move(blocks));
}

bool is_irreducible(const CrossinglessDiagram& d) {
  if (d.circled() != full_mask(d.genus())) return false;
  return std::none_of(d.blocks().begin(), d.blocks().end(),
                      [](Mask b) { return std::popcount(b) == 1; });
}

bool cyclically_consecutive(Mask block, std::size_t genus) {
  const Mask all = full_mask(genus);
  if (block == 0 || (block & ~all)) return false;
  if (block == all) return true;
  // Count run starts: members whose cyclic predecessor is absent.
  const Mask pred = ((block << 1) | (block >> (genus - 1))) & all;
  return std::popcount(block & ~pred) == 1;
}

namespace {

bool irreducible_is_special(const CrossinglessDiagram& core) {
  const std::size_t h = core.genus();
  if (h == 0) return true;
  const Mask left = core.blocks().front();
  const Mask all = full_mask(h);
  if (!cyclically_consecutive(left, h)) return false;
  const Mask corner = puncture_bit(1) | puncture_bit(h) | puncture_bit(h - 1);
  if ((left & corner) == corner && left != all) return false;
  const Mask rest_support = all & ~left;
  std::vector<Mask> rest;
  for (std::size_t i = 1; i < core.blocks().size(); ++i) {
    rest.push_back(compress(core.blocks()[i], rest_support));
  }
  const auto remainder = CrossinglessDiagram::make(
      static_cast<std::size_t>(std::popcount(rest_support)), std::move(rest));
  return is_special(remainder);
}

}  // namespace

bool is_special(const CrossinglessDiagram& d) {
  return irreducible_is_special(reduce(d).core);
}

std::vector<CrossinglessDiagram> enumerate_special(std::size_t genus) {
  auto all = enumerate_almost_special(genus);
  std::vector<CrossinglessDiagram> out;
  for (auto& d : all) {
    if (is_special(d)) out.push_back(std::move(d));
  }
  return out;
}

std::vector<CrossinglessDiagram> enumerate_irreducible_special(
    std::size_t genus) {
  auto all = enumerate_special(genus);
  std::vector<CrossinglessDiagram> out;
  for (auto& d : all) {
    if (is_irreducible(d)) out.push_back(std::move(d));
  }
  return out;
}

CrossinglessDiagram grow_insert(const CrossinglessDiagram& d) {
  if (d.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "grow_insert needs a leftmost component");
  }
  std::vector<Mask> blocks;
  for (auto b : d.blocks()) blocks.push_back(shift_from(b, 2, 1));
  blocks.front() |= puncture_bit(2);
  return CrossinglessDiagram::make(d.genus() + 1, std::move(blocks));
}

CrossinglessDiagram grow_prepend(const CrossinglessDiagram& d) {
  std::vector<Mask> blocks{puncture_bit(1) | puncture_bit(2)};
  for (auto b : d.blocks()) blocks.push_back(b << 2);
  return CrossinglessDiagram::make(d.genus() + 2, std::move(blocks));
}

CrossinglessDiagram grow_wrap(const CrossinglessDiagram& d) {
  const std::size_t g = d.genus() + 2;
  std::vector<Mask> blocks{puncture_bit(1) | puncture_bit(g)};
  for (auto b : d.blocks()) blocks.push_back(b << 1);
  return CrossinglessDiagram::make(g, std::move(blocks));
}

mpz_class binomial(std::size_t n, std::size_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class catalan(std::size_t k) {
  return binomial(2 * k, k) / static_cast<unsigned long>(k + 1);
}

mpz_class count_m(std::size_t genus) {
  if (genus == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "m(g) is defined by the closed form only for g >= 1; use the "
                "m(0) = 1 convention explicitly");
  }
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, genus - 1);
  p += (genus % 2 == 0) ? 1 : -1;
  return p / 3;
}

mpz_class count_n(std::size_t genus) {
  // (2^g + 1)(2^{g-1} + 1) / 3 written as (2^g + 1)(2^g + 2) / 6 so that
  // g = 0 stays integral.
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, genus);
  return (p + 1) * (p + 2) / 6;
}

mpz_class count_N(std::size_t genus) {
  mpz_class total = 0;
  for (std::size_t k = 0; k <= genus; ++k) {
    total += binomial(genus, k) * catalan(k);
  }
  return total;
}

mpz_class count_n_by_sum(std::size_t genus) {
  mpz_class total = 0;
  for (std::size_t k = 0; k <= genus; ++k) {
    for (std::size_t l = 0; l + k <= genus; ++l) {
      const std::size_t h = genus - k - l;
      const mpz_class m = h == 0 ? mpz_class(1) : count_m(h);
      total += binomial(genus, k) * binomial(genus - k, l) * m;
    }
  }
  return total;
}

}  // namespace sptri::diagram
