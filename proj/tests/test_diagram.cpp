#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "sptri/diagram.hpp"
#include "sptri/error.hpp"

using namespace sptri;
using namespace sptri::diagram;

namespace {

ErrorCode parse_error(std::string_view text, std::size_t g) {
  try {
    parse(text, g);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

oracle::Blocks to_blocks(const CrossinglessDiagram& d) {
  oracle::Blocks out;
  for (Mask b : d.blocks()) {
    std::vector<int> block;
    for (std::size_t i = 1; i <= d.genus(); ++i) {
      if (b & puncture_bit(i)) block.push_back(static_cast<int>(i));
    }
    out.push_back(block);
  }
  return out;
}

Mask mask(std::initializer_list<int> ps) {
  Mask m = 0;
  for (int p : ps) m |= puncture_bit(static_cast<std::size_t>(p));
  return m;
}

}  // namespace

TEST_SUITE("diagram") {

TEST_CASE("parse examples") {
  const auto d = parse("(145)(23)", 5);
  CHECK(d.blocks() == std::vector<Mask>{mask({1, 4, 5}), mask({2, 3})});
  CHECK(parse_error("(123)(13)", 3) == ErrorCode::kMinimalityViolation);
  CHECK(parse_error("(13)(24)", 4) == ErrorCode::kNoncrossingViolation);
  CHECK(parse("", 4).empty());
  CHECK(parse("", 0).empty());
  CHECK(parse_error("(16)", 5) == ErrorCode::kPunctureOutOfRange);
  CHECK(parse_error("(0)", 5) == ErrorCode::kPunctureOutOfRange);
  CHECK(parse_error("(12", 5) == ErrorCode::kSyntax);
  CHECK(parse_error("()", 5) == ErrorCode::kSyntax);
  CHECK(parse_error("(1,)", 5) == ErrorCode::kSyntax);
  CHECK(parse_error("12", 5) == ErrorCode::kSyntax);
  CHECK(parse_error("(a)", 5) == ErrorCode::kSyntax);
  CHECK(parse_error("(11)", 5) == ErrorCode::kMinimalityViolation);
}

TEST_CASE("parse grammar variants") {
  CHECK(parse("(1,4,5)(2,3)", 5) == parse("(145)(23)", 5));
  CHECK(parse(" (23) (145) ", 5) == parse("(145)(23)", 5));
  const auto d = parse("(1,10)(2,9)", 10);
  CHECK(d.blocks() == std::vector<Mask>{mask({1, 10}), mask({2, 9})});
  CHECK(print(d) == "(1,10)(2,9)");
  // above genus 9 a digit run is one decimal puncture
  CHECK(parse_error("(110)", 10) == ErrorCode::kPunctureOutOfRange);
  CHECK(print(parse("(145)(23)", 5)) == "(145)(23)");
  CHECK(print(parse("", 3)).empty());
}

TEST_CASE("parse print round trip") {
  for (std::size_t g = 0; g <= 7; ++g) {
    for (const auto& d : enumerate_almost_special(g)) {
      CHECK(parse(print(d), g) == d);
    }
  }
  for (const auto& d : enumerate_almost_special(11)) {
    REQUIRE(parse(print(d), 11) == d);
  }
}

TEST_CASE("enumeration examples") {
  CHECK(enumerate_almost_special(0).size() == 1);
  std::vector<std::string> g2;
  for (const auto& d : enumerate_almost_special(2)) g2.push_back(print(d));
  CHECK(g2 == std::vector<std::string>{"", "(1)", "(2)", "(12)", "(1)(2)"});
  CHECK(enumerate_almost_special(7).size() == 2950);
  CHECK(enumerate_special(6).size() == 715);
}

TEST_CASE("enumeration matches brute force") {
  for (int g = 0; g <= 8; ++g) {
    std::set<oracle::Blocks> brute;
    for (auto bs : oracle::almost_special(g)) {
      std::sort(bs.begin(), bs.end());
      brute.insert(bs);
    }
    std::set<oracle::Blocks> mine;
    for (const auto& d : enumerate_almost_special(static_cast<std::size_t>(g))) {
      auto bs = to_blocks(d);
      std::sort(bs.begin(), bs.end());
      mine.insert(bs);
    }
    CHECK(mine == brute);
    CHECK(mpz_class(static_cast<unsigned long>(mine.size())) ==
          count_N(static_cast<std::size_t>(g)));
  }
}

TEST_CASE("canonical order is strict") {
  for (std::size_t g = 0; g <= 7; ++g) {
    const auto all = enumerate_almost_special(g);
    for (std::size_t i = 1; i < all.size(); ++i) {
      CHECK(canonical_less(all[i - 1], all[i]));
      CHECK_FALSE(canonical_less(all[i], all[i - 1]));
    }
  }
}

TEST_CASE("blocks are stored by minimum") {
  const auto d = CrossinglessDiagram::make(6, {mask({5, 6}), mask({1, 4}),
                                               mask({2, 3})});
  CHECK(d.blocks() ==
        std::vector<Mask>{mask({1, 4}), mask({2, 3}), mask({5, 6})});
  CHECK(d.circled() == mask({1, 2, 3, 4, 5, 6}));
}

TEST_CASE("reduction examples") {
  const auto r = reduce(parse("(1)(23)", 3));
  CHECK(print(r.core) == "(12)");
  CHECK(r.core.genus() == 2);
  CHECK(r.deleted == mask({1}));
  CHECK(r.filled == mask({1}));
  CHECK(r.relabeling == std::vector<std::size_t>{2, 3});

  const auto e = reduce(parse("", 4));
  CHECK(e.core.genus() == 0);
  CHECK(e.filled == mask({1, 2, 3, 4}));

  const auto f = reduce(parse("(1234)", 4));
  CHECK(f.core == parse("(1234)", 4));
  CHECK(is_irreducible(f.core));
}

TEST_CASE("reduction invariants and reconstruction") {
  for (std::size_t g = 0; g <= 7; ++g) {
    for (const auto& d : enumerate_almost_special(g)) {
      const auto r = reduce(d);
      CHECK(is_irreducible(r.core));
      CHECK(unreduce(r) == d);
      for (auto b : r.core.blocks()) CHECK(std::popcount(b) >= 2);
      CHECK(std::popcount(r.core.circled()) ==
            static_cast<int>(r.core.genus()));
      CHECK(std::is_sorted(r.relabeling.begin(), r.relabeling.end()));
    }
  }
}

TEST_CASE("cyclic consecutiveness") {
  CHECK(cyclically_consecutive(mask({4, 5, 1}), 5));
  CHECK_FALSE(cyclically_consecutive(mask({1, 4}), 6));
  CHECK(cyclically_consecutive(mask({2, 3}), 6));
  CHECK(cyclically_consecutive(mask({1, 2, 3}), 3));
  CHECK_FALSE(cyclically_consecutive(mask({1, 3}), 4));
  CHECK(cyclically_consecutive(mask({1, 3}), 3));
}

TEST_CASE("is_special examples") {
  CHECK_FALSE(is_special(parse("(145)(23)", 5)));
  CHECK_FALSE(is_special(parse("(14)(23)(56)", 6)));
  CHECK(is_special(parse("(1234)", 4)));
  for (std::size_t g = 0; g <= 6; ++g) CHECK(is_special(parse("", g)));
}

TEST_CASE("is_special matches the definition") {
  for (std::size_t g = 0; g <= 8; ++g) {
    for (const auto& d : enumerate_almost_special(g)) {
      CHECK_MESSAGE(is_special(d) == oracle::special(to_blocks(d)), print(d));
    }
  }
}

TEST_CASE("genus 5 and 6 exclusions") {
  std::vector<std::string> out5;
  for (const auto& d : enumerate_almost_special(5)) {
    if (!is_special(d)) out5.push_back(print(d));
  }
  CHECK(out5 == std::vector<std::string>{"(145)(23)"});
  CHECK(enumerate_special(5).size() == 187);
  for (std::size_t g = 0; g <= 4; ++g) {
    CHECK(enumerate_special(g) == enumerate_almost_special(g));
  }
}

TEST_CASE("special depends only on the core") {
  for (std::size_t g = 0; g <= 7; ++g) {
    for (const auto& d : enumerate_almost_special(g)) {
      CHECK(is_special(d) == is_special(reduce(d).core));
    }
  }
}

TEST_CASE("counts") {
  const long N[] = {1, 2, 5, 15, 51, 188, 731, 2950};
  const long n[] = {1, 2, 5, 15, 51, 187, 715, 2795};
  for (std::size_t g = 0; g < 8; ++g) {
    CHECK(count_N(g) == N[g]);
    CHECK(count_n(g) == n[g]);
    CHECK(count_n_by_sum(g) == count_n(g));
  }
  CHECK(count_m(1) == 0);
  CHECK(count_m(2) == 1);
  CHECK_THROWS_AS(count_m(0), Error);
  for (std::size_t g = 3; g <= 80; ++g) {
    CHECK(count_m(g) == count_m(g - 1) + 2 * count_m(g - 2));
  }
  for (std::size_t g = 0; g <= 80; ++g) {
    CHECK(count_n_by_sum(g) == count_n(g));
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, g);
    if (g >= 1) CHECK(3 * count_n(g) == (p + 1) * (p / 2 + 1));
  }
  const long cat[] = {1, 1, 2, 5, 14, 42, 132, 429};
  for (std::size_t k = 0; k < 8; ++k) CHECK(catalan(k) == cat[k]);
}

TEST_CASE("enumerated counts match closed forms") {
  for (std::size_t g = 0; g <= 8; ++g) {
    const auto s = enumerate_almost_special(g);
    const auto m = enumerate_special(g);
    CHECK(mpz_class(static_cast<unsigned long>(s.size())) == count_N(g));
    CHECK(mpz_class(static_cast<unsigned long>(m.size())) == count_n(g));
    const auto irr = enumerate_irreducible_special(g);
    const mpz_class expect = g == 0 ? mpz_class(1) : count_m(g);
    CHECK(mpz_class(static_cast<unsigned long>(irr.size())) == expect);
  }
}

TEST_CASE("the three constructions biject onto irreducible specials") {
  for (std::size_t g = 3; g <= 8; ++g) {
    std::vector<CrossinglessDiagram> built;
    for (const auto& d : enumerate_irreducible_special(g - 1)) {
      built.push_back(grow_insert(d));
    }
    for (const auto& d : enumerate_irreducible_special(g - 2)) {
      built.push_back(grow_prepend(d));
      built.push_back(grow_wrap(d));
    }
    for (const auto& d : built) {
      CHECK(is_irreducible(d));
      CHECK(is_special(d));
    }
    std::sort(built.begin(), built.end(), canonical_less);
    CHECK(std::adjacent_find(built.begin(), built.end()) == built.end());
    CHECK(built == enumerate_irreducible_special(g));
  }
}

}  // TEST_SUITE
