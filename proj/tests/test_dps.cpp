#include <doctest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "sptri/dps.hpp"
#include "sptri/error.hpp"

using namespace sptri;
using dps::DualPolarSpace;
using dps::Lagrangian;
using dps::PointIndex;

namespace {

Lagrangian lag(std::initializer_list<std::string> rows, std::size_t g) {
  std::vector<std::string> v(rows);
  return Lagrangian::from_span(gf2::BitMatrix::from_strings(v), g);
}

}  // namespace

TEST_SUITE("dps") {

TEST_CASE("point and line counts") {
  const std::uint64_t points[] = {1, 3, 15, 135, 2295};
  const std::uint64_t lines[] = {0, 1, 15, 315, 11475};
  for (std::size_t g = 0; g <= 4; ++g) {
    CHECK(dps::lagrangian_count(g) == points[g]);
    CHECK(dps::line_count(g) == lines[g]);
    const auto s = DualPolarSpace::build(g);
    CHECK(s.point_count() == points[g]);
    CHECK(s.line_count() == lines[g]);
  }
  CHECK(dps::lagrangian_count(5) == 75735);
  CHECK(dps::line_count(5) == 782595);
}

TEST_CASE("genus 0 is the zero space") {
  const auto s = DualPolarSpace::build(0);
  REQUIRE(s.point_count() == 1);
  CHECK(s.point(0).basis().rows() == 0);
  CHECK(dps::enumerate_lagrangians(0).size() == 1);
  CHECK_THROWS_AS(dps::enumerate_lines(0), Error);
}

TEST_CASE("points match brute-force enumeration") {
  for (unsigned g = 1; g <= 3; ++g) {
    const auto brute = oracle::isotropic_subspaces(g, g);
    const auto s = DualPolarSpace::build(g);
    std::vector<oracle::Subspace> mine;
    for (PointIndex i = 0; i < s.point_count(); ++i) {
      mine.push_back(oracle::span_of(s.point(i).basis()));
    }
    std::sort(mine.begin(), mine.end());
    CHECK(mine == brute);
  }
}

TEST_CASE("lines match brute-force enumeration") {
  for (unsigned g = 1; g <= 3; ++g) {
    const auto s = DualPolarSpace::build(g);
    std::set<std::set<oracle::Subspace>> brute;
    for (const auto& l : oracle::lines(g)) {
      CHECK(l.size() == 3);
      brute.emplace(l.begin(), l.end());
    }
    std::set<std::set<oracle::Subspace>> mine;
    for (const auto& l : s.lines()) {
      std::set<oracle::Subspace> t;
      for (auto p : l) t.insert(oracle::span_of(s.point(p).basis()));
      mine.insert(t);
    }
    CHECK(mine == brute);
  }
}

TEST_CASE("canonical order is lexicographic on serialized bases") {
  for (std::size_t g = 1; g <= 4; ++g) {
    const auto pts = dps::enumerate_lagrangians(g);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      CHECK(pts[i - 1].to_strings() < pts[i].to_strings());
    }
  }
}

TEST_CASE("every point is a Lagrangian in rref") {
  for (std::size_t g = 1; g <= 4; ++g) {
    for (const auto& p : dps::enumerate_lagrangians(g)) {
      CHECK(p.basis().rows() == g);
      CHECK(gf2::is_isotropic(p.basis(), g));
      CHECK(gf2::rref(p.basis()).matrix == p.basis());
    }
  }
}

TEST_CASE("lagrangian invariants are enforced") {
  CHECK_THROWS_AS(lag({"1000", "0010"}, 2), Error);  // a1, b1 pair to 1
  CHECK_THROWS_AS(lag({"1000"}, 2), Error);          // dimension 1
  CHECK_NOTHROW(lag({"1000", "0100"}, 2));
}

TEST_CASE("third point examples") {
  CHECK(dps::third_point(lag({"10"}, 1), lag({"01"}, 1)) == lag({"11"}, 1));
  const auto p = lag({"1000", "0100"}, 2);   // span(a1, a2)
  const auto q = lag({"1000", "0001"}, 2);   // span(a1, b2)
  CHECK(dps::third_point(p, q) == lag({"1000", "0101"}, 2));
  try {
    dps::third_point(p, p);
    FAIL("expected NotCollinear");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotCollinear);
  }
  // span(a1,a2) and span(b1,b2) meet in 0, not in a line at g=2
  CHECK_THROWS_AS(dps::third_point(p, lag({"0010", "0001"}, 2)), Error);
}

TEST_CASE("line regularity") {
  for (std::size_t g = 1; g <= 4; ++g) {
    const auto s = DualPolarSpace::build(g);
    const std::size_t per_point = (std::size_t{1} << g) - 1;
    for (PointIndex p = 0; p < s.point_count(); ++p) {
      CHECK(s.lines_through(p).size() == per_point);
    }
    std::set<std::pair<PointIndex, PointIndex>> pairs;
    for (std::size_t i = 0; i < s.line_count(); ++i) {
      const auto l = s.line(i);
      CHECK(l.points[0] < l.points[1]);
      CHECK(l.points[1] < l.points[2]);
      for (auto p : l.points) {
        const auto pt = s.point(p);
        for (const auto& row : l.axis.row_list()) CHECK(pt.contains(row));
      }
      CHECK(l.axis.rows() == g - 1);
      // two points share at most one line
      CHECK(pairs.insert({l.points[0], l.points[1]}).second);
      CHECK(pairs.insert({l.points[0], l.points[2]}).second);
      CHECK(pairs.insert({l.points[1], l.points[2]}).second);
      if (g > 1 && i > 0) {
        CHECK(s.lines()[i - 1] < s.lines()[i]);
      }
    }
  }
}

TEST_CASE("third point is symmetric and involutive") {
  for (std::size_t g = 1; g <= 4; ++g) {
    const auto s = DualPolarSpace::build(g);
    for (const auto& l : s.lines()) {
      const auto [p, q, r] = l;
      CHECK(s.third_point(p, q) == r);
      CHECK(s.third_point(q, p) == r);
      CHECK(s.third_point(p, s.third_point(p, q)) == q);
      CHECK(dps::third_point(s.point(p), s.point(q)) == s.point(r));
    }
  }
}

TEST_CASE("index lookup round trips") {
  const auto s = DualPolarSpace::build(3);
  for (PointIndex i = 0; i < s.point_count(); ++i) {
    CHECK(s.index_of(s.point(i)) == i);
    CHECK(s.index_of(s.point(i).basis()) == i);
  }
  std::vector<std::string> bad{"100000", "000100"};
  CHECK_FALSE(s.index_of(gf2::BitMatrix::from_strings(bad)).has_value());
}

TEST_CASE("closure examples and laws") {
  const auto s = DualPolarSpace::build(3);
  std::vector<PointIndex> one{5};
  CHECK(s.closure(one) == one);
  const auto l = s.lines()[17];
  std::vector<PointIndex> two{l[0], l[2]};
  CHECK(s.closure(two) == std::vector<PointIndex>(l.begin(), l.end()));
  CHECK(s.closure({}).empty());

  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    std::vector<PointIndex> a, b;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 6); ++k) {
      a.push_back(static_cast<PointIndex>(rng() % s.point_count()));
    }
    b = a;
    b.push_back(static_cast<PointIndex>(rng() % s.point_count()));
    const auto ca = s.closure(a);
    const auto cb = s.closure(b);
    // extensive, idempotent, monotone
    for (auto p : a) CHECK(std::binary_search(ca.begin(), ca.end(), p));
    CHECK(s.closure(ca) == ca);
    CHECK(std::includes(cb.begin(), cb.end(), ca.begin(), ca.end()));
    // closed: no line meets it exactly twice
    for (const auto& ln : s.lines()) {
      int in = 0;
      for (auto p : ln) in += std::binary_search(ca.begin(), ca.end(), p);
      CHECK(in != 2);
    }
  }
}

TEST_CASE("threaded build matches serial") {
  const auto a = DualPolarSpace::build(4, {}, 1);
  const auto b = DualPolarSpace::build(4, {}, 3);
  REQUIRE(a.point_count() == b.point_count());
  CHECK(a.lines() == b.lines());
  for (PointIndex i = 0; i < a.point_count(); i += 97) {
    CHECK(a.point(i) == b.point(i));
  }
}

TEST_CASE("resource limits") {
  CHECK_THROWS_AS(DualPolarSpace::build(4, {1000}), Error);
  try {
    dps::enumerate_lagrangians(5, {100});
    FAIL("expected a resource error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kResourceLimit);
  }
  CHECK_THROWS_AS(DualPolarSpace::build(dps::kMaxGenus + 1), Error);
}

}  // TEST_SUITE
