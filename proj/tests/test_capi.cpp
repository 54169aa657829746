#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "sptri/sptri.h"

namespace {

std::string take(char* s) {
  std::string out(s ? s : "");
  sptri_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("versions and status names") {
  CHECK(std::string(sptri_report_schema_version()) == "1.0.0");
  CHECK(std::string(sptri_status_name(SPTRI_OK)) == "Ok");
  CHECK(std::string(sptri_status_name(SPTRI_E_MINIMALITY)) ==
        "MinimalityViolation");
  CHECK(std::string(sptri_status_name(99)) == "Unknown");
}

TEST_CASE("diagram handles") {
  sptri_diagram* d = nullptr;
  REQUIRE(sptri_diagram_parse("(1,4,5)(2,3)", 5, &d) == SPTRI_OK);
  char* text = nullptr;
  REQUIRE(sptri_diagram_print(d, &text) == SPTRI_OK);
  CHECK(take(text) == "(145)(23)");
  int special = -1;
  CHECK(sptri_diagram_is_special(d, &special) == SPTRI_OK);
  CHECK(special == 0);
  int irreducible = -1;
  CHECK(sptri_diagram_is_irreducible(d, &irreducible) == SPTRI_OK);
  CHECK(irreducible == 1);
  char* rows = nullptr;
  int64_t weight = 0;
  REQUIRE(sptri_diagram_mu(d, &rows, &weight) == SPTRI_OK);
  CHECK(take(rows) ==
        "1001100000\n0110000000\n0000010001\n0000001100\n0000000011");
  CHECK(weight == 1);
  sptri_diagram_free(d);

  sptri_diagram* bad = nullptr;
  CHECK(sptri_diagram_parse("(123)(13)", 3, &bad) == SPTRI_E_MINIMALITY);
  CHECK(bad == nullptr);
  CHECK(std::string(sptri_last_error()).size() > 0);
  CHECK(sptri_diagram_parse("(13)(24)", 4, &bad) == SPTRI_E_NONCROSSING);
  CHECK(sptri_diagram_parse("(9)", 4, &bad) == SPTRI_E_PUNCTURE_RANGE);
  CHECK(sptri_diagram_parse("(1", 4, &bad) == SPTRI_E_SYNTAX);
  CHECK(sptri_diagram_parse(nullptr, 4, &bad) == SPTRI_E_INVALID_ARGUMENT);
  CHECK(sptri_diagram_print(nullptr, &text) == SPTRI_E_INVALID_ARGUMENT);
}

TEST_CASE("enumeration and counts") {
  char* out = nullptr;
  size_t count = 0;
  REQUIRE(sptri_enumerate(2, "almost-special", 0, &out, &count) == SPTRI_OK);
  CHECK(count == 5);
  CHECK(take(out) == "\n(1)\n(2)\n(12)\n(1)(2)");
  REQUIRE(sptri_enumerate(5, "special", 0, &out, &count) == SPTRI_OK);
  sptri_string_free(out);
  CHECK(count == 187);
  CHECK(sptri_enumerate(2, "nope", 0, &out, &count) ==
        SPTRI_E_INVALID_ARGUMENT);

  REQUIRE(sptri_count("n", 7, &out) == SPTRI_OK);
  CHECK(take(out) == "2795");
  REQUIRE(sptri_count("N", 7, &out) == SPTRI_OK);
  CHECK(take(out) == "2950");
  REQUIRE(sptri_count("n", 64, &out) == SPTRI_OK);
  CHECK(take(out).size() > 20);
  CHECK(sptri_count("m", 0, &out) == SPTRI_E_INVALID_ARGUMENT);
}

TEST_CASE("space, closure and lattice") {
  sptri_space* s = nullptr;
  REQUIRE(sptri_space_create(3, 2, &s) == SPTRI_OK);
  size_t points = 0, lines = 0;
  CHECK(sptri_space_point_count(s, &points) == SPTRI_OK);
  CHECK(sptri_space_line_count(s, &lines) == SPTRI_OK);
  CHECK(points == 135);
  CHECK(lines == 315);

  uint32_t l[3];
  REQUIRE(sptri_space_line(s, 10, l) == SPTRI_OK);
  uint32_t third = 0;
  CHECK(sptri_space_third_point(s, l[0], l[1], &third) == SPTRI_OK);
  CHECK(third == l[2]);
  CHECK(sptri_space_third_point(s, l[0], l[0], &third) ==
        SPTRI_E_NOT_COLLINEAR);
  CHECK(sptri_space_line(s, 315, l) == SPTRI_E_INVALID_ARGUMENT);

  char* rows = nullptr;
  REQUIRE(sptri_space_point_rows(s, 0, &rows) == SPTRI_OK);
  CHECK(take(rows).size() == 3 * 6 + 2);

  std::vector<uint32_t> basis;
  char* listing = nullptr;
  size_t n = 0;
  REQUIRE(sptri_enumerate(3, "special", 0, &listing, &n) == SPTRI_OK);
  const std::string all = take(listing);
  size_t start = 0;
  while (true) {
    const size_t end = all.find('\n', start);
    const std::string sym = all.substr(start, end - start);
    sptri_diagram* d = nullptr;
    REQUIRE(sptri_diagram_parse(sym.c_str(), 3, &d) == SPTRI_OK);
    uint32_t idx = 0;
    REQUIRE(sptri_space_index_of_diagram(s, d, &idx) == SPTRI_OK);
    basis.push_back(idx);
    sptri_diagram_free(d);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  REQUIRE(basis.size() == 15);

  uint32_t* cl = nullptr;
  size_t cl_len = 0;
  REQUIRE(sptri_space_closure(s, basis.data(), basis.size(), &cl, &cl_len) ==
          SPTRI_OK);
  CHECK(cl_len == 135);
  sptri_index_free(cl);

  sptri_lattice* lat = nullptr;
  REQUIRE(sptri_lattice_build(s, &lat) == SPTRI_OK);
  sptri_space_free(s);
  size_t rank = 0, torsion = 7;
  CHECK(sptri_lattice_free_rank(lat, &rank) == SPTRI_OK);
  CHECK(sptri_lattice_torsion_count(lat, &torsion) == SPTRI_OK);
  CHECK(rank == 15);
  CHECK(torsion == 0);

  std::vector<int64_t> a(15), b(15), c(15);
  CHECK(sptri_lattice_coordinates(lat, l[0], a.data(), a.size()) == SPTRI_OK);
  CHECK(sptri_lattice_coordinates(lat, l[1], b.data(), b.size()) == SPTRI_OK);
  CHECK(sptri_lattice_coordinates(lat, l[2], c.data(), c.size()) == SPTRI_OK);
  for (size_t k = 0; k < 15; ++k) CHECK(a[k] + b[k] + c[k] == 0);
  CHECK(sptri_lattice_coordinates(lat, 0, a.data(), 3) ==
        SPTRI_E_INVALID_ARGUMENT);

  int verdict = -1;
  char* det = nullptr;
  REQUIRE(sptri_lattice_verify_basis(lat, basis.data(), basis.size(), &verdict,
                                     &det) == SPTRI_OK);
  CHECK(verdict == SPTRI_UNIMODULAR);
  const std::string d = take(det);
  CHECK((d == "1" || d == "-1"));

  char* coeffs = nullptr;
  int residual_zero = 0;
  REQUIRE(sptri_lattice_express(lat, basis[4], basis.data(), basis.size(),
                                &coeffs, &residual_zero) == SPTRI_OK);
  CHECK(residual_zero == 1);
  CHECK(take(coeffs) == "0\n0\n0\n0\n1\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0");

  auto dup = basis;
  dup[1] = dup[0];
  CHECK(sptri_lattice_express(lat, 0, dup.data(), dup.size(), &coeffs,
                              &residual_zero) == SPTRI_E_BASIS_NOT_VERIFIED);
  sptri_lattice_free(lat);
}

TEST_CASE("run") {
  char* report = nullptr;
  int status = -1;
  REQUIRE(sptri_run(R"({"command":"counts","genus_max":3})", &report,
                    &status) == SPTRI_OK);
  CHECK(status == 0);
  CHECK(take(report) == "g,0,1,2,3\nN(g),1,2,5,15\nn(g),1,2,5,15\n");

  REQUIRE(sptri_run(R"({"command":"verify","genus":1,"format":"text"})",
                    &report, &status) == SPTRI_OK);
  CHECK(status == 0);
  CHECK(take(report).find("match: true") != std::string::npos);

  REQUIRE(sptri_run(R"({"command":"rank","genus":5})", &report, &status) ==
          SPTRI_OK);
  CHECK(status == 2);
  CHECK(take(report).find("ResourceLimitExceeded") != std::string::npos);

  CHECK(sptri_run("{", &report, &status) == SPTRI_E_SYNTAX);
  CHECK(sptri_run(R"({"nope":1})", &report, &status) ==
        SPTRI_E_INVALID_ARGUMENT);
}
