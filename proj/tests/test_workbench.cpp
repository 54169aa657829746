#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "sptri/error.hpp"
#include "sptri/workbench.hpp"

using namespace sptri;
using namespace sptri::workbench;

namespace {

RunResult run_json(const char* text) {
  return run(RunConfig::from_json(json::parse(text)));
}

json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("elapsed_seconds");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

}  // namespace

TEST_SUITE("workbench") {

TEST_CASE("schema version") {
  CHECK(std::string(report_schema_version()) == "1.0.0");
}

TEST_CASE("counts table") {
  const auto r = run_json(R"({"command":"counts","genus_max":7})");
  CHECK(r.exit_status == 0);
  CHECK(r.rendered ==
        "g,0,1,2,3,4,5,6,7\n"
        "N(g),1,2,5,15,51,188,731,2950\n"
        "n(g),1,2,5,15,51,187,715,2795\n");
  const auto j = run_json(R"({"command":"counts","genus_max":8,"format":"json"})");
  CHECK(j.exit_status == 0);
  CHECK(j.report["rows"][8]["n"] == 11051);
  CHECK(j.report["rows"][8]["checks"]["m_enumerated"]["actual"] == 43);
}

TEST_CASE("verify genus 2") {
  const auto r = run_json(R"({"command":"verify","genus":2})");
  CHECK(r.exit_status == 0);
  const auto& c = r.report["records"][0]["checks"];
  CHECK(c["N"]["actual"] == 5);
  CHECK(c["n"]["actual"] == 5);
  CHECK(c["points"]["actual"] == 15);
  CHECK(c["lines"]["actual"] == 15);
  CHECK(c["z_free_rank"]["actual"] == 5);
  for (const auto& [name, chk] : c.items()) {
    CHECK_MESSAGE(chk["match"] == true, name);
    CHECK(chk.contains("expected"));
  }
  CHECK(r.report["match"] == true);
}

TEST_CASE("verify genus 0") {
  const auto r = run_json(R"({"command":"verify","genus":0})");
  CHECK(r.exit_status == 0);
  const auto& c = r.report["records"][0]["checks"];
  CHECK(c["points"]["actual"] == 1);
  CHECK(c["z_free_rank"]["actual"] == 1);
}

TEST_CASE("verify range up to genus 4") {
  const auto r = run_json(
      R"({"command":"verify","genus":0,"genus_max":4,"format":"csv"})");
  CHECK(r.exit_status == 0);
  CHECK(r.report["records"].size() == 5);
  CHECK(r.rendered.rfind("genus,check,actual,expected,match\n", 0) == 0);
  CHECK(r.rendered.find(",false") == std::string::npos);
}

TEST_CASE("reports do not depend on the thread count") {
  const auto a = run_json(R"({"command":"verify","genus":4,"threads":1})");
  const auto b = run_json(R"({"command":"verify","genus":4,"threads":3})");
  CHECK(strip_timing(a.report) == strip_timing(b.report));
  const auto c = run_json(R"({"command":"lines","genus":3,"threads":1})");
  const auto d = run_json(R"({"command":"lines","genus":3,"threads":2})");
  CHECK(strip_timing(c.report) == strip_timing(d.report));
}

TEST_CASE("rank, verify-basis, express and mu") {
  auto r = run_json(R"({"command":"rank","genus":3})");
  CHECK(r.exit_status == 0);
  for (const char* key : {"genus", "points", "lines", "free_rank", "torsion",
                          "expected_n", "match"}) {
    CHECK_MESSAGE(r.report.contains(key), key);
  }
  CHECK(r.report["free_rank"] == 15);

  r = run_json(R"({"command":"rank","genus":4,"ring":"F2"})");
  CHECK(r.exit_status == 0);
  CHECK(r.report["f2_rank"] == 2244);

  r = run_json(R"({"command":"verify-basis","genus":4})");
  CHECK(r.exit_status == 0);
  CHECK(r.report["verdict"] == "unimodular");

  r = run_json(R"j({"command":"express","genus":3,"diagram":"(1)(23)"})j");
  CHECK(r.exit_status == 0);
  CHECK(r.report["terms"].size() == 1);
  CHECK(r.report["residual_zero"] == true);

  r = run_json(R"j({"command":"mu","genus":5,"diagram":"(145)(23)"})j");
  CHECK(r.exit_status == 0);
  CHECK(r.report["lagrangian"].size() == 5);
  CHECK(r.report["special"] == false);
  CHECK(r.report["weight"] == 1);
  CHECK(r.report["point_index"].is_number());
}

TEST_CASE("enumerate, lagrangians, lines, closure") {
  auto r = run_json(
      R"({"command":"enumerate","genus":6,"set":"special","irreducible_only":true})");
  CHECK(r.exit_status == 0);
  CHECK(r.report["count"] == 11);
  r = run_json(R"({"command":"enumerate","genus":5,"set":"almost-special"})");
  CHECK(r.report["count"] == 188);
  r = run_json(R"({"command":"lagrangians","genus":1})");
  CHECK(r.report["points"] ==
        json::parse(R"([["01"],["10"],["11"]])"));
  r = run_json(R"({"command":"lines","genus":2})");
  CHECK(r.report["count"] == 15);
  CHECK(r.report["lines"][0]["points"].size() == 3);
  CHECK(r.report["lines"][0]["axis"].size() == 1);
  r = run_json(R"({"command":"closure","genus":3,"seed":"special"})");
  CHECK(r.exit_status == 0);
  CHECK(r.report["closure_size"] == 135);
}

TEST_CASE("closure from a seed file") {
  const std::string path = "sptri_seed_test.txt";
  {
    std::ofstream out(path);
    out << "# a comment\n(12)\n0\n1000 0001\n\n";
  }
  const auto r = run(RunConfig::from_json(
      {{"command", "closure"}, {"genus", 2}, {"seed", path}}));
  std::remove(path.c_str());
  CHECK(r.exit_status == 0);
  CHECK(r.report["seed_size"] == 3);
  CHECK(r.report["spans_all"] == false);
}

TEST_CASE("errors become structured records") {
  auto r = run_json(R"j({"command":"mu","genus":3,"diagram":"(123)(13)"})j");
  CHECK(r.exit_status == 2);
  CHECK(r.report["error"]["code"] == "MinimalityViolation");
  CHECK(r.report["error"]["status"] == 3);

  r = run_json(R"({"command":"rank","genus":5})");
  CHECK(r.exit_status == 2);
  CHECK(r.report["error"]["code"] == "ResourceLimitExceeded");

  r = run_json(R"({"command":"lagrangians","genus":6})");
  CHECK(r.exit_status == 2);

  r = run_json(R"({"command":"rank","genus":4,"memory_bytes":1000})");
  CHECK(r.exit_status == 2);
  CHECK(r.report["error"]["code"] == "ResourceLimitExceeded");

  r = run_json(R"({"command":"lines","genus":3,"format":"csv"})");
  CHECK(r.exit_status == 2);

  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"bogus":1})")), Error);
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"genus":-1})")), Error);
  CHECK_THROWS_AS(
      RunConfig::from_json(json::parse(R"({"time_seconds":0})")), Error);
}

TEST_CASE("time cap") {
  const auto r = run_json(
      R"({"command":"verify","genus":4,"time_seconds":1e-9})");
  CHECK(r.exit_status == 2);
  CHECK(r.report["error"]["code"] == "ResourceLimitExceeded");
}

TEST_CASE("report schema parsing") {
  const auto r = run_json(R"({"command":"verify","genus":1})");
  const auto back = parse_report(r.report.dump());
  CHECK(back["records"][0]["genus"] == 1);
  CHECK_NOTHROW(parse_report(R"({"schema_version":"1.4.0"})"));
  CHECK_NOTHROW(parse_report(R"({"schema_version":"0.9.0"})"));
  try {
    parse_report(R"({"schema_version":"2.0.0","records":[]})");
    FAIL("newer major accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchemaVersion);
    CHECK(std::string(e.what()).find("2.0.0") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_report(R"({"records":[]})"), Error);
  CHECK_THROWS_AS(parse_report("not json"), Error);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.command = "rank";
  c.genus = 3;
  c.ring = "F2";
  c.format = Format::kText;
  const auto back = RunConfig::from_json(c.to_json());
  CHECK(back.command == "rank");
  CHECK(back.genus == 3);
  CHECK(back.ring == "F2");
  CHECK(back.format == Format::kText);
  CHECK(RunConfig::from_json(json::parse(R"({"command":"counts"})")).format ==
        Format::kCsv);
}

}  // TEST_SUITE
