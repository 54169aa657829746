#ifndef SPTRI_WORKBENCH_HPP
#define SPTRI_WORKBENCH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

// Reproduction harness: runs one subcommand and renders its report.

namespace sptri::workbench {

using json = nlohmann::ordered_json;

enum class Format { kText, kJson, kCsv };

struct RunConfig {
  std::string command;  // counts, enumerate, lagrangians, lines, closure, mu,
                        // rank, verify-basis, express, verify
  std::size_t genus = 0;
  std::optional<std::size_t> genus_max;  // counts / verify range end
  Format format = Format::kJson;

  std::uint64_t memory_bytes = std::uint64_t{4} << 30;
  double time_seconds = 600.0;  // per genus
  std::uint64_t max_points = 100000;
  unsigned threads = 0;  // 0: SPTRI_THREADS or 1
  std::string output_path;
  bool allow_large = false;

  // enumerate
  std::string set = "special";
  bool irreducible_only = false;
  // mu / express
  std::string diagram;
  // closure: "special", "almost-special", or a seed file path
  std::string seed = "special";
  // rank
  std::string ring = "Z";

  /// Unknown keys and invalid values throw kInvalidArgument.
  static RunConfig from_json(const json& j);
  json to_json() const;
};

struct RunResult {
  int exit_status = 0;  // 0 all match, 1 some mismatch, 2 error
  json report;
  std::string rendered;  // report in the requested format
};

/// Never throws for library errors: they become an "error" record with exit
/// status 2.
RunResult run(const RunConfig& config);

const char* report_schema_version() noexcept;

/// Parses a JSON report; refuses a schema with a newer major version
/// (kSchemaVersion).
json parse_report(const std::string& text);

/// Thread count from SPTRI_THREADS, at least 1.
unsigned default_threads();

}  // namespace sptri::workbench

#endif  // SPTRI_WORKBENCH_HPP
