// sptri: command-line front end. Every subcommand is turned into a JSON run
// config and handed to the library; with no subcommand the config is read
// from standard input.

#include <cstdio>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sptri/sptri.h"

using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::optional<long long> genus;
  std::optional<long long> genus_max;
  std::string format;
  std::string output;
  unsigned threads = 0;
  std::optional<unsigned long long> memory_mb;
  std::optional<double> time_limit;
  std::optional<unsigned long long> max_points;
  bool allow_large = false;
};

int run_config(const std::string& text) {
  char* report = nullptr;
  int exit_status = 2;
  const int st = sptri_run(text.c_str(), &report, &exit_status);
  if (st != SPTRI_OK) {
    std::cerr << "sptri: " << sptri_status_name(st) << ": "
              << sptri_last_error() << "\n";
    return 2;
  }
  std::fputs(report, exit_status == 2 ? stderr : stdout);
  sptri_string_free(report);
  return exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Special handlebodies, DSp(2g,2) and the relation lattice"};
  app.set_version_flag("--version", sptri_version());

  Common c;
  bool from_stdin = false;
  app.add_flag("--stdin", from_stdin, "Read a JSON run config from stdin");

  auto add_common = [&c](CLI::App* sub, bool needs_genus) {
    auto* g = sub->add_option("-g,--genus", c.genus, "Genus")
                  ->check(CLI::NonNegativeNumber);
    if (needs_genus) g->required();
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("-o,--output", c.output, "Also write the report here");
    sub->add_option("--threads", c.threads,
                    "Worker threads (default: $SPTRI_THREADS or 1)");
    sub->add_option("--memory-mb", c.memory_mb, "Memory cap in MiB")
        ->check(CLI::PositiveNumber);
    sub->add_option("--time-limit", c.time_limit,
                    "Time cap per genus in seconds")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-points", c.max_points, "Point-count cap")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--allow-large", c.allow_large,
                  "Permit lattice work above genus 4");
  };

  auto* counts = app.add_subcommand("counts", "Table of N(g) and n(g)");
  add_common(counts, false);
  counts->add_option("--genus-max", c.genus_max, "Last genus (default 7)")
      ->check(CLI::NonNegativeNumber);

  std::string set = "special";
  bool irreducible_only = false;
  auto* enumerate = app.add_subcommand("enumerate", "List diagrams");
  add_common(enumerate, true);
  enumerate->add_option("--set", set)
      ->check(CLI::IsMember({"special", "almost-special"}));
  enumerate->add_flag("--irreducible-only", irreducible_only);

  auto* lagrangians =
      app.add_subcommand("lagrangians", "Points of DSp(2g,2)");
  add_common(lagrangians, true);
  auto* lines = app.add_subcommand("lines", "Lines of DSp(2g,2)");
  add_common(lines, true);

  std::string seed = "special";
  std::string seed_file;
  auto* closure = app.add_subcommand("closure", "Geometric closure");
  add_common(closure, true);
  closure->add_option("--seed", seed,
                      "special, almost-special, or a seed file");
  closure->add_option("--seed-file", seed_file,
                      "Seed file: point indices, symbols or basis rows")
      ->check(CLI::ExistingFile);

  std::string diagram;
  auto* mu = app.add_subcommand("mu", "Lagrangian of a diagram");
  add_common(mu, true);
  mu->add_option("-d,--diagram", diagram, "Symbol such as (145)(23)")
      ->required();

  std::string ring = "Z";
  auto* rank = app.add_subcommand("rank", "Rank of the relation lattice");
  add_common(rank, true);
  rank->add_option("--ring", ring)->check(CLI::IsMember({"Z", "F2"}));

  auto* verify_basis = app.add_subcommand(
      "verify-basis", "Determinant of the special images");
  add_common(verify_basis, true);

  auto* express = app.add_subcommand(
      "express", "Coefficients of a diagram over the special basis");
  add_common(express, true);
  express->add_option("-d,--diagram", diagram)->required();

  auto* verify = app.add_subcommand("verify", "Full verification report");
  add_common(verify, true);
  verify->add_option("--genus-max", c.genus_max, "Verify a genus range")
      ->check(CLI::NonNegativeNumber);

  app.require_subcommand(0, 1);
  CLI11_PARSE(app, argc, argv);

  if (app.get_subcommands().empty()) {
    if (!from_stdin) {
      std::cerr << app.help();
      return 2;
    }
    const std::string text{std::istreambuf_iterator<char>(std::cin),
                           std::istreambuf_iterator<char>()};
    return run_config(text);
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  json cfg = {{"command", cmd}};
  if (c.genus) cfg["genus"] = *c.genus;
  if (c.genus_max) cfg["genus_max"] = *c.genus_max;
  if (!c.format.empty()) cfg["format"] = c.format;
  if (!c.output.empty()) cfg["output"] = c.output;
  if (c.threads) cfg["threads"] = c.threads;
  if (c.memory_mb) cfg["memory_bytes"] = *c.memory_mb << 20;
  if (c.time_limit) cfg["time_seconds"] = *c.time_limit;
  if (c.max_points) cfg["max_points"] = *c.max_points;
  if (c.allow_large) cfg["allow_large"] = true;
  if (cmd == "enumerate") {
    cfg["set"] = set;
    cfg["irreducible_only"] = irreducible_only;
  } else if (cmd == "closure") {
    cfg["seed"] = seed_file.empty() ? seed : seed_file;
  } else if (cmd == "mu" || cmd == "express") {
    cfg["diagram"] = diagram;
  } else if (cmd == "rank") {
    cfg["ring"] = ring;
  }
  return run_config(cfg.dump());
}
