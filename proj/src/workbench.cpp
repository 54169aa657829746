#include "sptri/workbench.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

#include "sptri/diagram.hpp"
#include "sptri/dps.hpp"
#include "sptri/error.hpp"
#include "sptri/lattice.hpp"
#include "sptri/mu.hpp"

namespace sptri::workbench {

namespace {

using Clock = std::chrono::steady_clock;
using diagram::CrossinglessDiagram;
using dps::PointIndex;

constexpr const char* kSchemaVersion = "1.0.0";

// Published table, g = 0..7.
constexpr std::uint64_t kTableN[] = {1, 2, 5, 15, 51, 188, 731, 2950};
constexpr std::uint64_t kTableSmallN[] = {1, 2, 5, 15, 51, 187, 715, 2795};

constexpr std::size_t kMaxEnumerateGenus = 12;
constexpr std::size_t kCountsEnumerateUpTo = 8;
constexpr std::size_t kSnfUpTo = 4;

json big(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

json big_list(const std::vector<mpz_class>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(big(x));
  return out;
}

const char* format_name(Format f) {
  switch (f) {
    case Format::kText: return "text";
    case Format::kJson: return "json";
    case Format::kCsv: return "csv";
  }
  return "json";
}

class Checks {
 public:
  void add(const std::string& name, json actual, json expected) {
    const bool m = actual == expected;
    obj_[name] = {{"actual", std::move(actual)},
                  {"expected", std::move(expected)},
                  {"match", m}};
    ok_ = ok_ && m;
  }
  json& object() { return obj_; }
  bool ok() const { return ok_; }

 private:
  json obj_ = json::object();
  bool ok_ = true;
};

class Budget {
 public:
  explicit Budget(double seconds) : seconds_(seconds), start_(Clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  void check(const char* stage) const {
    if (elapsed() > seconds_) {
      throw Error(ErrorCode::kResourceLimit,
                  std::string("time cap exceeded after ") + stage);
    }
  }

 private:
  double seconds_;
  Clock::time_point start_;
};

// Everything one genus needs, built on demand.
class GenusData {
 public:
  GenusData(std::size_t genus, const RunConfig& cfg, unsigned threads)
      : g_(genus), cfg_(cfg), threads_(threads), budget_(cfg.time_seconds) {}

  std::size_t genus() const { return g_; }
  const Budget& budget() const { return budget_; }

  const std::vector<CrossinglessDiagram>& almost_special() {
    if (!s_) {
      if (g_ > kMaxEnumerateGenus) {
        throw Error(ErrorCode::kResourceLimit,
                    "diagram enumeration is capped at genus " +
                        std::to_string(kMaxEnumerateGenus));
      }
      s_ = diagram::enumerate_almost_special(g_);
      budget_.check("enumerating diagrams");
    }
    return *s_;
  }

  const std::vector<CrossinglessDiagram>& special() {
    if (!m_) {
      m_.emplace();
      for (const auto& d : almost_special()) {
        if (diagram::is_special(d)) m_->push_back(d);
      }
    }
    return *m_;
  }

  const dps::DualPolarSpace& space() {
    if (!space_) {
      if (g_ > dps::kMaxGenus || dps::lagrangian_count(g_) > cfg_.max_points) {
        throw Error(ErrorCode::kResourceLimit,
                    "genus " + std::to_string(g_) +
                        " exceeds the point-count cap");
      }
      const double bytes = 100.0 * dps::lagrangian_count(g_) +
                           48.0 * dps::line_count(g_);
      require_memory(bytes, "dual polar space");
      space_ = dps::DualPolarSpace::build(g_, {cfg_.max_points}, threads_);
      budget_.check("building the dual polar space");
    }
    return *space_;
  }

  const std::vector<PointIndex>& images(bool special_only) {
    auto& slot = special_only ? m_img_ : s_img_;
    if (!slot) {
      slot.emplace();
      const auto& list = special_only ? special() : almost_special();
      for (const auto& d : list) {
        slot->push_back(space().index_of(mu::mu(d).point));
      }
    }
    return *slot;
  }

  const lattice::LatticePresentation& lattice() {
    if (!lattice_) {
      require_large("lattice");
      if (g_ <= kSnfUpTo) {
        require_memory(400.0 * dps::line_count(g_), "relation lattice");
        lattice_ = lattice::build_lattice(space());
      } else {
        const auto& gens = spanning_generators();
        require_memory(16.0 * dps::lagrangian_count(g_) * gens.size(),
                       "relation lattice");
        lattice_ = lattice::lattice_from_spanning_set(space(), gens);
      }
      budget_.check("building the relation lattice");
    }
    return *lattice_;
  }

  std::pair<std::size_t, std::string> f2_rank() {
    require_large("F2 rank");
    std::pair<std::size_t, std::string> out;
    if (g_ <= kSnfUpTo) {
      out = {lattice::f2_rank(lattice::relation_matrix(space())),
             "sparse-elimination"};
    } else {
      out = {lattice::f2_rank_from_spanning_set(space(),
                                                spanning_generators()),
             "closure-quotient"};
    }
    budget_.check("F2 rank");
    return out;
  }

 private:
  // mu(S_g) spans the whole space at every genus checked; the quotient
  // route accepts any spanning set.
  const std::vector<PointIndex>& spanning_generators() {
    if (!gens_) {
      std::set<PointIndex> uniq(images(false).begin(), images(false).end());
      gens_.emplace(uniq.begin(), uniq.end());
    }
    return *gens_;
  }

  void require_large(const char* what) const {
    if (g_ > kSnfUpTo && !cfg_.allow_large) {
      throw Error(ErrorCode::kResourceLimit,
                  std::string(what) + " at genus " + std::to_string(g_) +
                      " requires --allow-large");
    }
  }

  void require_memory(double bytes, const char* what) const {
    if (bytes > static_cast<double>(cfg_.memory_bytes)) {
      std::ostringstream os;
      os << what << " needs about " << static_cast<std::uint64_t>(bytes)
         << " bytes, over the memory cap of " << cfg_.memory_bytes;
      throw Error(ErrorCode::kResourceLimit, os.str());
    }
  }

  std::size_t g_;
  const RunConfig& cfg_;
  unsigned threads_;
  Budget budget_;
  std::optional<std::vector<CrossinglessDiagram>> s_, m_;
  std::optional<dps::DualPolarSpace> space_;
  std::optional<std::vector<PointIndex>> s_img_, m_img_, gens_;
  std::optional<lattice::LatticePresentation> lattice_;
};

json expected_N(std::size_t g) {
  if (g < std::size(kTableN)) return kTableN[g];
  return big(diagram::count_N(g));
}

json expected_n(std::size_t g) {
  if (g < std::size(kTableSmallN)) return kTableSmallN[g];
  return big(diagram::count_n(g));
}

json expected_m(std::size_t g) {
  if (g == 0) return 1;  // the empty diagram; m(0) = 1 convention
  return big(diagram::count_m(g));
}

std::size_t count_irreducible(const std::vector<CrossinglessDiagram>& m) {
  return static_cast<std::size_t>(std::count_if(
      m.begin(), m.end(),
      [](const auto& d) { return diagram::is_irreducible(d); }));
}

json symbols(const std::vector<CrossinglessDiagram>& list) {
  json out = json::array();
  for (const auto& d : list) out.push_back(diagram::print(d));
  return out;
}

// ---- subcommands ----------------------------------------------------------

bool cmd_counts(const RunConfig& cfg, json& r) {
  const std::size_t gmax = cfg.genus_max.value_or(7);
  bool ok = true;
  json rows = json::array();
  for (std::size_t g = 0; g <= gmax; ++g) {
    json row = {{"genus", g},
                {"N", big(diagram::count_N(g))},
                {"n", big(diagram::count_n(g))}};
    if (g >= 1) row["m"] = big(diagram::count_m(g));
    Checks c;
    if (g < std::size(kTableN)) {
      c.add("N_table", row["N"], kTableN[g]);
      c.add("n_table", row["n"], kTableSmallN[g]);
    }
    c.add("n_by_sum", big(diagram::count_n_by_sum(g)), row["n"]);
    if (g <= kCountsEnumerateUpTo) {
      const auto s = diagram::enumerate_almost_special(g);
      std::vector<CrossinglessDiagram> m;
      for (const auto& d : s) {
        if (diagram::is_special(d)) m.push_back(d);
      }
      c.add("N_enumerated", s.size(), row["N"]);
      c.add("n_enumerated", m.size(), row["n"]);
      c.add("m_enumerated", count_irreducible(m), expected_m(g));
    }
    row["checks"] = std::move(c.object());
    row["match"] = c.ok();
    ok = ok && c.ok();
    rows.push_back(std::move(row));
  }
  r["genus_max"] = gmax;
  r["rows"] = std::move(rows);
  return ok;
}

bool cmd_enumerate(const RunConfig& cfg, GenusData& data, json& r) {
  std::vector<CrossinglessDiagram> list;
  json expected;
  if (cfg.set == "special") {
    list = data.special();
    expected = expected_n(cfg.genus);
  } else if (cfg.set == "almost-special") {
    list = data.almost_special();
    expected = expected_N(cfg.genus);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown set: " + cfg.set);
  }
  if (cfg.irreducible_only) {
    std::erase_if(list,
                  [](const auto& d) { return !diagram::is_irreducible(d); });
    expected = cfg.set == "special" ? expected_m(cfg.genus) : json(nullptr);
  }
  r["genus"] = cfg.genus;
  r["set"] = cfg.set;
  r["irreducible_only"] = cfg.irreducible_only;
  r["count"] = list.size();
  r["expected_count"] = expected;
  r["diagrams"] = symbols(list);
  const bool ok = expected.is_null() || expected == json(list.size());
  r["match"] = ok;
  return ok;
}

bool cmd_lagrangians(const RunConfig& cfg, GenusData& data, json& r) {
  const auto& space = data.space();
  json points = json::array();
  for (PointIndex i = 0; i < space.point_count(); ++i) {
    points.push_back(space.point(i).to_strings());
  }
  r["genus"] = cfg.genus;
  r["count"] = space.point_count();
  r["expected_count"] = dps::lagrangian_count(cfg.genus);
  r["points"] = std::move(points);
  const bool ok = r["count"] == r["expected_count"];
  r["match"] = ok;
  return ok;
}

bool cmd_lines(const RunConfig& cfg, GenusData& data, json& r) {
  const auto& space = data.space();
  json lines = json::array();
  for (std::size_t i = 0; i < space.line_count(); ++i) {
    const auto l = space.line(i);
    lines.push_back({{"axis", l.axis.to_strings()},
                     {"points", {l.points[0], l.points[1], l.points[2]}}});
  }
  r["genus"] = cfg.genus;
  r["count"] = space.line_count();
  r["expected_count"] = dps::line_count(cfg.genus);
  r["lines"] = std::move(lines);
  const bool ok = r["count"] == r["expected_count"];
  r["match"] = ok;
  return ok;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// One seed per line: a point index, a diagram symbol, or the basis rows of a
// Lagrangian separated by spaces or commas. '#' starts a comment.
std::vector<PointIndex> read_seed_file(const std::string& path,
                                       GenusData& data) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kInvalidArgument, "cannot read seed file " + path);
  }
  const auto& space = data.space();
  std::vector<PointIndex> out;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto where = path + ":" + std::to_string(lineno) + ": ";
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isdigit(c); }) &&
        line.size() < 10) {
      const auto idx = std::stoul(line);
      if (idx >= space.point_count()) {
        throw Error(ErrorCode::kInvalidArgument,
                    where + "point index out of range");
      }
      out.push_back(static_cast<PointIndex>(idx));
    } else if (line.front() == '(') {
      const auto d = diagram::parse(line, data.genus());
      out.push_back(space.index_of(mu::mu(d).point));
    } else {
      std::vector<std::string> rows;
      std::string tok;
      for (char c : line + " ") {
        if (c == ' ' || c == ',' || c == '\t') {
          if (!tok.empty()) rows.push_back(std::exchange(tok, {}));
        } else {
          tok += c;
        }
      }
      gf2::BitMatrix m;
      try {
        m = gf2::BitMatrix::from_strings(rows);
      } catch (const Error& e) {
        throw Error(e.code(), where + e.what());
      }
      const auto idx = space.index_of(m);
      if (!idx) {
        throw Error(ErrorCode::kInvalidArgument,
                    where + "rows do not span a Lagrangian of genus " +
                        std::to_string(data.genus()));
      }
      out.push_back(*idx);
    }
  }
  return out;
}

bool cmd_closure(const RunConfig& cfg, GenusData& data, json& r) {
  std::vector<PointIndex> seed;
  const bool named = cfg.seed == "special" || cfg.seed == "almost-special";
  if (named) {
    seed = data.images(cfg.seed == "special");
  } else {
    seed = read_seed_file(cfg.seed, data);
  }
  const auto& space = data.space();
  const auto cl = space.closure(seed);
  data.budget().check("closure");
  std::set<PointIndex> uniq(seed.begin(), seed.end());
  r["genus"] = cfg.genus;
  r["seed"] = cfg.seed;
  r["seed_size"] = uniq.size();
  r["points"] = space.point_count();
  r["closure_size"] = cl.size();
  r["spans_all"] = cl.size() == space.point_count();
  r["closure"] = cl;
  if (!named) return true;
  // Named seeds carry an expectation: the images span the whole space.
  r["expected_spans_all"] = true;
  const bool ok = r["spans_all"] == true;
  r["match"] = ok;
  return ok;
}

bool cmd_mu(const RunConfig& cfg, GenusData& data, json& r) {
  const auto d = diagram::parse(cfg.diagram, cfg.genus);
  const auto m = mu::mu(d);
  const bool closed = mu::mu_closed_form(d) == m.point;
  r["genus"] = cfg.genus;
  r["diagram"] = diagram::print(d);
  r["special"] = diagram::is_special(d);
  r["weight"] = big(m.weight);
  r["h2_rank"] = m.h2_rank;
  r["lagrangian"] = m.point.to_strings();
  if (cfg.genus <= dps::kMaxGenus &&
      dps::lagrangian_count(cfg.genus) <= cfg.max_points) {
    r["point_index"] = data.space().index_of(m.point);
  } else {
    r["point_index"] = nullptr;
  }
  r["closed_form_match"] = closed;
  r["match"] = closed;
  return closed;
}

void lattice_fields(GenusData& data, json& r) {
  const auto& lat = data.lattice();
  r["genus"] = data.genus();
  r["points"] = lat.points;
  r["lines"] = lat.lines;
  r["free_rank"] = lat.free_rank;
  r["torsion"] = big_list(lat.torsion);
  r["expected_n"] = expected_n(data.genus());
  r["method"] = lat.method;
}

bool cmd_rank(const RunConfig& cfg, GenusData& data, json& r) {
  if (cfg.ring == "Z") {
    lattice_fields(data, r);
    r["ring"] = "Z";
    const bool ok =
        r["free_rank"] == r["expected_n"] && r["torsion"].empty();
    r["match"] = ok;
    return ok;
  }
  if (cfg.ring != "F2") {
    throw Error(ErrorCode::kInvalidArgument, "ring must be Z or F2");
  }
  const auto& space = data.space();
  const auto [rank, method] = data.f2_rank();
  r["genus"] = cfg.genus;
  r["ring"] = "F2";
  r["points"] = space.point_count();
  r["lines"] = space.line_count();
  r["f2_rank"] = rank;
  r["free_rank"] = space.point_count() - rank;
  r["torsion"] = json::array();
  r["expected_n"] = expected_n(cfg.genus);
  r["method"] = method;
  const bool ok = r["free_rank"] == r["expected_n"];
  r["match"] = ok;
  return ok;
}

bool cmd_verify_basis(const RunConfig& cfg, GenusData& data, json& r) {
  lattice_fields(data, r);
  const auto& imgs = data.images(true);
  r["basis_size"] = imgs.size();
  if (imgs.size() != data.lattice().free_rank) {
    r["determinant"] = nullptr;
    r["verdict"] = "size-mismatch";
    r["match"] = false;
    return false;
  }
  const auto chk = lattice::verify_basis(imgs, data.lattice());
  data.budget().check("basis verification");
  r["determinant"] = big(chk.determinant);
  r["verdict"] = lattice::verdict_name(chk.verdict);
  const bool ok = chk.verdict == lattice::BasisVerdict::kUnimodular &&
                  r["free_rank"] == r["expected_n"];
  r["match"] = ok;
  (void)cfg;
  return ok;
}

bool cmd_express(const RunConfig& cfg, GenusData& data, json& r) {
  const auto d = diagram::parse(cfg.diagram, cfg.genus);
  const auto& basis = data.special();
  const auto& imgs = data.images(true);
  const auto& lat = data.lattice();
  if (imgs.size() != lat.free_rank) {
    throw Error(ErrorCode::kBasisNotVerified,
                "special images: " + std::to_string(imgs.size()) +
                    ", free rank: " + std::to_string(lat.free_rank));
  }
  const auto chk = lattice::verify_basis(imgs, lat);
  if (chk.verdict != lattice::BasisVerdict::kUnimodular) {
    throw Error(ErrorCode::kBasisNotVerified,
                "special images are not a basis of the lattice: determinant " +
                    chk.determinant.get_str() + " (" +
                    lattice::verdict_name(chk.verdict) + ")");
  }
  const auto e = lattice::express(d, basis, data.space(), lat);
  json terms = json::array();
  for (std::size_t i = 0; i < e.coefficients.size(); ++i) {
    if (e.coefficients[i] != 0) {
      terms.push_back({{"diagram", diagram::print(basis[i])},
                       {"coefficient", big(e.coefficients[i])}});
    }
  }
  r["genus"] = cfg.genus;
  r["diagram"] = diagram::print(d);
  r["basis_size"] = basis.size();
  r["terms"] = std::move(terms);
  r["coefficients"] = big_list(e.coefficients);
  r["residual_zero"] = e.residual_zero;
  r["match"] = e.residual_zero;
  return e.residual_zero;
}

json verify_genus(std::size_t g, const RunConfig& cfg, unsigned threads,
                  bool& ok) {
  GenusData data(g, cfg, threads);
  Checks c;
  const auto& s = data.almost_special();
  const auto& m = data.special();
  c.add("N", s.size(), expected_N(g));
  c.add("n", m.size(), expected_n(g));
  c.add("m", count_irreducible(m), expected_m(g));

  const auto& space = data.space();
  c.add("points", space.point_count(), dps::lagrangian_count(g));
  c.add("lines", space.line_count(), dps::line_count(g));

  const auto n = diagram::count_n(g).get_ui();
  c.add("f2_rank", data.f2_rank().first, space.point_count() - n);
  const auto& lat = data.lattice();
  c.add("z_free_rank", lat.free_rank, n);
  c.add("torsion", big_list(lat.torsion), json::array());

  const auto& imgs = data.images(true);
  const std::set<PointIndex> uniq(imgs.begin(), imgs.end());
  c.add("mu_injective", uniq.size() == imgs.size(), true);
  bool unimodular = false;
  if (imgs.size() == lat.free_rank) {
    unimodular = lattice::verify_basis(imgs, lat).verdict ==
                 lattice::BasisVerdict::kUnimodular;
  }
  c.add("basis_unimodular", unimodular, true);
  c.add("closure_spans", space.closure(imgs).size() == space.point_count(),
        true);
  data.budget().check("verification");

  ok = ok && c.ok();
  json rec = {{"genus", g}, {"lattice_method", lat.method}};
  rec["checks"] = std::move(c.object());
  rec["match"] = c.ok();
  rec["elapsed_seconds"] = data.budget().elapsed();
  return rec;
}

bool cmd_verify(const RunConfig& cfg, unsigned threads, json& r) {
  const std::size_t lo = cfg.genus;
  const std::size_t hi = cfg.genus_max.value_or(cfg.genus);
  if (hi < lo) {
    throw Error(ErrorCode::kInvalidArgument, "genus_max below genus");
  }
  bool ok = true;
  json records = json::array();
  for (std::size_t g = lo; g <= hi; ++g) {
    records.push_back(verify_genus(g, cfg, threads, ok));
  }
  r["records"] = std::move(records);
  return ok;
}

// ---- rendering ------------------------------------------------------------

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string render_text(const RunConfig& cfg, const json& rep) {
  std::ostringstream os;
  if (rep.contains("error")) {
    const auto& e = rep["error"];
    os << "error: " << e["code"].get<std::string>() << ": "
       << e["message"].get<std::string>() << "\n";
    return os.str();
  }
  if (cfg.command == "counts") {
    os << std::left << std::setw(6) << "g";
    for (const auto& row : rep["rows"]) os << std::setw(8) << row["genus"].dump();
    os << "\n" << std::setw(6) << "N(g)";
    for (const auto& row : rep["rows"]) os << std::setw(8) << scalar_text(row["N"]);
    os << "\n" << std::setw(6) << "n(g)";
    for (const auto& row : rep["rows"]) os << std::setw(8) << scalar_text(row["n"]);
    os << "\nmatch: " << rep["match"].dump() << "\n";
    return os.str();
  }
  if (cfg.command == "verify") {
    for (const auto& rec : rep["records"]) {
      os << "genus " << rec["genus"].dump() << "  ("
         << rec["lattice_method"].get<std::string>() << ", "
         << std::fixed << std::setprecision(2)
         << rec["elapsed_seconds"].get<double>() << " s)\n";
      for (const auto& [name, chk] : rec["checks"].items()) {
        os << "  " << std::left << std::setw(18) << name << std::setw(10)
           << scalar_text(chk["actual"]) << " expected " << std::setw(10)
           << scalar_text(chk["expected"])
           << (chk["match"].get<bool>() ? "ok" : "MISMATCH") << "\n";
      }
    }
    os << "match: " << rep["match"].dump() << "\n";
    return os.str();
  }
  for (const auto& [key, v] : rep.items()) {
    if (v.is_array() && !v.empty() && v.front().is_string() &&
        key == "diagrams") {
      os << key << ":\n";
      for (const auto& x : v) {
        const auto s = x.get<std::string>();
        os << "  " << (s.empty() ? "<empty>" : s) << "\n";
      }
    } else if (v.is_array() && !v.empty() && !v.front().is_primitive()) {
      os << key << ":\n";
      for (const auto& x : v) os << "  " << x.dump() << "\n";
    } else {
      os << key << ": " << scalar_text(v) << "\n";
    }
  }
  return os.str();
}

std::string render_csv(const RunConfig& cfg, const json& rep) {
  std::ostringstream os;
  if (cfg.command == "counts") {
    os << "g";
    for (const auto& row : rep["rows"]) os << "," << row["genus"].dump();
    os << "\nN(g)";
    for (const auto& row : rep["rows"]) os << "," << scalar_text(row["N"]);
    os << "\nn(g)";
    for (const auto& row : rep["rows"]) os << "," << scalar_text(row["n"]);
    os << "\n";
    return os.str();
  }
  os << "genus,check,actual,expected,match\n";
  for (const auto& rec : rep["records"]) {
    for (const auto& [name, chk] : rec["checks"].items()) {
      auto cell = [](const json& v) {
        auto s = scalar_text(v);
        return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
      };
      os << rec["genus"].dump() << "," << name << "," << cell(chk["actual"])
         << "," << cell(chk["expected"]) << ","
         << (chk["match"].get<bool>() ? "true" : "false") << "\n";
    }
  }
  return os.str();
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) return;
  std::ofstream out(cfg.output_path);
  if (!out || !(out << text)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot write " + cfg.output_path);
  }
}

}  // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("SPTRI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
      return static_cast<unsigned>(v);
    }
  }
  return 1;
}

const char* report_schema_version() noexcept { return kSchemaVersion; }

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  }
  RunConfig c;
  auto bad = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, msg);
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") {
        c.command = v.get<std::string>();
      } else if (key == "genus") {
        const auto g = v.get<long long>();
        if (g < 0) bad("genus must be >= 0");
        c.genus = static_cast<std::size_t>(g);
      } else if (key == "genus_max") {
        if (v.is_null()) continue;
        const auto g = v.get<long long>();
        if (g < 0) bad("genus_max must be >= 0");
        c.genus_max = static_cast<std::size_t>(g);
      } else if (key == "format") {
        const auto f = v.get<std::string>();
        if (f == "text") {
          c.format = Format::kText;
        } else if (f == "json") {
          c.format = Format::kJson;
        } else if (f == "csv") {
          c.format = Format::kCsv;
        } else {
          bad("format must be text, json or csv");
        }
      } else if (key == "memory_bytes") {
        c.memory_bytes = v.get<std::uint64_t>();
      } else if (key == "time_seconds") {
        c.time_seconds = v.get<double>();
      } else if (key == "max_points") {
        c.max_points = v.get<std::uint64_t>();
      } else if (key == "threads") {
        c.threads = v.get<unsigned>();
      } else if (key == "output") {
        c.output_path = v.get<std::string>();
      } else if (key == "allow_large") {
        c.allow_large = v.get<bool>();
      } else if (key == "set") {
        c.set = v.get<std::string>();
      } else if (key == "irreducible_only") {
        c.irreducible_only = v.get<bool>();
      } else if (key == "diagram") {
        c.diagram = v.get<std::string>();
      } else if (key == "seed") {
        c.seed = v.get<std::string>();
      } else if (key == "ring") {
        c.ring = v.get<std::string>();
      } else {
        bad("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    bad(std::string("config: ") + e.what());
  }
  if (!j.contains("format") && c.command == "counts") c.format = Format::kCsv;
  if (c.memory_bytes == 0 || !(c.time_seconds > 0) || c.max_points == 0) {
    bad("resource caps must be positive");
  }
  return c;
}

json RunConfig::to_json() const {
  json j = {{"command", command}, {"genus", genus}};
  j["genus_max"] = genus_max ? json(*genus_max) : json(nullptr);
  j["format"] = format_name(format);
  j["memory_bytes"] = memory_bytes;
  j["time_seconds"] = time_seconds;
  j["max_points"] = max_points;
  j["allow_large"] = allow_large;
  if (command == "enumerate") {
    j["set"] = set;
    j["irreducible_only"] = irreducible_only;
  }
  if (command == "mu" || command == "express") j["diagram"] = diagram;
  if (command == "closure") j["seed"] = seed;
  if (command == "rank") j["ring"] = ring;
  return j;
}

RunResult run(const RunConfig& cfg) {
  RunResult res;
  json rep = {{"schema_version", kSchemaVersion}, {"command", cfg.command}};
  const unsigned threads = cfg.threads ? cfg.threads : default_threads();
  const auto start = Clock::now();
  try {
    if (cfg.format == Format::kCsv && cfg.command != "counts" &&
        cfg.command != "verify") {
      throw Error(ErrorCode::kInvalidArgument,
                  "csv output is available for counts and verify only");
    }
    bool ok = true;
    if (cfg.command == "counts") {
      ok = cmd_counts(cfg, rep);
    } else if (cfg.command == "verify") {
      ok = cmd_verify(cfg, threads, rep);
    } else {
      GenusData data(cfg.genus, cfg, threads);
      if (cfg.command == "enumerate") {
        ok = cmd_enumerate(cfg, data, rep);
      } else if (cfg.command == "lagrangians") {
        ok = cmd_lagrangians(cfg, data, rep);
      } else if (cfg.command == "lines") {
        ok = cmd_lines(cfg, data, rep);
      } else if (cfg.command == "closure") {
        ok = cmd_closure(cfg, data, rep);
      } else if (cfg.command == "mu") {
        ok = cmd_mu(cfg, data, rep);
      } else if (cfg.command == "rank") {
        ok = cmd_rank(cfg, data, rep);
      } else if (cfg.command == "verify-basis") {
        ok = cmd_verify_basis(cfg, data, rep);
      } else if (cfg.command == "express") {
        ok = cmd_express(cfg, data, rep);
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "unknown command: " + cfg.command);
      }
    }
    rep["match"] = ok;
    rep["elapsed_seconds"] =
        std::chrono::duration<double>(Clock::now() - start).count();
    res.exit_status = ok ? 0 : 1;
  } catch (const Error& e) {
    rep = {{"schema_version", kSchemaVersion},
           {"command", cfg.command},
           {"error",
            {{"code", error_code_name(e.code())},
             {"status", static_cast<int>(e.code())},
             {"message", e.what()}}}};
    res.exit_status = 2;
  } catch (const std::bad_alloc&) {
    rep = {{"schema_version", kSchemaVersion},
           {"command", cfg.command},
           {"error",
            {{"code", error_code_name(ErrorCode::kResourceLimit)},
             {"status", static_cast<int>(ErrorCode::kResourceLimit)},
             {"message", "out of memory"}}}};
    res.exit_status = 2;
  }
  switch (cfg.format) {
    case Format::kJson: res.rendered = rep.dump(2) + "\n"; break;
    case Format::kText: res.rendered = render_text(cfg, rep); break;
    case Format::kCsv:
      res.rendered = rep.contains("error") ? render_text(cfg, rep)
                                           : render_csv(cfg, rep);
      break;
  }
  res.report = std::move(rep);
  try {
    write_output(cfg, res.rendered);
  } catch (const Error& e) {
    res.exit_status = 2;
    res.rendered = std::string("error: ") + e.what() + "\n";
  }
  return res;
}

json parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSyntax, std::string("report: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") ||
      !j["schema_version"].is_string()) {
    throw Error(ErrorCode::kSchemaVersion, "report has no schema_version");
  }
  const auto theirs = j["schema_version"].get<std::string>();
  auto major = [](const std::string& v) -> long {
    const auto dot = v.find('.');
    try {
      return std::stol(v.substr(0, dot));
    } catch (const std::exception&) {
      return -1;
    }
  };
  const long ours = major(kSchemaVersion);
  const long m = major(theirs);
  if (m < 0) {
    throw Error(ErrorCode::kSchemaVersion,
                "malformed schema_version " + theirs);
  }
  if (m > ours) {
    throw Error(ErrorCode::kSchemaVersion,
                "report schema " + theirs + " is newer than supported " +
                    kSchemaVersion);
  }
  return j;
}

}  // namespace sptri::workbench
