#include "sptri/sptri.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>

#include "sptri/diagram.hpp"
#include "sptri/dps.hpp"
#include "sptri/error.hpp"
#include "sptri/lattice.hpp"
#include "sptri/mu.hpp"
#include "sptri/workbench.hpp"

struct sptri_diagram {
  sptri::diagram::CrossinglessDiagram d;
};

struct sptri_space {
  sptri::dps::DualPolarSpace space;
};

struct sptri_lattice {
  sptri::lattice::LatticePresentation lat;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <class F>
int guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return SPTRI_OK;
  } catch (const sptri::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPTRI_E_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPTRI_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SPTRI_E_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) {
    throw sptri::Error(sptri::ErrorCode::kInvalidArgument,
                       std::string(what) + " is null");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += '\n';
    out += v[i];
  }
  return out;
}

void check_point(const sptri_space* s, uint32_t p) {
  if (p >= s->space.point_count()) {
    throw sptri::Error(sptri::ErrorCode::kInvalidArgument,
                       "point index out of range");
  }
}

}  // namespace

extern "C" {

const char* sptri_version(void) { return "1.0.0"; }

const char* sptri_report_schema_version(void) {
  return sptri::workbench::report_schema_version();
}

const char* sptri_status_name(int status) {
  if (status == SPTRI_OK) return "Ok";
  if (status < SPTRI_E_INVALID_ARGUMENT || status > SPTRI_E_INTERNAL) {
    return "Unknown";
  }
  return sptri::error_code_name(static_cast<sptri::ErrorCode>(status));
}

const char* sptri_last_error(void) { return g_last_error.c_str(); }

void sptri_string_free(char* s) { std::free(s); }
void sptri_index_free(uint32_t* p) { std::free(p); }

int sptri_diagram_parse(const char* text, size_t genus, sptri_diagram** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = nullptr;
    auto d = sptri::diagram::parse(text, genus);
    *out = new sptri_diagram{std::move(d)};
  });
}

void sptri_diagram_free(sptri_diagram* d) { delete d; }

int sptri_diagram_genus(const sptri_diagram* d, size_t* out) {
  return guard([&] {
    need(d, "diagram");
    need(out, "out");
    *out = d->d.genus();
  });
}

int sptri_diagram_print(const sptri_diagram* d, char** out) {
  return guard([&] {
    need(d, "diagram");
    need(out, "out");
    *out = dup(sptri::diagram::print(d->d));
  });
}

int sptri_diagram_is_special(const sptri_diagram* d, int* out) {
  return guard([&] {
    need(d, "diagram");
    need(out, "out");
    *out = sptri::diagram::is_special(d->d) ? 1 : 0;
  });
}

int sptri_diagram_is_irreducible(const sptri_diagram* d, int* out) {
  return guard([&] {
    need(d, "diagram");
    need(out, "out");
    *out = sptri::diagram::is_irreducible(d->d) ? 1 : 0;
  });
}

int sptri_diagram_mu(const sptri_diagram* d, char** rows, int64_t* weight) {
  return guard([&] {
    need(d, "diagram");
    need(rows, "rows");
    const auto m = sptri::mu::mu(d->d);
    if (weight != nullptr) *weight = m.weight.get_si();
    *rows = dup(join_lines(m.point.to_strings()));
  });
}

int sptri_enumerate(size_t genus, const char* set, int irreducible_only,
                    char** out, size_t* count) {
  return guard([&] {
    need(set, "set");
    need(out, "out");
    const std::string which(set);
    std::vector<sptri::diagram::CrossinglessDiagram> list;
    if (which == "special") {
      list = sptri::diagram::enumerate_special(genus);
    } else if (which == "almost-special") {
      list = sptri::diagram::enumerate_almost_special(genus);
    } else {
      throw sptri::Error(sptri::ErrorCode::kInvalidArgument,
                         "set must be special or almost-special");
    }
    std::vector<std::string> symbols;
    for (const auto& d : list) {
      if (irreducible_only && !sptri::diagram::is_irreducible(d)) continue;
      symbols.push_back(sptri::diagram::print(d));
    }
    if (count != nullptr) *count = symbols.size();
    *out = dup(join_lines(symbols));
  });
}

int sptri_count(const char* which, size_t genus, char** out) {
  return guard([&] {
    need(which, "which");
    need(out, "out");
    const std::string w(which);
    mpz_class v;
    if (w == "N") {
      v = sptri::diagram::count_N(genus);
    } else if (w == "n") {
      v = sptri::diagram::count_n(genus);
    } else if (w == "m") {
      v = sptri::diagram::count_m(genus);
    } else {
      throw sptri::Error(sptri::ErrorCode::kInvalidArgument,
                         "which must be N, n or m");
    }
    *out = dup(v.get_str());
  });
}

int sptri_space_create(size_t genus, unsigned threads, sptri_space** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    auto s = sptri::dps::DualPolarSpace::build(genus, {}, threads ? threads : 1);
    *out = new sptri_space{std::move(s)};
  });
}

void sptri_space_free(sptri_space* s) { delete s; }

int sptri_space_genus(const sptri_space* s, size_t* out) {
  return guard([&] {
    need(s, "space");
    need(out, "out");
    *out = s->space.genus();
  });
}

int sptri_space_point_count(const sptri_space* s, size_t* out) {
  return guard([&] {
    need(s, "space");
    need(out, "out");
    *out = s->space.point_count();
  });
}

int sptri_space_line_count(const sptri_space* s, size_t* out) {
  return guard([&] {
    need(s, "space");
    need(out, "out");
    *out = s->space.line_count();
  });
}

int sptri_space_point_rows(const sptri_space* s, uint32_t point, char** out) {
  return guard([&] {
    need(s, "space");
    need(out, "out");
    check_point(s, point);
    *out = dup(join_lines(s->space.point(point).to_strings()));
  });
}

int sptri_space_line(const sptri_space* s, size_t line, uint32_t points[3]) {
  return guard([&] {
    need(s, "space");
    need(points, "points");
    if (line >= s->space.line_count()) {
      throw sptri::Error(sptri::ErrorCode::kInvalidArgument,
                         "line index out of range");
    }
    const auto& l = s->space.lines()[line];
    for (int i = 0; i < 3; ++i) points[i] = l[i];
  });
}

int sptri_space_third_point(const sptri_space* s, uint32_t p, uint32_t q,
                            uint32_t* out) {
  return guard([&] {
    need(s, "space");
    need(out, "out");
    check_point(s, p);
    check_point(s, q);
    *out = s->space.third_point(p, q);
  });
}

int sptri_space_index_of_diagram(const sptri_space* s, const sptri_diagram* d,
                                 uint32_t* out) {
  return guard([&] {
    need(s, "space");
    need(d, "diagram");
    need(out, "out");
    if (d->d.genus() != s->space.genus()) {
      throw sptri::Error(sptri::ErrorCode::kInvalidArgument,
                         "diagram and space have different genus");
    }
    *out = s->space.index_of(sptri::mu::mu(d->d).point);
  });
}

int sptri_space_closure(const sptri_space* s, const uint32_t* seed,
                        size_t seed_len, uint32_t** out, size_t* out_len) {
  return guard([&] {
    need(s, "space");
    need(out, "out");
    need(out_len, "out_len");
    if (seed_len > 0) need(seed, "seed");
    for (size_t i = 0; i < seed_len; ++i) check_point(s, seed[i]);
    const auto cl = s->space.closure({seed, seed_len});
    auto* buf = static_cast<uint32_t*>(
        std::malloc(std::max<size_t>(cl.size(), 1) * sizeof(uint32_t)));
    if (buf == nullptr) throw std::bad_alloc();
    std::copy(cl.begin(), cl.end(), buf);
    *out = buf;
    *out_len = cl.size();
  });
}

int sptri_lattice_build(const sptri_space* s, sptri_lattice** out) {
  return guard([&] {
    need(s, "space");
    need(out, "out");
    *out = nullptr;
    const auto g = s->space.genus();
    if (g <= 4) {
      *out = new sptri_lattice{sptri::lattice::build_lattice(s->space)};
      return;
    }
    std::set<sptri::dps::PointIndex> gens;
    for (const auto& d : sptri::diagram::enumerate_almost_special(g)) {
      gens.insert(s->space.index_of(sptri::mu::mu(d).point));
    }
    const std::vector<sptri::dps::PointIndex> list(gens.begin(), gens.end());
    *out = new sptri_lattice{
        sptri::lattice::lattice_from_spanning_set(s->space, list)};
  });
}

void sptri_lattice_free(sptri_lattice* l) { delete l; }

int sptri_lattice_free_rank(const sptri_lattice* l, size_t* out) {
  return guard([&] {
    need(l, "lattice");
    need(out, "out");
    *out = l->lat.free_rank;
  });
}

int sptri_lattice_torsion_count(const sptri_lattice* l, size_t* out) {
  return guard([&] {
    need(l, "lattice");
    need(out, "out");
    *out = l->lat.torsion.size();
  });
}

int sptri_lattice_coordinates(const sptri_lattice* l, uint32_t p,
                              int64_t* buf, size_t buf_len) {
  return guard([&] {
    need(l, "lattice");
    need(buf, "buf");
    if (buf_len < l->lat.free_rank) {
      throw sptri::Error(sptri::ErrorCode::kInvalidArgument,
                         "buffer shorter than the free rank");
    }
    const auto c = l->lat.coordinates(p);
    std::copy(c.begin(), c.end(), buf);
  });
}

int sptri_lattice_verify_basis(const sptri_lattice* l, const uint32_t* images,
                               size_t n, int* verdict, char** det) {
  return guard([&] {
    need(l, "lattice");
    need(verdict, "verdict");
    if (n > 0) need(images, "images");
    const auto chk = sptri::lattice::verify_basis({images, n}, l->lat);
    *verdict = static_cast<int>(chk.verdict);
    if (det != nullptr) *det = dup(chk.determinant.get_str());
  });
}

int sptri_lattice_express(const sptri_lattice* l, uint32_t target,
                          const uint32_t* basis, size_t n,
                          char** coefficients, int* residual_zero) {
  return guard([&] {
    need(l, "lattice");
    need(coefficients, "coefficients");
    if (n > 0) need(basis, "basis");
    const auto e = sptri::lattice::express_point(target, {basis, n}, l->lat);
    std::vector<std::string> parts;
    for (const auto& c : e.coefficients) parts.push_back(c.get_str());
    if (residual_zero != nullptr) *residual_zero = e.residual_zero ? 1 : 0;
    *coefficients = dup(join_lines(parts));
  });
}

int sptri_run(const char* config_json, char** report, int* exit_status) {
  return guard([&] {
    need(config_json, "config_json");
    need(report, "report");
    need(exit_status, "exit_status");
    sptri::workbench::json j;
    try {
      j = sptri::workbench::json::parse(config_json);
    } catch (const std::exception& e) {
      throw sptri::Error(sptri::ErrorCode::kSyntax,
                         std::string("config: ") + e.what());
    }
    const auto cfg = sptri::workbench::RunConfig::from_json(j);
    auto res = sptri::workbench::run(cfg);
    *exit_status = res.exit_status;
    *report = dup(res.rendered);
  });
}

}  // extern "C"
