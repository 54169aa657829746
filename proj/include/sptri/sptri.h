#ifndef SPTRI_SPTRI_H
#define SPTRI_SPTRI_H

/*
 * C interface to libsptri: special handlebody diagrams, the dual polar space
 * DSp(2g,2), the map mu and the relation lattice.
 *
 * Every function returning int returns a status code (SPTRI_OK on success).
 * On failure sptri_last_error() describes the most recent error of the
 * calling thread. Strings and arrays handed out by the library are released
 * with sptri_string_free / sptri_index_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef SPTRI_BUILDING_LIBRARY
#    define SPTRI_API __declspec(dllexport)
#  else
#    define SPTRI_API __declspec(dllimport)
#  endif
#else
#  define SPTRI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum sptri_status {
  SPTRI_OK = 0,
  SPTRI_E_INVALID_ARGUMENT = 1,
  SPTRI_E_SYNTAX = 2,
  SPTRI_E_MINIMALITY = 3,
  SPTRI_E_NONCROSSING = 4,
  SPTRI_E_PUNCTURE_RANGE = 5,
  SPTRI_E_NOT_COLLINEAR = 6,
  SPTRI_E_RESOURCE_LIMIT = 7,
  SPTRI_E_INVARIANT = 8,
  SPTRI_E_BASIS_NOT_VERIFIED = 9,
  SPTRI_E_SCHEMA_VERSION = 10,
  SPTRI_E_OVERFLOW = 11,
  SPTRI_E_INTERNAL = 12
};

enum sptri_verdict {
  SPTRI_UNIMODULAR = 0,
  SPTRI_RANK_DEFICIENT = 1,
  SPTRI_NON_INTEGRAL_INVERSE = 2
};

typedef struct sptri_diagram sptri_diagram;
typedef struct sptri_space sptri_space;
typedef struct sptri_lattice sptri_lattice;

SPTRI_API const char* sptri_version(void);
SPTRI_API const char* sptri_report_schema_version(void);
SPTRI_API const char* sptri_status_name(int status);
SPTRI_API const char* sptri_last_error(void);

SPTRI_API void sptri_string_free(char* s);
SPTRI_API void sptri_index_free(uint32_t* p);

/* Diagrams */
SPTRI_API int sptri_diagram_parse(const char* text, size_t genus,
                                  sptri_diagram** out);
SPTRI_API void sptri_diagram_free(sptri_diagram* d);
SPTRI_API int sptri_diagram_genus(const sptri_diagram* d, size_t* out);
SPTRI_API int sptri_diagram_print(const sptri_diagram* d, char** out);
SPTRI_API int sptri_diagram_is_special(const sptri_diagram* d, int* out);
SPTRI_API int sptri_diagram_is_irreducible(const sptri_diagram* d, int* out);
/* Lagrangian rows of mu(d), newline separated, and the weight. */
SPTRI_API int sptri_diagram_mu(const sptri_diagram* d, char** rows,
                               int64_t* weight);

/* Enumeration: canonical symbols, newline separated (the empty diagram is an
 * empty line). set is "special" or "almost-special". */
SPTRI_API int sptri_enumerate(size_t genus, const char* set,
                              int irreducible_only, char** out,
                              size_t* count);

/* Closed-form counts as decimal strings; which is "N", "n" or "m". */
SPTRI_API int sptri_count(const char* which, size_t genus, char** out);

/* Dual polar space */
SPTRI_API int sptri_space_create(size_t genus, unsigned threads,
                                 sptri_space** out);
SPTRI_API void sptri_space_free(sptri_space* s);
SPTRI_API int sptri_space_genus(const sptri_space* s, size_t* out);
SPTRI_API int sptri_space_point_count(const sptri_space* s, size_t* out);
SPTRI_API int sptri_space_line_count(const sptri_space* s, size_t* out);
SPTRI_API int sptri_space_point_rows(const sptri_space* s, uint32_t point,
                                     char** out);
SPTRI_API int sptri_space_line(const sptri_space* s, size_t line,
                               uint32_t points[3]);
SPTRI_API int sptri_space_third_point(const sptri_space* s, uint32_t p,
                                      uint32_t q, uint32_t* out);
SPTRI_API int sptri_space_index_of_diagram(const sptri_space* s,
                                           const sptri_diagram* d,
                                           uint32_t* out);
SPTRI_API int sptri_space_closure(const sptri_space* s, const uint32_t* seed,
                                  size_t seed_len, uint32_t** out,
                                  size_t* out_len);

/* Relation lattice: exact elimination for g <= 4, the spanning-set quotient
 * over mu of the almost-special diagrams above that. The lattice keeps its
 * own copy of what it needs; the space may be freed afterwards. */
SPTRI_API int sptri_lattice_build(const sptri_space* s, sptri_lattice** out);
SPTRI_API void sptri_lattice_free(sptri_lattice* l);
SPTRI_API int sptri_lattice_free_rank(const sptri_lattice* l, size_t* out);
SPTRI_API int sptri_lattice_torsion_count(const sptri_lattice* l,
                                          size_t* out);
/* Writes free_rank coordinates of point p into buf (buf_len >= free_rank). */
SPTRI_API int sptri_lattice_coordinates(const sptri_lattice* l, uint32_t p,
                                        int64_t* buf, size_t buf_len);
/* det is returned as a decimal string; pass NULL to skip it. */
SPTRI_API int sptri_lattice_verify_basis(const sptri_lattice* l,
                                         const uint32_t* images, size_t n,
                                         int* verdict, char** det);
/* Integer coefficients (decimal, newline separated) of point target over
 * the given basis; fails with SPTRI_E_BASIS_NOT_VERIFIED unless unimodular. */
SPTRI_API int sptri_lattice_express(const sptri_lattice* l, uint32_t target,
                                    const uint32_t* basis, size_t n,
                                    char** coefficients, int* residual_zero);

/* Workbench: runs one subcommand from a JSON config and returns the rendered
 * report. exit_status is 0 when every check matched, 1 on a mismatch, 2 on
 * an error record. */
SPTRI_API int sptri_run(const char* config_json, char** report,
                        int* exit_status);

#ifdef __cplusplus
}
#endif

#endif /* SPTRI_SPTRI_H */
