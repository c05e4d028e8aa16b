#ifndef MATCENSUS_H
#define MATCENSUS_H

/* This file is generated by cbindgen from matcensus-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum McStatus {
  MC_STATUS_OK = 0,
  // Internal failure (non-convergence, panic).
  MC_STATUS_INTERNAL = 1,
  // A parameter failed validation.
  MC_STATUS_INVALID_ARGUMENT = 2,
  // The exact-mode iteration budget was exceeded.
  MC_STATUS_BUDGET_EXCEEDED = 3,
} McStatus;

// Opaque census result handle; release with `mc_census_result_free`.
typedef struct McCensusResult McCensusResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the underlying engine, as a static string (do not free).
const char *mc_version(void);

// Frees a string returned by any `mc_*` call.
//
// # Safety
// `s` must be a pointer previously returned by this library and not yet
// freed; passing anything else is undefined behavior.
void mc_string_free(char *s);

// Frees a census result handle.
//
// # Safety
// `res` must come from an `mc_count_*` call and not be freed twice.
void mc_census_result_free(struct McCensusResult *res);

// Counts n x n box matrices with discriminant `d` (decimal string), or the
// full histogram when `d` is NULL. `budget` of 0 means the default 10^10.
//
// # Safety
// `d` must be NULL or a valid NUL-terminated string; `out` must be a valid
// pointer to a result slot.
enum McStatus mc_count_discr(uint32_t n,
                             int64_t h,
                             const char *d,
                             uint64_t budget,
                             uint32_t workers,
                             struct McCensusResult **out);

// Counts n x n box matrices that are not diagonalisable over C.
//
// # Safety
// `out` must be a valid pointer to a result slot.
enum McStatus mc_count_nondiag(uint32_t n,
                               int64_t h,
                               uint64_t budget,
                               uint32_t workers,
                               struct McCensusResult **out);

// Single event count of a census result; fails on histogram results.
//
// # Safety
// `res` must be a live handle; `out` a valid slot.
enum McStatus mc_census_result_count(const struct McCensusResult *res, uint64_t *out);

// Full JSON rendering of a census result (counters, visit count, timing).
// The returned string is owned by the caller; free with `mc_string_free`.
//
// # Safety
// `res` must be a live handle; `out` a valid slot.
enum McStatus mc_census_result_json(const struct McCensusResult *res, char **out);

// Exact R_2(d, H) by the closed-form counter, as a decimal string.
//
// # Safety
// `out` must be a valid slot; free the string with `mc_string_free`.
enum McStatus mc_r2_count(int64_t d, int64_t h, char **out);

// Exact P_2(H; f) for a monic quadratic given as comma-separated
// coefficients, constant term first (for example "1,-2,1").
//
// # Safety
// `f` must be a valid NUL-terminated string; `out` a valid slot.
enum McStatus mc_p2_count(const char *f, int64_t h, char **out);

// Exact witness-family cardinality at (n, H), as a decimal string.
//
// # Safety
// `out` must be a valid slot; free the string with `mc_string_free`.
enum McStatus mc_witness_count(uint32_t n, int64_t h, char **out);

// The exponent gain Delta_n.
//
// # Safety
// `out` must be a valid slot.
enum McStatus mc_delta_n(uint64_t n, int64_t *out);

// Discriminant of an integer matrix given in the compact text form
// "n:e11,e12,...,enn", as a decimal string.
//
// # Safety
// `matrix` must be a valid NUL-terminated string; `out` a valid slot.
enum McStatus mc_discr_matrix(const char *matrix, char **out);

// Brute-force Carlitz count of monic non-squarefree degree-n polynomials
// over F_p.
//
// # Safety
// `out` must be a valid slot.
enum McStatus mc_carlitz_count(uint32_t p, uint32_t n, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATCENSUS_H */
