#ifndef BRAIDFIX_H
#define BRAIDFIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum BraidfixStatus {
  BRAIDFIX_STATUS_OK = 0,
  BRAIDFIX_STATUS_NULL_POINTER = 1,
  BRAIDFIX_STATUS_INVALID_UTF8 = 2,
  BRAIDFIX_STATUS_PARSE = 3,
  BRAIDFIX_STATUS_STRAND_MISMATCH = 4,
  BRAIDFIX_STATUS_NOT_A_KNOT = 5,
  BRAIDFIX_STATUS_DOMAIN = 6,
  /**
   * The analysis succeeded but some class is degenerate, so λ is undefined.
   */
  BRAIDFIX_STATUS_DEGENERATE = 7,
  BRAIDFIX_STATUS_INTERNAL = 8,
  BRAIDFIX_STATUS_PANIC = 9,
} BraidfixStatus;

/**
 * Opaque analysis result.
 */
typedef struct BraidfixAnalysis BraidfixAnalysis;

/**
 * Opaque braid word.
 */
typedef struct BraidfixBraid BraidfixBraid;

/**
 * Solver settings; obtain defaults from [`braidfix_solver_config_default`].
 */
typedef struct BraidfixSolverConfig {
  size_t seeds;
  size_t max_iters;
  double residual_tol;
  double dedup_tol;
  double fd_step;
  uint64_t rng_seed;
} BraidfixSolverConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *braidfix_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next call into the library from the same thread.
 */
const char *braidfix_last_error(void);

struct BraidfixSolverConfig braidfix_solver_config_default(void);

/**
 * Parses a braid word such as `"1 -2 1 -2"`. `strands = 0` infers the
 * strand count from the largest generator.
 *
 * # Safety
 * `word` must be a NUL-terminated string and `out` a writable pointer.
 */
enum BraidfixStatus braidfix_braid_parse(const char *word,
                                         size_t strands,
                                         struct BraidfixBraid **out);

/**
 * # Safety
 * `braid` must come from [`braidfix_braid_parse`] or be NULL.
 */
void braidfix_braid_free(struct BraidfixBraid *braid);

/**
 * # Safety
 * `braid` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_braid_strands(const struct BraidfixBraid *braid, size_t *out);

/**
 * # Safety
 * `braid` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_braid_is_knot(const struct BraidfixBraid *braid, bool *out);

/**
 * Runs the full analysis. `config` may be NULL for defaults. On success
 * (including a degenerate result, signalled by
 * [`BraidfixStatus::Degenerate`]) `*out` receives a new handle.
 *
 * # Safety
 * `braid` must be a live handle, `config` NULL or valid, `out` writable.
 */
enum BraidfixStatus braidfix_analyze(const struct BraidfixBraid *braid,
                                     const struct BraidfixSolverConfig *config,
                                     struct BraidfixAnalysis **out);

/**
 * # Safety
 * `analysis` must come from [`braidfix_analyze`] or be NULL.
 */
void braidfix_analysis_free(struct BraidfixAnalysis *analysis);

/**
 * Signed count λ; [`BraidfixStatus::Degenerate`] when undefined.
 *
 * # Safety
 * `analysis` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_analysis_lambda(const struct BraidfixAnalysis *analysis, int64_t *out);

/**
 * # Safety
 * `analysis` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_analysis_class_count(const struct BraidfixAnalysis *analysis,
                                                  size_t *out);

/**
 * # Safety
 * `analysis` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_analysis_signature(const struct BraidfixAnalysis *analysis,
                                                int64_t *out);

/**
 * # Safety
 * `analysis` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_analysis_determinant(const struct BraidfixAnalysis *analysis,
                                                  uint64_t *out);

/**
 * Index of class `k` as `+1` or `-1`, or `0` for a degenerate class.
 *
 * # Safety
 * `analysis` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_analysis_class_index(const struct BraidfixAnalysis *analysis,
                                                  size_t k,
                                                  int32_t *out);

/**
 * Full JSON report. Release the string with [`braidfix_string_free`].
 *
 * # Safety
 * `analysis` must be a live handle and `out` writable.
 */
enum BraidfixStatus braidfix_analysis_json(const struct BraidfixAnalysis *analysis, char **out);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void braidfix_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRAIDFIX_H */
