#ifndef OCEA_H
#define OCEA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum OceaStatus {
  OCEA_STATUS_OK = 0,
  OCEA_STATUS_NULL_POINTER = 1,
  OCEA_STATUS_INVALID_ARGUMENT = 2,
  OCEA_STATUS_UNKNOWN_NAME = 3,
  OCEA_STATUS_UNSUPPORTED = 4,
  OCEA_STATUS_EVALUATION = 5,
  OCEA_STATUS_BUFFER_TOO_SMALL = 6,
  OCEA_STATUS_PANIC = 7,
} OceaStatus;

/**
 * Problem, algorithm and parameters of one run.
 */
typedef struct OceaConfig OceaConfig;

/**
 * Final archive and metric trace of a finished run.
 */
typedef struct OceaResult OceaResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a configuration for `problem` (a registered name such as
 * "ZDT1") and `algorithm` ("ocea" or "nsga2") with default parameters.
 *
 * # Safety
 * `problem` and `algorithm` must be NUL-terminated strings; `out` must be
 * writable.
 */
enum OceaStatus ocea_config_new(const char *problem,
                                const char *algorithm,
                                struct OceaConfig **out);

/**
 * Sets a numeric parameter: population, generations, k_max, beta, f, cr,
 * pm, eta_m, dimension or cadence. Integer keys reject fractions. The whole
 * configuration is revalidated; on failure it is left unchanged.
 *
 * # Safety
 * `config` must come from [`ocea_config_new`]; `key` must be NUL-terminated.
 */
enum OceaStatus ocea_config_set(struct OceaConfig *config, const char *key, double value);

/**
 * # Safety
 * `config` must come from [`ocea_config_new`].
 */
enum OceaStatus ocea_config_set_seed(struct OceaConfig *config, uint64_t seed);

/**
 * # Safety
 * `config` must come from [`ocea_config_new`] or be null; it must not be
 * used afterwards.
 */
void ocea_config_free(struct OceaConfig *config);

/**
 * Runs the configured optimization to completion.
 *
 * # Safety
 * `config` must come from [`ocea_config_new`]; `out` must be writable.
 */
enum OceaStatus ocea_run(const struct OceaConfig *config, struct OceaResult **out);

/**
 * Archive size; 0 for a null handle.
 *
 * # Safety
 * `result` must come from [`ocea_run`] or be null.
 */
size_t ocea_result_len(const struct OceaResult *result);

/**
 * Objective count; 0 for a null handle.
 *
 * # Safety
 * `result` must come from [`ocea_run`] or be null.
 */
size_t ocea_result_objectives(const struct OceaResult *result);

/**
 * Decision-vector length; 0 for a null handle.
 *
 * # Safety
 * `result` must come from [`ocea_run`] or be null.
 */
size_t ocea_result_variables(const struct OceaResult *result);

/**
 * Number of recorded trace rows; 0 for a null handle.
 *
 * # Safety
 * `result` must come from [`ocea_run`] or be null.
 */
size_t ocea_result_trace_len(const struct OceaResult *result);

/**
 * Copies the archive's objective vectors, row-major (`len * objectives`).
 *
 * # Safety
 * `result` must come from [`ocea_run`]; `out` must hold `capacity` doubles.
 */
enum OceaStatus ocea_result_front(const struct OceaResult *result, double *out, size_t capacity);

/**
 * Copies the archive's decision vectors, row-major (`len * variables`).
 *
 * # Safety
 * `result` must come from [`ocea_run`]; `out` must hold `capacity` doubles.
 */
enum OceaStatus ocea_result_decisions(const struct OceaResult *result,
                                      double *out,
                                      size_t capacity);

/**
 * Copies the metric trace as rows of `generation, igd, hv, wall_time`
 * (`trace_len * 4` doubles).
 *
 * # Safety
 * `result` must come from [`ocea_run`]; `out` must hold `capacity` doubles.
 */
enum OceaStatus ocea_result_trace(const struct OceaResult *result, double *out, size_t capacity);

/**
 * # Safety
 * `result` must come from [`ocea_run`] or be null; it must not be used
 * afterwards.
 */
void ocea_result_free(struct OceaResult *result);

/**
 * Hypervolume of `count` points of `m` objectives (row-major) against
 * `reference`. Supports two and three objectives.
 *
 * # Safety
 * `points` must hold `count * m` doubles, `reference` `m` doubles; `out`
 * must be writable.
 */
enum OceaStatus ocea_hypervolume(const double *points,
                                 size_t count,
                                 size_t m,
                                 const double *reference,
                                 double *out);

/**
 * IGD of `count` approximation points against `reference_count` reference
 * points, both row-major with `m` objectives.
 *
 * # Safety
 * The arrays must hold `count * m` and `reference_count * m` doubles; `out`
 * must be writable.
 */
enum OceaStatus ocea_igd(const double *approx,
                         size_t count,
                         const double *reference,
                         size_t reference_count,
                         size_t m,
                         double *out);

/**
 * 1 if `a` Pareto-dominates `b` (minimization), 0 if not, -1 on a null
 * pointer.
 *
 * # Safety
 * `a` and `b` must hold `m` doubles each.
 */
int ocea_dominates(const double *a, const double *b, size_t m);

/**
 * Message of the last failure on this thread; empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *ocea_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ocea_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCEA_H */
