/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PWLHAM_H
#define PWLHAM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PwlClosureKind {
  PWL_CLOSURE_KIND_NO_SOLUTION = 0,
  PWL_CLOSURE_KIND_UNIQUE_CANDIDATE = 1,
  PWL_CLOSURE_KIND_CONTINUUM = 2,
} PwlClosureKind;

typedef enum PwlStatus {
  PWL_STATUS_OK = 0,
  PWL_STATUS_NULL_POINTER = 1,
  PWL_STATUS_INVALID_INPUT = 2,
  PWL_STATUS_DEGENERATE_FIELD = 3,
  PWL_STATUS_NO_CYCLE = 4,
  PWL_STATUS_NUMERICAL_FAILURE = 5,
  PWL_STATUS_LAYOUT_MISMATCH = 6,
  PWL_STATUS_PANIC = 7,
} PwlStatus;

/**
 * Opaque certified limit cycle.
 */
typedef struct PwlCycle PwlCycle;

/**
 * Opaque piecewise system.
 */
typedef struct PwlSystem PwlSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON system definition.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum PwlStatus pwl_system_from_json(const char *json, struct PwlSystem **out);

/**
 * Builds a two-zone system from 10 coefficients: `a, b, c, alpha, beta` for
 * the left zone, then for the right zone.
 *
 * # Safety
 * `coefficients` must point to 10 doubles and `out` must be valid.
 */
enum PwlStatus pwl_system_new_two_zone(const double *coefficients, struct PwlSystem **out);

/**
 * Builds a three-zone system from 15 coefficients, zones left to right.
 *
 * # Safety
 * `coefficients` must point to 15 doubles and `out` must be valid.
 */
enum PwlStatus pwl_system_new_three_zone(const double *coefficients, struct PwlSystem **out);

/**
 * # Safety
 * `system` must come from this library and not have been freed. Null is ignored.
 */
void pwl_system_free(struct PwlSystem *system);

/**
 * # Safety
 * `system` and `out` must be valid.
 */
enum PwlStatus pwl_system_is_continuous(const struct PwlSystem *system, bool *out);

/**
 * Singularity types left to right, e.g. `"SCC"`. Free with [`pwl_string_free`].
 *
 * # Safety
 * `system` and `out` must be valid.
 */
enum PwlStatus pwl_system_configuration(const struct PwlSystem *system, char **out);

/**
 * Solves the closure equations. `ordinates` receives `y0, y1, y2, y3` when
 * the kind is a unique candidate and is left untouched otherwise.
 *
 * # Safety
 * `system` and `kind` must be valid; `ordinates` must hold 4 doubles.
 */
enum PwlStatus pwl_solve(const struct PwlSystem *system,
                         enum PwlClosureKind *kind,
                         double *ordinates);

/**
 * Finds and certifies the crossing limit cycle. Returns
 * [`PwlStatus::NoCycle`] with `*out` null when there is none.
 *
 * # Safety
 * `system` and `out` must be valid.
 */
enum PwlStatus pwl_find_cycle(const struct PwlSystem *system, struct PwlCycle **out);

/**
 * # Safety
 * `cycle` must come from this library and not have been freed. Null is ignored.
 */
void pwl_cycle_free(struct PwlCycle *cycle);

/**
 * `y0, y1, y2, y3`.
 *
 * # Safety
 * `cycle` must be valid; `out` must hold 4 doubles.
 */
enum PwlStatus pwl_cycle_ordinates(const struct PwlCycle *cycle, double *out);

/**
 * Flight times in the right, center, left and center zones.
 *
 * # Safety
 * `cycle` must be valid; `out` must hold 4 doubles.
 */
enum PwlStatus pwl_cycle_flight_times(const struct PwlCycle *cycle, double *out);

/**
 * # Safety
 * `cycle` and `out` must be valid.
 */
enum PwlStatus pwl_cycle_period(const struct PwlCycle *cycle, double *out);

/**
 * Full certificate as JSON. Free with [`pwl_string_free`].
 *
 * # Safety
 * `cycle` and `out` must be valid.
 */
enum PwlStatus pwl_cycle_to_json(const struct PwlCycle *cycle, char **out);

/**
 * First return to `x = 1` of the orbit leaving `(1, y)` into the right zone,
 * computed numerically with accuracy target `tol`.
 *
 * # Safety
 * `system`, `out_y` and `out_time` must be valid.
 */
enum PwlStatus pwl_return_map(const struct PwlSystem *system,
                              double y,
                              double tol,
                              double *out_y,
                              double *out_time);

/**
 * Fixed point of the numerical return map in `[lo, hi]`.
 *
 * # Safety
 * `system`, `out_y` and `out_period` must be valid.
 */
enum PwlStatus pwl_fixed_point(const struct PwlSystem *system,
                               double lo,
                               double hi,
                               double tol,
                               double *out_y,
                               double *out_period);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void pwl_string_free(char *s);

/**
 * Description of the last failure on this thread; empty after a success.
 * The pointer stays valid until the next call into this library on the same
 * thread.
 */
const char *pwl_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PWLHAM_H */
