#ifndef BESICOVER_H
#define BESICOVER_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of an FFI call.
 */
typedef enum BcStatus {
  BC_STATUS_OK = 0,
  BC_STATUS_NULL_POINTER = 1,
  BC_STATUS_INVALID_UTF8 = 2,
  BC_STATUS_INVALID_INPUT = 3,
  BC_STATUS_DIMENSION_MISMATCH = 4,
  BC_STATUS_CAP_EXCEEDED = 5,
  BC_STATUS_ZERO_DENOMINATOR = 6,
  BC_STATUS_HORIZON_OVERFLOW = 7,
  BC_STATUS_VIOLATION = 8,
  BC_STATUS_PRECONDITION = 9,
  BC_STATUS_PARSE = 10,
  BC_STATUS_IO = 11,
  BC_STATUS_PANIC = 12,
} BcStatus;

/**
 * Atomic `Z^d`-action.
 */
typedef struct BcAction BcAction;

/**
 * Ball family: a norm or one-sided cubes.
 */
typedef struct BcFamily BcFamily;

/**
 * Finitely supported or constant observable.
 */
typedef struct BcObservable BcObservable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *bc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bc_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void bc_string_free(char *s);

/**
 * Sets the global lattice point cap.
 */
enum BcStatus bc_set_point_cap(uint64_t cap);

/**
 * Parses an action config such as `{"model":"weighted","d":2,"lambda":"1/2"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BcStatus bc_action_from_json(const char *json, struct BcAction **out);

/**
 * # Safety
 * `a` must come from [`bc_action_from_json`] or be null.
 */
void bc_action_free(struct BcAction *a);

/**
 * Dimension of the acting group.
 *
 * # Safety
 * `a` must be a live handle or null.
 */
size_t bc_action_dim(const struct BcAction *a);

/**
 * Parses `[{"point":[..],"value":"p/q"}, ...]` or `{"constant":"p/q"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BcStatus bc_observable_from_json(const char *json, struct BcObservable **out);

/**
 * # Safety
 * `f` must come from [`bc_observable_from_json`] or be null.
 */
void bc_observable_free(struct BcObservable *f);

/**
 * Parses `{"family":"norm","norm":{...}}` or `{"family":"one_sided_cube","d":2}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BcStatus bc_family_from_json(const char *json, struct BcFamily **out);

/**
 * # Safety
 * `f` must come from [`bc_family_from_json`] or be null.
 */
void bc_family_free(struct BcFamily *f);

/**
 * `ρ(u, ω)` as `"p/q"`.
 *
 * # Safety
 * `u` and `w` must point to `d` integers; `out` must be writable.
 */
enum BcStatus bc_rn_derivative(const struct BcAction *a,
                               const int64_t *u,
                               const int64_t *w,
                               size_t d,
                               char **out);

/**
 * `S_n f(ω)` as `"p/q"`.
 *
 * # Safety
 * Handles must be live; `w` must point to `d` integers; `out` must be writable.
 */
enum BcStatus bc_ball_sum(const struct BcAction *a,
                          const struct BcObservable *f,
                          const struct BcFamily *family,
                          uint64_t n,
                          const int64_t *w,
                          size_t d,
                          char **out);

/**
 * `R_n(f, g)(ω)` as `"p/q"`; `BC_STATUS_ZERO_DENOMINATOR` when undefined.
 *
 * # Safety
 * Handles must be live; `w` must point to `d` integers; `out` must be writable.
 */
enum BcStatus bc_ratio_average(const struct BcAction *a,
                               const struct BcObservable *f,
                               const struct BcObservable *g,
                               const struct BcFamily *family,
                               uint64_t n,
                               const int64_t *w,
                               size_t d,
                               char **out);

/**
 * `sup_{n ≤ n_max} R_n(f, g)(ω)` as `"p/q"`, with the smallest attaining `n`.
 *
 * # Safety
 * Handles must be live; `w` must point to `d` integers; `argmax` and `out`
 * must be writable.
 */
enum BcStatus bc_maximal_ratio(const struct BcAction *a,
                               const struct BcObservable *f,
                               const struct BcObservable *g,
                               const struct BcFamily *family,
                               uint64_t n_max,
                               const int64_t *w,
                               size_t d,
                               uint64_t *argmax,
                               char **out);

/**
 * Staircase witness package for `K` and `M` (a `"p/q"` string) as JSON.
 *
 * # Safety
 * `m` must be a NUL-terminated string; `out` must be writable.
 */
enum BcStatus bc_staircase_witness(uint64_t k, const char *m, char **out);

/**
 * Validates a witness package; writes the JSON report and sets `*valid`.
 *
 * # Safety
 * `package` and `m` must be NUL-terminated strings; `valid` and `out` must be writable.
 */
enum BcStatus bc_witness_validate(const char *package, const char *m, int *valid, char **out);

/**
 * Runs a CLI experiment (`"cover"`, `"concentration"`, `"ratio"`,
 * `"maximal"`) on a JSON config. `seed < 0` keeps the config's seed. Writes
 * the output bytes and the number of findings; findings do not make the
 * call fail.
 *
 * # Safety
 * `command` and `config` must be NUL-terminated strings; `findings` and
 * `out` must be writable.
 */
enum BcStatus bc_run_experiment(const char *command,
                                const char *config,
                                int64_t seed,
                                size_t *findings,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BESICOVER_H */
