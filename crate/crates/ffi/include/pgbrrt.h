#ifndef PGBRRT_H
#define PGBRRT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgbStatus {
  PGB_STATUS_OK = 0,
  /**
   * The run finished without a solution. The run handle is still produced.
   */
  PGB_STATUS_NO_PATH = 1,
  PGB_STATUS_NULL_POINTER = 2,
  PGB_STATUS_INVALID_ARGUMENT = 3,
  PGB_STATUS_DIMENSION_MISMATCH = 4,
  PGB_STATUS_DEGENERATE_ENVIRONMENT = 5,
  PGB_STATUS_PARSE = 6,
  PGB_STATUS_VALIDATION = 7,
  PGB_STATUS_IO = 8,
  PGB_STATUS_BUFFER_TOO_SMALL = 9,
  PGB_STATUS_INTERNAL = 10,
} PgbStatus;

typedef enum PgbPlanner {
  PGB_PLANNER_RRT_STAR = 0,
  PGB_PLANNER_P_RRT_STAR = 1,
  PGB_PLANNER_B_RRT_STAR = 2,
  PGB_PLANNER_IB_RRT_STAR = 3,
  PGB_PLANNER_PB_RRT_STAR = 4,
  PGB_PLANNER_PIB_RRT_STAR = 5,
} PgbPlanner;

/**
 * A validated scenario.
 */
typedef struct PgbEnvironment PgbEnvironment;

/**
 * The outcome of one planner run.
 */
typedef struct PgbRun PgbRun;

/**
 * Run options. Zero (or a negative `n_steps`) keeps the library default for
 * that field. Start from [`pgb_options_default`].
 */
typedef struct PgbOptions {
  uint64_t seed;
  uint64_t max_iterations;
  double gamma;
  double eps_steer;
  double k_p;
  double eps_pot;
  double d_obs_star;
  int32_t n_steps;
  bool stop_on_first;
} PgbOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *pgb_version(void);

/**
 * Message for the last failing call on this thread, or NULL. Valid until
 * the next call into this library on the same thread.
 */
const char *pgb_last_error_message(void);

struct PgbOptions pgb_options_default(void);

/**
 * Parses a scenario from a JSON string.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum PgbStatus pgb_environment_from_json(const char *json, struct PgbEnvironment **out);

/**
 * Loads a scenario file.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` a writable pointer.
 */
enum PgbStatus pgb_environment_from_file(const char *path, struct PgbEnvironment **out);

/**
 * # Safety
 * `env` must be NULL or a handle from `pgb_environment_from_*` not yet freed.
 */
void pgb_environment_free(struct PgbEnvironment *env);

/**
 * Configuration-space dimension, or 0 for a NULL handle.
 *
 * # Safety
 * `env` must be NULL or a live environment handle.
 */
size_t pgb_environment_dimension(const struct PgbEnvironment *env);

/**
 * Runs one planner. Defaults come from `PGBRRT_DEFAULTS` when set.
 * Returns `PGB_STATUS_NO_PATH` with a valid `*out` when no solution was
 * found. `options` may be NULL.
 *
 * # Safety
 * `env` must be a live environment handle, `options` NULL or readable,
 * and `out` writable.
 */
enum PgbStatus pgb_plan(const struct PgbEnvironment *env,
                        enum PgbPlanner planner,
                        const struct PgbOptions *options,
                        struct PgbRun **out);

/**
 * # Safety
 * `run` must be NULL or a handle from [`pgb_plan`] not yet freed.
 */
void pgb_run_free(struct PgbRun *run);

/**
 * Best path cost.
 *
 * # Safety
 * `run` must be a live run handle and `out` writable.
 */
enum PgbStatus pgb_run_cost(const struct PgbRun *run, double *out);

/**
 * Number of waypoints on the best path, 0 when there is none.
 *
 * # Safety
 * `run` must be NULL or a live run handle.
 */
size_t pgb_run_path_len(const struct PgbRun *run);

/**
 * Copies the best path into `buf` as `path_len * dimension` doubles,
 * waypoint-major. `len` is the capacity of `buf` in doubles.
 *
 * # Safety
 * `run` must be a live run handle and `buf` writable for `len` doubles.
 */
enum PgbStatus pgb_run_path_copy(const struct PgbRun *run, double *buf, size_t len);

/**
 * Iterations executed.
 *
 * # Safety
 * `run` must be NULL or a live run handle.
 */
uint64_t pgb_run_iterations(const struct PgbRun *run);

/**
 * Iteration of the first solution, 0 when there is none.
 *
 * # Safety
 * `run` must be NULL or a live run handle.
 */
uint64_t pgb_run_first_solution_iteration(const struct PgbRun *run);

/**
 * Rewires per iteration.
 *
 * # Safety
 * `run` must be NULL or a live run handle.
 */
double pgb_run_theta(const struct PgbRun *run);

/**
 * The run document (scenario, config and result) as JSON, the same as the
 * CLI `plan --out` file. Free with [`pgb_string_free`]. NULL on error.
 *
 * # Safety
 * `run` must be a live run handle.
 */
char *pgb_run_to_json(const struct PgbRun *run);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void pgb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PGBRRT_H */
