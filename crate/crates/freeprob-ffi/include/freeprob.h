/* C interface to the freeprob verification toolkit. */

#ifndef FREEPROB_H
#define FREEPROB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an FFI call. Anything but `Ok` leaves a message retrievable
 * through `fp_last_error_message`.
 */
typedef enum FpStatus {
  FP_STATUS_OK = 0,
  FP_STATUS_NULL_ARGUMENT = 1,
  FP_STATUS_INVALID_UTF8 = 2,
  /**
   * The scenario could not be parsed or executed: malformed JSON,
   * unknown fields, unsupported schema version, invalid parameters.
   */
  FP_STATUS_SCHEMA_VIOLATION = 3,
  FP_STATUS_INTERNAL_PANIC = 4,
} FpStatus;

/**
 * Completed run of one scenario. Opaque; query through `fp_report_*`.
 */
typedef struct FpReport FpReport;

/**
 * Optional overrides applied on top of scenario-supplied values. Each
 * `has_*` flag gates the field next to it; pass NULL to use defaults.
 */
typedef struct FpConfig {
  bool has_seed;
  uint64_t seed;
  bool has_tol;
  double tol;
  bool has_depth;
  size_t depth;
  bool has_trials;
  uint64_t trials;
} FpConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string. Never freed by the caller.
 */
const char *fp_version(void);

/**
 * Message describing the most recent failure on this thread, or NULL.
 * Valid until the next `fp_*` call on the same thread; never freed by
 * the caller.
 */
const char *fp_last_error_message(void);

/**
 * Parse and execute a scenario given as a JSON document.
 *
 * On `Ok`, `*out_report` owns a report handle that must be released with
 * `fp_report_free`. The report may still describe failing checks; inspect
 * `fp_report_passed`. On any other status `*out_report` is NULL.
 *
 * # Safety
 * `scenario_json` must point to a NUL-terminated string and `out_report`
 * to writable pointer storage; `config` is either NULL or a valid
 * `FpConfig`.
 */
enum FpStatus fp_run_scenario(const char *scenario_json,
                              const struct FpConfig *config,
                              struct FpReport **out_report);

/**
 * 1 if every check in the report passed, 0 otherwise, -1 on NULL.
 *
 * # Safety
 * `report` is NULL or a handle from `fp_run_scenario` not yet freed.
 */
int fp_report_passed(const struct FpReport *report);

/**
 * Number of checks in the report, or -1 on NULL.
 *
 * # Safety
 * `report` is NULL or a handle from `fp_run_scenario` not yet freed.
 */
int64_t fp_report_check_count(const struct FpReport *report);

/**
 * Report serialized as JSON. Caller frees with `fp_string_free`; NULL on
 * NULL input.
 *
 * # Safety
 * `report` is NULL or a handle from `fp_run_scenario` not yet freed.
 */
char *fp_report_to_json(const struct FpReport *report);

/**
 * Human-readable summary table, one line per check. Caller frees with
 * `fp_string_free`; NULL on NULL input.
 *
 * # Safety
 * `report` is NULL or a handle from `fp_run_scenario` not yet freed.
 */
char *fp_report_render_text(const struct FpReport *report);

/**
 * Release a report handle. NULL is ignored.
 *
 * # Safety
 * `report` is NULL or a handle from `fp_run_scenario` not freed before.
 */
void fp_report_free(struct FpReport *report);

/**
 * JSON text of a bundled scenario by name, or NULL if the name is
 * unknown. Caller frees with `fp_string_free`.
 *
 * # Safety
 * `name` is NULL or points to a NUL-terminated string.
 */
char *fp_bundled_scenario(const char *name);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` was returned by an `fp_*` function documented as caller-freed and
 * has not been freed before.
 */
void fp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREEPROB_H */
