/* C interface of the hoverplan UAV data-collection planner. */

#ifndef HOVERPLAN_H
#define HOVERPLAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum HoverplanStatus {
  /**
   * The call succeeded.
   */
  HoverplanStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  HoverplanStatus_NullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  HoverplanStatus_InvalidUtf8 = 2,
  /**
   * The input was rejected; hoverplan_last_error has the reason.
   */
  HoverplanStatus_InvalidArgument = 3,
  /**
   * The operation failed; hoverplan_last_error has the reason.
   */
  HoverplanStatus_RuntimeError = 4,
  /**
   * An index argument was out of range.
   */
  HoverplanStatus_OutOfRange = 5,
  /**
   * The library caught a panic; hoverplan_last_error has the message.
   */
  HoverplanStatus_Panic = 6,
} HoverplanStatus;

/**
 * Parsed experiment configuration (opaque).
 */
typedef struct HoverplanConfig HoverplanConfig;

/**
 * Finished experiment: run records plus everything exports need (opaque).
 */
typedef struct HoverplanResults HoverplanResults;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hoverplan_version(void);

/**
 * Copy the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `cap` bytes). Returns the full length including the NUL, so a
 * return value larger than `cap` means the copy was truncated.
 */
size_t hoverplan_last_error(char *buf, size_t cap);

/**
 * Parse and validate a TOML configuration. On success `*out` owns a new
 * handle that must be released with hoverplan_config_free.
 */
enum HoverplanStatus hoverplan_config_parse(const char *toml_text, struct HoverplanConfig **out);

/**
 * Create the default configuration (the reference experiment).
 */
enum HoverplanStatus hoverplan_config_default(struct HoverplanConfig **out);

/**
 * Override the master seed of a parsed configuration.
 */
enum HoverplanStatus hoverplan_config_set_master_seed(struct HoverplanConfig *cfg,
                                                      uint64_t master_seed);

/**
 * Release a configuration handle. Null is a no-op.
 */
void hoverplan_config_free(struct HoverplanConfig *cfg);

/**
 * Run the configured experiment. On success `*out` owns a new results
 * handle that must be released with hoverplan_results_free.
 */
enum HoverplanStatus hoverplan_run(const struct HoverplanConfig *cfg,
                                   struct HoverplanResults **out);

/**
 * Release a results handle. Null is a no-op.
 */
void hoverplan_results_free(struct HoverplanResults *res);

/**
 * Number of run records (algorithms x runs).
 */
enum HoverplanStatus hoverplan_results_run_count(const struct HoverplanResults *res, size_t *out);

/**
 * Copy record `index`'s algorithm label into `buf` (NUL-terminated,
 * truncated to `cap`). Returns the status; the label is never longer than
 * 256 bytes.
 */
enum HoverplanStatus hoverplan_results_algorithm(const struct HoverplanResults *res,
                                                 size_t index,
                                                 char *buf,
                                                 size_t cap);

/**
 * Run number (1-based) and per-run seed of record `index`.
 */
enum HoverplanStatus hoverplan_results_run_info(const struct HoverplanResults *res,
                                                size_t index,
                                                uint32_t *out_run,
                                                uint64_t *out_seed);

/**
 * Number of archive solutions in record `index`.
 */
enum HoverplanStatus hoverplan_results_front_len(const struct HoverplanResults *res,
                                                 size_t index,
                                                 size_t *out);

/**
 * Copy record `index`'s archive objectives into `buf` as consecutive
 * [rate_bps, device_energy_J, uav_energy_J] triples. `cap` counts f64
 * slots; `*written` receives the number of slots filled. Fails with
 * OutOfRange when the buffer cannot hold the whole front.
 */
enum HoverplanStatus hoverplan_results_objectives(const struct HoverplanResults *res,
                                                  size_t index,
                                                  double *buf,
                                                  size_t cap,
                                                  size_t *written);

/**
 * Write the full result-file set (summary, archives, scatter, trajectories,
 * segments) into `out_dir`, creating it if needed.
 */
enum HoverplanStatus hoverplan_results_export(const struct HoverplanResults *res,
                                              const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOVERPLAN_H */
