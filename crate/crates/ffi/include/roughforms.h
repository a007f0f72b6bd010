#ifndef ROUGHFORMS_H
#define ROUGHFORMS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RfStatus {
  RF_STATUS_OK = 0,
  RF_STATUS_NULL_POINTER = 1,
  RF_STATUS_INVALID_UTF8 = 2,
  RF_STATUS_PARSE = 3,
  RF_STATUS_INVALID_ARGUMENT = 4,
  RF_STATUS_NON_CONVERGENT = 5,
  RF_STATUS_BUDGET = 6,
  RF_STATUS_INTERNAL = 7,
  RF_STATUS_PANIC = 8,
} RfStatus;

/**
 * A parsed expression bound to an ambient dimension.
 */
typedef struct RfExpr RfExpr;

/**
 * The outcome of a Young or Züst integral.
 */
typedef struct RfResult RfResult;

/**
 * Sewing settings. `max_level == 0` picks the degree default.
 */
typedef struct RfSewOptions {
  uint32_t max_level;
  double abs_tol;
  double rel_tol;
  /**
   * 0 for dya, 1 for dya†.
   */
  uint32_t variant;
  bool extrapolate;
} RfSewOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Writes the library defaults into `out`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `RfSewOptions`.
 */
enum RfStatus rf_sew_options_default(struct RfSewOptions *out);

/**
 * Parses `text` as an expression on `ℝ^dim`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum RfStatus rf_expr_parse(const char *text, size_t dim, struct RfExpr **out);

/**
 * Evaluates `e` at the point with `n` coordinates.
 *
 * # Safety
 * `e` must come from [`rf_expr_parse`]; `point` must hold `n` values.
 */
enum RfStatus rf_expr_eval(const struct RfExpr *e, const double *point, size_t n, double *out);

/**
 * # Safety
 * `e` must be null or come from [`rf_expr_parse`], and not be used again.
 */
void rf_expr_free(struct RfExpr *e);

/**
 * `∫ f dg` over the segment with endpoint coordinates `vertices[0..2·dim]`.
 * A null `opts` uses the defaults.
 *
 * # Safety
 * Handles must be live; `vertices` must hold `2·dim` values; `out` writable.
 */
enum RfStatus rf_young(const struct RfExpr *f,
                       const struct RfExpr *g,
                       const double *vertices,
                       size_t dim,
                       const struct RfSewOptions *opts,
                       struct RfResult **out);

/**
 * `∫ f dg1 ∧ dg2` over the triangle with vertex coordinates
 * `vertices[0..3·dim]`.
 *
 * # Safety
 * Handles must be live; `vertices` must hold `3·dim` values; `out` writable.
 */
enum RfStatus rf_zust(const struct RfExpr *f,
                      const struct RfExpr *g1,
                      const struct RfExpr *g2,
                      const double *vertices,
                      size_t dim,
                      const struct RfSewOptions *opts,
                      struct RfResult **out);

/**
 * # Safety
 * `r` must come from [`rf_young`] or [`rf_zust`]; `out` writable.
 */
enum RfStatus rf_result_value(const struct RfResult *r, double *out);

/**
 * # Safety
 * As for [`rf_result_value`].
 */
enum RfStatus rf_result_error_estimate(const struct RfResult *r, double *out);

/**
 * Sewing status: 0 converged, 1 stopped at the maximum level, 2 diverged.
 *
 * # Safety
 * As for [`rf_result_value`].
 */
enum RfStatus rf_result_status(const struct RfResult *r, uint32_t *out);

/**
 * Number of refinement levels in the outer report.
 *
 * # Safety
 * As for [`rf_result_value`].
 */
enum RfStatus rf_result_levels(const struct RfResult *r, size_t *out);

/**
 * Partial sum at refinement level `level`.
 *
 * # Safety
 * As for [`rf_result_value`].
 */
enum RfStatus rf_result_partial_sum(const struct RfResult *r, size_t level, double *out);

/**
 * The full result as JSON; release with [`rf_string_free`].
 *
 * # Safety
 * As for [`rf_result_value`].
 */
enum RfStatus rf_result_to_json(const struct RfResult *r, char **out);

/**
 * # Safety
 * `r` must be null or a live result handle, not used again.
 */
void rf_result_free(struct RfResult *r);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not used again.
 */
void rf_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *rf_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROUGHFORMS_H */
