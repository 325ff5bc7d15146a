#ifndef TWISTFOLD_H
#define TWISTFOLD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TfRegion {
  TF_REGION_RV = 0,
  TF_REGION_RH = 1,
  TF_REGION_RL = 2,
  TF_REGION_OUTSIDE = 3,
} TfRegion;

typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_PARAMS = 2,
  TF_STATUS_OUTSIDE_DOMAIN = 3,
  TF_STATUS_SINGULAR = 4,
  TF_STATUS_NON_HYPERBOLIC = 5,
  TF_STATUS_BRAID_PARSE = 6,
  TF_STATUS_OVERFLOW = 7,
  TF_STATUS_INVALID_POLYLINE = 8,
  TF_STATUS_BUDGET_EXCEEDED = 9,
  TF_STATUS_NUMERICAL = 10,
  TF_STATUS_INVALID_UTF8 = 11,
  TF_STATUS_PANIC = 12,
} TfStatus;

/**
 * Map parameters.
 */
typedef struct TfLtm TfLtm;

/**
 * Material line in the universal cover.
 */
typedef struct TfPolyline TfPolyline;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *tf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tf_version(void);

/**
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum TfStatus tf_ltm_new(double alpha, double beta, int64_t k, int64_t ell, struct TfLtm **out);

/**
 * Parameters of the cat map (`alpha = beta = 1`, `k = ell = 1`).
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum TfStatus tf_ltm_cat_map(struct TfLtm **out);

/**
 * # Safety
 * `ltm` must be null or a handle from `tf_ltm_new` not yet freed.
 */
void tf_ltm_free(struct TfLtm *ltm);

/**
 * # Safety
 * `ltm` must be a live handle; the out-pointers must be writable.
 */
enum TfStatus tf_ltm_forward(const struct TfLtm *ltm,
                             double x,
                             double y,
                             double *out_x,
                             double *out_y);

/**
 * # Safety
 * `ltm` must be a live handle; the out-pointers must be writable.
 */
enum TfStatus tf_ltm_backward(const struct TfLtm *ltm,
                              double x,
                              double y,
                              double *out_x,
                              double *out_y);

/**
 * # Safety
 * `ltm` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_ltm_classify_region(const struct TfLtm *ltm,
                                     double x,
                                     double y,
                                     enum TfRegion *out);

/**
 * Unstable-manifold slope at `(x, y)`. `out_depth` and `out_converged`
 * may be null.
 *
 * # Safety
 * `ltm` must be a live handle; `out_slope` must be writable.
 */
enum TfStatus tf_ltm_unstable_slope(const struct TfLtm *ltm,
                                    double x,
                                    double y,
                                    double *out_slope,
                                    size_t *out_depth,
                                    bool *out_converged);

/**
 * Entropy bound from the associated cat map.
 *
 * # Safety
 * `ltm` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_ltm_lower_bound(const struct TfLtm *ltm, double *out);

/**
 * Entropy bound of a 3-strand braid word such as `"s1 s2^-1"`.
 * `out_pseudo_anosov` may be null.
 *
 * # Safety
 * `word` must be a NUL-terminated string; `out` must be writable.
 */
enum TfStatus tf_h_rods(const char *word, double *out, bool *out_pseudo_anosov);

/**
 * Straight segment between two lifted points.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum TfStatus tf_polyline_segment(double x0,
                                  double y0,
                                  double x1,
                                  double y1,
                                  struct TfPolyline **out);

/**
 * Image of `line` under one map application, as a new handle. A zero
 * `vertex_budget` selects the library default.
 *
 * # Safety
 * `ltm` and `line` must be live handles; `out` must be writable.
 */
enum TfStatus tf_polyline_advect(const struct TfLtm *ltm,
                                 const struct TfPolyline *line,
                                 size_t vertex_budget,
                                 struct TfPolyline **out);

/**
 * # Safety
 * `line` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_polyline_length(const struct TfPolyline *line, double *out);

/**
 * # Safety
 * `line` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_polyline_vertex_count(const struct TfPolyline *line, size_t *out);

/**
 * Number of interior vertices whose bend is acute.
 *
 * # Safety
 * `line` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_polyline_kink_count(const struct TfPolyline *line, size_t *out);

/**
 * Copy up to `capacity` lifted vertices into `xy` as interleaved
 * `x, y` pairs. `out_written` receives the number of vertices copied;
 * pass a null `xy` to query the count alone.
 *
 * # Safety
 * `line` must be a live handle; `xy` must be null or hold `2 * capacity`
 * doubles; `out_written` must be writable.
 */
enum TfStatus tf_polyline_vertices(const struct TfPolyline *line,
                                   double *xy,
                                   size_t capacity,
                                   size_t *out_written);

/**
 * # Safety
 * `line` must be null or a live handle not yet freed.
 */
void tf_polyline_free(struct TfPolyline *line);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTFOLD_H */
