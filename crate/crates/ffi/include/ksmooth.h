#ifndef KSMOOTH_H
#define KSMOOTH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum KsStatus {
  KS_STATUS_OK = 0,
  KS_STATUS_NULL_POINTER = 1,
  KS_STATUS_INVALID_ARGUMENT = 2,
  KS_STATUS_NOT_POSITIVE_DEFINITE = 3,
  KS_STATUS_TOO_FEW_POINTS = 4,
  KS_STATUS_DEGENERATE_SAMPLE = 5,
  KS_STATUS_NON_FINITE = 6,
  KS_STATUS_NUMERICAL = 7,
  KS_STATUS_GEOMETRY = 8,
  KS_STATUS_PANIC = 9,
} KsStatus;

/**
 * Bandwidth selectors.
 */
typedef enum KsMethod {
  KS_METHOD_NORMAL_SCALE = 0,
  KS_METHOD_PLUGIN = 1,
  KS_METHOD_UCV = 2,
  KS_METHOD_DIAG_PLUGIN = 3,
} KsMethod;

/**
 * Fitted discriminant classifier.
 */
typedef struct KsClassifier KsClassifier;

/**
 * Density estimate on a grid.
 */
typedef struct KsKde KsKde;

/**
 * Sample of bivariate points.
 */
typedef struct KsPoints KsPoints;

/**
 * Grid layout: vertex `(i, j)` sits at `(x0 + i·dx, y0 + j·dy)` and is
 * stored at flat index `j·nx + i`.
 */
typedef struct KsGridInfo {
  double x0;
  double y0;
  double dx;
  double dy;
  size_t nx;
  size_t ny;
} KsGridInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ks_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ks_version(void);

/**
 * Copies `n` coordinate pairs into a new point set.
 *
 * # Safety
 * `xs` and `ys` must point to `n` doubles; `out` must be writable.
 */
enum KsStatus ks_points_new(const double *xs, const double *ys, size_t n, struct KsPoints **out);

/**
 * # Safety
 * `p` must be null or a handle from [`ks_points_new`] not yet freed.
 */
void ks_points_free(struct KsPoints *p);

/**
 * Number of points, 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t ks_points_len(const struct KsPoints *p);

/**
 * Selects a bandwidth matrix. `deriv_order` is 0 for the density and 1
 * for its gradient (normal scale and plug-in only).
 *
 * # Safety
 * `p` must be a live handle and `h_out` must point to 3 writable doubles.
 */
enum KsStatus ks_bandwidth(const struct KsPoints *p,
                           enum KsMethod method,
                           uint32_t deriv_order,
                           double *h_out);

/**
 * Density estimate at `m` points.
 *
 * # Safety
 * `ex`, `ey` and `out` must point to `m` doubles; `h` to 3 doubles.
 */
enum KsStatus ks_kde_eval(const struct KsPoints *p,
                          const double *h,
                          const double *ex,
                          const double *ey,
                          size_t m,
                          double *out);

/**
 * Density gradient at `m` points.
 *
 * # Safety
 * `ex`, `ey`, `out_dx` and `out_dy` must point to `m` doubles; `h` to 3.
 */
enum KsStatus ks_grad_eval(const struct KsPoints *p,
                           const double *h,
                           const double *ex,
                           const double *ey,
                           size_t m,
                           double *out_dx,
                           double *out_dy);

/**
 * Density estimate on the default `gridsize × gridsize` grid.
 *
 * # Safety
 * `p` must be live, `h` must point to 3 doubles, `out` must be writable.
 */
enum KsStatus ks_kde_new(const struct KsPoints *p,
                         const double *h,
                         size_t gridsize,
                         struct KsKde **out);

/**
 * # Safety
 * `k` must be null or a handle from [`ks_kde_new`] not yet freed.
 */
void ks_kde_free(struct KsKde *k);

/**
 * # Safety
 * `k` must be live and `info` writable.
 */
enum KsStatus ks_kde_grid(const struct KsKde *k, struct KsGridInfo *info);

/**
 * Copies the `nx·ny` grid values into `out`; `len` must equal `nx·ny`.
 *
 * # Safety
 * `k` must be live and `out` must point to `len` writable doubles.
 */
enum KsStatus ks_kde_values(const struct KsKde *k, double *out, size_t len);

/**
 * Probability contours at the given percents as a GeoJSON
 * FeatureCollection. Release the string with [`ks_string_free`].
 *
 * # Safety
 * `k` must be live, `percents` must point to `count` values and `out`
 * must be writable.
 */
enum KsStatus ks_kde_contours_geojson(const struct KsKde *k,
                                      const uint32_t *percents,
                                      size_t count,
                                      char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ks_string_free(char *s);

/**
 * Mean shift clustering with default tolerances. Writes one label per
 * point (1-based, 0 for clusters below `min_clust_size`) and the number of
 * clusters.
 *
 * # Safety
 * `p` must be live, `h` must point to 3 doubles, `labels` to
 * `ks_points_len(p)` writable `uint32_t`, `n_clusters` writable.
 */
enum KsStatus ks_kms(const struct KsPoints *p,
                     const double *h,
                     size_t min_clust_size,
                     uint32_t *labels,
                     size_t *n_clusters);

/**
 * Fits a classifier on `n` points with integer group codes. Classes are
 * ordered by code; predictions use 1-based positions in that order.
 *
 * # Safety
 * `xs`, `ys` and `groups` must point to `n` elements; `out` writable.
 */
enum KsStatus ks_kda_new(const double *xs,
                         const double *ys,
                         const int64_t *groups,
                         size_t n,
                         struct KsClassifier **out);

/**
 * # Safety
 * `c` must be null or a handle from [`ks_kda_new`] not yet freed.
 */
void ks_kda_free(struct KsClassifier *c);

/**
 * Number of classes, 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t ks_kda_num_classes(const struct KsClassifier *c);

/**
 * Prior and bandwidth of class `k` (0-based).
 *
 * # Safety
 * `c` must be live; `prior` writable; `h_out` must point to 3 doubles.
 */
enum KsStatus ks_kda_class(const struct KsClassifier *c, size_t k, double *prior, double *h_out);

/**
 * Predicted 1-based class for each of `m` points.
 *
 * # Safety
 * `ex`, `ey` must point to `m` doubles and `out` to `m` writable `uint32_t`.
 */
enum KsStatus ks_kda_predict(const struct KsClassifier *c,
                             const double *ex,
                             const double *ey,
                             size_t m,
                             uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KSMOOTH_H */
