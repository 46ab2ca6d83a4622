#ifndef GRASSPAIR_H
#define GRASSPAIR_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum GpStatus {
  GP_STATUS_OK = 0,
  GP_STATUS_NULL_POINTER = 1,
  GP_STATUS_INVALID_ARGUMENT = 2,
  GP_STATUS_NOT_PROJECTION = 3,
  GP_STATUS_NUMERICAL = 4,
  GP_STATUS_NO_COMPLEMENT = 5,
  GP_STATUS_NO_GEODESIC = 6,
  GP_STATUS_PARSE = 7,
  GP_STATUS_IO = 8,
  GP_STATUS_PANIC = 9,
} GpStatus;

/**
 * Common complement certificate.
 */
typedef struct GpCertificate GpCertificate;

/**
 * Complex matrix.
 */
typedef struct GpMatrix GpMatrix;

/**
 * Pair of orthogonal projections of the same size.
 */
typedef struct GpPair GpPair;

/**
 * Five-space dimensions of a pair.
 */
typedef struct GpDims {
  size_t n;
  size_t d11;
  size_t d00;
  size_t d10;
  size_t d01;
  size_t generic_dim;
} GpDims;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or NULL. Owned by the library.
 */
const char *gp_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void gp_string_free(char *s);

/**
 * Builds a `rows x cols` matrix from row-major interleaved `(re, im)` doubles (`2*rows*cols` values).
 *
 * # Safety
 * `data` must point to `2*rows*cols` readable doubles; `out` must be writable.
 */
enum GpStatus gp_matrix_new(size_t rows,
                            size_t cols,
                            const double *data,
                            struct GpMatrix **out);

/**
 * Parses a matrix from JSON `{"rows":r,"cols":c,"data":[[re,im],...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum GpStatus gp_matrix_from_json(const char *json, struct GpMatrix **out);

/**
 * # Safety
 * `m` must come from this library and not be freed twice. NULL is ignored.
 */
void gp_matrix_free(struct GpMatrix *m);

/**
 * # Safety
 * `m` must be a valid handle or NULL (returns 0).
 */
size_t gp_matrix_rows(const struct GpMatrix *m);

/**
 * # Safety
 * `m` must be a valid handle or NULL (returns 0).
 */
size_t gp_matrix_cols(const struct GpMatrix *m);

/**
 * Copies the entries row-major as interleaved `(re, im)`; `len` is the capacity of `buf` in doubles.
 *
 * # Safety
 * `buf` must have room for `len` doubles.
 */
enum GpStatus gp_matrix_copy_data(const struct GpMatrix *m,
                                  double *buf,
                                  size_t len);

/**
 * Builds a pair from two orthogonal projections; the matrices are copied.
 *
 * # Safety
 * `p`, `q` must be valid handles; `out` must be writable.
 */
enum GpStatus gp_pair_new(const struct GpMatrix *p, const struct GpMatrix *q, struct GpPair **out);

/**
 * # Safety
 * `pair` must come from this library and not be freed twice. NULL is ignored.
 */
void gp_pair_free(struct GpPair *pair);

/**
 * Five-space dimensions.
 *
 * # Safety
 * `pair` must be a valid handle; `out` must be writable.
 */
enum GpStatus gp_pair_dims(const struct GpPair *pair, struct GpDims *out);

/**
 * Principal angles of the generic part in ascending order. `*count` receives the number of
 * angles; at most `cap` are written to `buf`.
 *
 * # Safety
 * `buf` must have room for `cap` doubles (may be NULL when `cap` is 0); `count` must be writable.
 */
enum GpStatus gp_pair_angles(const struct GpPair *pair, double *buf, size_t cap, size_t *count);

/**
 * `dim(S ∩ T⊥) - dim(S⊥ ∩ T)`.
 *
 * # Safety
 * `pair` must be a valid handle; `out` must be writable.
 */
enum GpStatus gp_pair_fredholm_index(const struct GpPair *pair, int64_t *out);

/**
 * Operator-norm distance `|P - Q|`, or NaN for a NULL handle.
 *
 * # Safety
 * `pair` must be a valid handle or NULL.
 */
double gp_pair_distance(const struct GpPair *pair);

/**
 * Decides whether the ranges have a common complement. Returns `GP_STATUS_NO_COMPLEMENT`
 * with `*out` set to NULL when they do not; the reason is in [`gp_last_error_message`].
 *
 * # Safety
 * `pair` must be a valid handle; `out` must be writable.
 */
enum GpStatus gp_pair_decide(const struct GpPair *pair, struct GpCertificate **out);

/**
 * # Safety
 * `cert` must come from this library and not be freed twice. NULL is ignored.
 */
void gp_certificate_free(struct GpCertificate *cert);

/**
 * Orthonormal basis of the common complement as an `n x dim` matrix.
 *
 * # Safety
 * `cert` must be a valid handle; `out` must be writable.
 */
enum GpStatus gp_certificate_basis(const struct GpCertificate *cert, struct GpMatrix **out);

/**
 * Direct-sum residuals against the two ranges and distances from the witness projection.
 *
 * # Safety
 * `cert` must be a valid handle; every output pointer must be writable or NULL.
 */
enum GpStatus gp_certificate_residuals(const struct GpCertificate *cert,
                                       double *residual_s,
                                       double *residual_t,
                                       double *dist_ps,
                                       double *dist_pt);

/**
 * Point `δ(t)` of the minimal geodesic from P (t = 0) to Q (t = 1).
 *
 * # Safety
 * `pair` must be a valid handle; `out` must be writable.
 */
enum GpStatus gp_pair_geodesic(const struct GpPair *pair, double t, struct GpMatrix **out);

/**
 * Full analysis report of a pair as JSON, same schema as `grasspair analyze`.
 *
 * # Safety
 * `pair` must be a valid handle; `out` must be writable. Free the string with [`gp_string_free`].
 */
enum GpStatus gp_pair_analyze_json(const struct GpPair *pair, uint64_t seed, char **out);

/**
 * Classifies a registered example over the given levels and returns the report as JSON.
 * `params_json` may be NULL for defaults.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `levels` must point to `n_levels` values and
 * `out` must be writable. Free the string with [`gp_string_free`].
 */
enum GpStatus gp_classify_example(const char *name,
                                  const char *params_json,
                                  const size_t *levels,
                                  size_t n_levels,
                                  char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRASSPAIR_H */
