/* C interface to the homfin flag-curvature library. */

#ifndef HOMFIN_H
#define HOMFIN_H

/* Generated by cbindgen from the homfin-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum HfStatus {
  HF_STATUS_OK = 0,
  HF_STATUS_NULL_POINTER = 1,
  HF_STATUS_INVALID_ARGUMENT = 2,
  HF_STATUS_PARSE_ERROR = 3,
  HF_STATUS_PRECONDITION_VIOLATED = 4,
  HF_STATUS_NUMERICAL_ERROR = 5,
  HF_STATUS_IO_ERROR = 6,
} HfStatus;

/**
 * Opaque handle: a compact simple Lie algebra in a Chevalley-derived basis.
 */
typedef struct HfAlgebra HfAlgebra;

/**
 * Opaque handle: an invariant Minkowski norm on m.
 */
typedef struct HfNorm HfNorm;

/**
 * Opaque handle: a reductive split g = h + m with its isotypic summands.
 */
typedef struct HfSplit HfSplit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message into `buf` (truncated to `cap` bytes
 * including the NUL); returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be null (query mode).
 */
size_t hf_last_error(char *buf, size_t cap);

/**
 * Build the compact real form for a root-system family ("A", "C", "G2")
 * and rank.
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum HfStatus hf_algebra_new(const char *family, size_t rank, struct HfAlgebra **out);

/**
 * # Safety
 * `a` must be a pointer returned by `hf_algebra_new` (or null).
 */
void hf_algebra_free(struct HfAlgebra *a);

/**
 * # Safety
 * `a` and `out` must be valid pointers.
 */
enum HfStatus hf_algebra_dim(const struct HfAlgebra *a, size_t *out);

/**
 * Worst Jacobi-identity residual over the structure constants.
 *
 * # Safety
 * `a` and `out` must be valid pointers.
 */
enum HfStatus hf_algebra_jacobi_residual(const struct HfAlgebra *a, double *out);

/**
 * Build the reductive split of a built-in case ("C1".."C5",
 * "AW_degenerate", "sphere_SU", "sphere_Sp"), in the reference summand
 * order.
 *
 * # Safety
 * `case_id` must be a NUL-terminated string; `out` must be valid.
 */
enum HfStatus hf_split_case(const char *case_id, struct HfSplit **out);

/**
 * Build a reductive split from a space file on disk.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid.
 */
enum HfStatus hf_split_from_file(const char *path, struct HfSplit **out);

/**
 * # Safety
 * `s` must be a pointer returned by a split constructor (or null).
 */
void hf_split_free(struct HfSplit *s);

/**
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum HfStatus hf_split_dim_m(const struct HfSplit *s, size_t *out);

/**
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum HfStatus hf_split_num_summands(const struct HfSplit *s, size_t *out);

/**
 * Copy the summand dimensions into `buf` (`cap` elements; must be at least
 * the summand count).
 *
 * # Safety
 * `s` must be valid; `buf` must point to `cap` writable elements.
 */
enum HfStatus hf_split_summand_dims(const struct HfSplit *s, size_t *buf, size_t cap);

/**
 * Dimension of t intersect m.
 *
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum HfStatus hf_split_rank_gap(const struct HfSplit *s, size_t *out);

/**
 * Diagonal (Riemannian) norm with one positive coefficient per summand.
 *
 * # Safety
 * `s` must be valid; `coeffs` must point to `len` readable doubles; `out`
 * must be valid.
 */
enum HfStatus hf_norm_diagonal(const struct HfSplit *s,
                               const double *coeffs,
                               size_t len,
                               struct HfNorm **out);

/**
 * Non-reversible randers-kind norm: `len` positive coefficients for the
 * first summands plus a drift `b` along the last (one-dimensional)
 * summand, |b| < 1.
 *
 * # Safety
 * `s` must be valid; `coeffs` must point to `len` readable doubles; `out`
 * must be valid.
 */
enum HfStatus hf_norm_randers(const struct HfSplit *s,
                              const double *coeffs,
                              size_t len,
                              double b,
                              struct HfNorm **out);

/**
 * Load a norm file from disk and instantiate it for the split's summands.
 *
 * # Safety
 * `s` must be valid; `path` must be a NUL-terminated string; `out` must be
 * valid.
 */
enum HfStatus hf_norm_from_file(const struct HfSplit *s, const char *path, struct HfNorm **out);

/**
 * # Safety
 * `n` must be a pointer returned by a norm constructor (or null).
 */
void hf_norm_free(struct HfNorm *n);

/**
 * Evaluate F(y) for y given in m-coordinates (`len` = dim m).
 *
 * # Safety
 * `s`, `n`, `out` must be valid; `y` must point to `len` readable doubles.
 */
enum HfStatus hf_norm_eval(const struct HfSplit *s,
                           const struct HfNorm *n,
                           const double *y,
                           size_t len,
                           double *out);

/**
 * Flag curvature K(y, v) for a commuting flag; the vectors are given in
 * the short spec syntax ("u[2e1]", "v[e1-e2]", "t[e1+e2-2e3]").
 *
 * # Safety
 * All pointers must be valid; `y` and `v` must be NUL-terminated strings.
 */
enum HfStatus hf_flag_curvature(const struct HfSplit *s,
                                const struct HfNorm *n,
                                const char *y,
                                const char *v,
                                double tol,
                                double *out_k);

/**
 * Run a built-in case end to end and return its JSON report (release with
 * `hf_string_free`).
 *
 * # Safety
 * `case_id` must be a NUL-terminated string; `out_json` must be valid.
 */
enum HfStatus hf_verify_case_json(const char *case_id,
                                  size_t norms,
                                  size_t flags,
                                  uint64_t seed,
                                  double tol,
                                  char **out_json);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library (or be null), and must not be used
 * afterwards.
 */
void hf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMFIN_H */
