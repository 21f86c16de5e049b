#ifndef ISOSYM_H
#define ISOSYM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every `isosym_*` call.
typedef enum IsosymStatus {
  ISOSYM_STATUS_OK = 0,
  ISOSYM_STATUS_NULL_POINTER = 1,
  ISOSYM_STATUS_DIM_MISMATCH = 2,
  ISOSYM_STATUS_DIM_TOO_LARGE = 3,
  ISOSYM_STATUS_ORDER_TOO_LARGE = 4,
  ISOSYM_STATUS_BAD_LENGTH = 5,
  ISOSYM_STATUS_NON_FINITE = 6,
  ISOSYM_STATUS_SINGULAR = 7,
  ISOSYM_STATUS_ILL_CONDITIONED_SPLITTING = 8,
  ISOSYM_STATUS_GENERATION_FAILED = 9,
  ISOSYM_STATUS_INVALID_PARAM = 10,
  ISOSYM_STATUS_PARSE = 11,
  ISOSYM_STATUS_IO = 12,
  ISOSYM_STATUS_INVALID_UTF8 = 13,
  ISOSYM_STATUS_PANIC = 14,
} IsosymStatus;

// Which transform a zero test or sweep runs.
typedef enum IsosymTransform {
  // `Δ^m_{B,A}(X)`.
  ISOSYM_TRANSFORM_TRIANGLE = 0,
  // `δ^n_{B,A}(X)`.
  ISOSYM_TRANSFORM_DELTA = 1,
} IsosymTransform;

// Opaque square complex matrix.
typedef struct IsosymMatrix IsosymMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread (empty after a success).
// Valid until the next `isosym_*` call on the same thread.
const char *isosym_last_error(void);

// Stable kebab-case name of a status code (`"unknown"` outside the enum).
// Static storage.
const char *isosym_status_name(int32_t status);

// Frees a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must be null or a string from an `isosym_*` call, freed at most once.
void isosym_string_free(char *s);

// Builds a `dim × dim` matrix from `2·dim²` doubles: row-major
// interleaved `(re, im)` pairs.
//
// # Safety
// `data` must point to `len` readable doubles; `out` must be writable.
enum IsosymStatus isosym_matrix_new(size_t dim,
                                    const double *data,
                                    size_t len,
                                    struct IsosymMatrix **out);

// Parses a matrix from `{"dim": d, "data": [[re, im], ...]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum IsosymStatus isosym_matrix_from_json(const char *json, struct IsosymMatrix **out);

// Serializes a matrix to JSON; free with [`isosym_string_free`].
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum IsosymStatus isosym_matrix_to_json(const struct IsosymMatrix *m, char **out);

// Copies the matrix into `data` as `2·dim²` interleaved doubles.
//
// # Safety
// `m` must be a live handle; `data` must have room for `len` doubles.
enum IsosymStatus isosym_matrix_data(const struct IsosymMatrix *m, double *data, size_t len);

// Dimension of a matrix, 0 for null.
//
// # Safety
// `m` must be null or a live handle.
size_t isosym_matrix_dim(const struct IsosymMatrix *m);

// Releases a matrix. Null is a no-op.
//
// # Safety
// `m` must be null or a handle from this library, freed at most once.
void isosym_matrix_free(struct IsosymMatrix *m);

// `Δ^k_{B,A}(X)` or `δ^k_{B,A}(X)` as a new matrix; `kind` is an
// [`IsosymTransform`] value.
//
// # Safety
// Handles must be live; `out` must be writable.
enum IsosymStatus isosym_transform(uint32_t kind,
                                   const struct IsosymMatrix *b,
                                   const struct IsosymMatrix *a,
                                   const struct IsosymMatrix *x,
                                   size_t k,
                                   struct IsosymMatrix **out);

// Zero test of a transform at order `k`: `‖R‖ ≤ atol + rtol·scale`.
//
// # Safety
// Handles must be live; output pointers must be writable (`residual` may be null).
enum IsosymStatus isosym_zero_test(uint32_t kind,
                                   const struct IsosymMatrix *b,
                                   const struct IsosymMatrix *a,
                                   const struct IsosymMatrix *x,
                                   size_t k,
                                   double atol,
                                   double rtol,
                                   bool *pass,
                                   double *residual);

// Smallest order in `1..=bound` at which the transform vanishes; writes 0
// when there is none.
//
// # Safety
// Handles must be live; `order` must be writable.
enum IsosymStatus isosym_minimal_order(uint32_t kind,
                                       const struct IsosymMatrix *b,
                                       const struct IsosymMatrix *a,
                                       const struct IsosymMatrix *x,
                                       size_t bound,
                                       double atol,
                                       double rtol,
                                       size_t *order);

// Grid classification of `A` with weight `X` (identity when null), as JSON.
//
// # Safety
// `a` must be live, `x` null or live; `out` must be writable.
enum IsosymStatus isosym_classify_json(const struct IsosymMatrix *a,
                                       const struct IsosymMatrix *x,
                                       size_t m_max,
                                       size_t n_max,
                                       double atol,
                                       double rtol,
                                       char **out);

// Drazin inverse of `T`.
//
// # Safety
// `t` must be live; `out` must be writable.
enum IsosymStatus isosym_drazin_inverse(const struct IsosymMatrix *t,
                                        double atol,
                                        double rtol,
                                        struct IsosymMatrix **out);

// Generates the bundle described by a JSON generator spec
// (`{"family": ..., "seed": ..., "dim": ..., "params": {...}}`) and returns
// it as JSON.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum IsosymStatus isosym_generate_json(const char *spec, char **out);

// Runs the suites described by a JSON suite config and returns the report
// as JSON. `exit_code` receives 0 without failures, 1 otherwise.
//
// # Safety
// `config` must be a NUL-terminated string; output pointers must be writable.
enum IsosymStatus isosym_verify_json(const char *config, char **out, int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOSYM_H */
