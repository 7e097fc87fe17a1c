#ifndef MEPKIT_H
#define MEPKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MepStatus {
  MEP_STATUS_OK = 0,
  MEP_STATUS_NULL_POINTER = 1,
  MEP_STATUS_BUFFER_TOO_SMALL = 2,
  MEP_STATUS_INVALID_UTF8 = 3,
  MEP_STATUS_PANIC = 4,
  MEP_STATUS_INVALID_INPUT = 10,
  MEP_STATUS_NON_FINITE_INTEGRAND = 11,
  MEP_STATUS_DEGENERATE_STATE = 12,
  MEP_STATUS_DOMAIN_ERROR = 13,
  MEP_STATUS_ADMISSIBILITY_VIOLATION = 14,
  MEP_STATUS_NOT_REALIZABLE = 15,
  MEP_STATUS_MAX_ITERATIONS = 16,
  MEP_STATUS_NOT_POSITIVE_DEFINITE = 17,
  MEP_STATUS_SINGULAR_LINEAR_SYSTEM = 18,
  MEP_STATUS_OUT_OF_BOUNDS = 19,
  MEP_STATUS_NOT_HYPERBOLIC = 20,
  MEP_STATUS_REGIME_MISMATCH = 21,
  MEP_STATUS_SERIES_DIVERGENCE = 22,
  MEP_STATUS_OFF_MASS_SHELL = 23,
  MEP_STATUS_SINGULAR_DENOMINATOR = 24,
  MEP_STATUS_STATE_CONSTRAINT_VIOLATION = 25,
  MEP_STATUS_REALIZABILITY_LOSS = 26,
  MEP_STATUS_IO = 27,
} MepStatus;

/**
 * A maximum-entropy closure solved from a moment vector.
 */
typedef struct MepClosure MepClosure;

/**
 * Relativistic fourteen-moment closure coefficients.
 */
typedef struct MepRelCoefficients {
  double c01;
  double cpi1;
  double c03;
  double c05;
} MepRelCoefficients;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *mepkit_version(void);

/**
 * Bytes in the last error message of this thread, without the terminator.
 */
size_t mepkit_last_error_length(void);

/**
 * Copies the last error message into `buf` (NUL-terminated, truncated to
 * `len - 1` bytes). Returns the number of bytes written before the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t mepkit_last_error_message(char *buf, size_t len);

/**
 * Upper bound of the characteristic speeds of the full order-`n` system,
 * in units of `sqrt(kB T / m)`.
 */
double mepkit_speed_bound(uint32_t n);

/**
 * Third moments `rho <xi_i xi_j xi_k>` of the ten-moment Gaussian closure.
 *
 * `v` holds 3 values, `p` the 9 entries of the pressure tensor in row-major
 * order and `out` receives 27 values indexed `9 i + 3 j + k`.
 *
 * # Safety
 * Pointers must be valid for the stated number of values.
 */
enum MepStatus mepkit_gaussian_flux_10(double rho,
                                       const double *v,
                                       const double *p,
                                       double *out,
                                       size_t out_len);

/**
 * Closure coefficients at `(alpha, gamma)` for a Boltzmann gas with
 * `m = c = kB = Y = 1`.
 *
 * # Safety
 * `out` must be null or point to writable storage.
 */
enum MepStatus mepkit_rel_closure_coefficients(double alpha,
                                               double gamma,
                                               struct MepRelCoefficients *out);

/**
 * Solves the dual problem for `values` on the basis named by `basis`
 * (`"full:4"`, `"line:4"`, `"grad13"`, `"euler"`, `"six_moment"`,
 * `"full_internal:2"`) with a classical unit gas. `quadrature_order = 0`
 * selects the default grid. On success `*out` owns a new handle.
 *
 * # Safety
 * `basis` must be a NUL-terminated string, `values` valid for `len` values
 * and `out` writable.
 */
enum MepStatus mepkit_closure_solve(const char *basis,
                                    const double *values,
                                    size_t len,
                                    size_t quadrature_order,
                                    struct MepClosure **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from [`mepkit_closure_solve`] and not be used afterwards.
 */
void mepkit_closure_free(struct MepClosure *h);

/**
 * Number of basis elements, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t mepkit_closure_len(const struct MepClosure *h);

/**
 * Newton iterations used by the solve, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t mepkit_closure_iterations(const struct MepClosure *h);

/**
 * Final scaled residual of the solve, NaN for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double mepkit_closure_residual(const struct MepClosure *h);

/**
 * Entropy density of the closed distribution, NaN for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double mepkit_closure_entropy(const struct MepClosure *h);

/**
 * Copies the Lagrange multipliers into `out`.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for `len` values.
 */
enum MepStatus mepkit_closure_multipliers(const struct MepClosure *h, double *out, size_t len);

/**
 * Copies the moments reproduced by the closure into `out`.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for `len` values.
 */
enum MepStatus mepkit_closure_moments(const struct MepClosure *h, double *out, size_t len);

/**
 * Copies the fluxes along velocity component `direction` into `out`.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for `len` values.
 */
enum MepStatus mepkit_closure_flux(const struct MepClosure *h,
                                   uint32_t direction,
                                   double *out,
                                   size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEPKIT_H */
