#ifndef CES_FFI_H
#define CES_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CES_SIGN_PLUS 1

#define CES_SIGN_MINUS -1

#define CES_BRANCH_I 1

#define CES_BRANCH_II 2

#define CES_PSI_MINUS -1

#define CES_PSI_PLUS 1

typedef enum CesStatus {
  CES_STATUS_OK = 0,
  CES_STATUS_NULL_POINTER = 1,
  /**
   * An argument is outside the function's domain.
   */
  CES_STATUS_DOMAIN = 2,
  /**
   * Invalid parameter, sign, branch or selector.
   */
  CES_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Gamma or hypergeometric pole.
   */
  CES_STATUS_POLE = 4,
  CES_STATUS_NON_CONVERGENCE = 5,
  /**
   * `c - a - b` is an integer and the connection formula is unavailable.
   */
  CES_STATUS_DEGENERATE = 6,
  /**
   * Any other numerical failure.
   */
  CES_STATUS_NUMERICAL = 7,
  /**
   * The library panicked; this is a bug.
   */
  CES_STATUS_PANIC = 8,
} CesStatus;

/**
 * Opaque handle to the spectral parameters of one `(ω, m)`.
 */
typedef struct CesSpectralParams CesSpectralParams;

typedef struct CesComplex {
  double re;
  double im;
} CesComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable name of a status code. The string is static; unknown
 * codes give "unknown status".
 */
const char *ces_status_name(int status);

/**
 * Message of the last failure on this thread, or null if there was none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *ces_last_error_message(void);

/**
 * Create the parameters for `(omega, m)`; `omega > 0`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum CesStatus ces_params_new(double omega, double m, struct CesSpectralParams **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `params` must be null or a handle from [`ces_params_new`] not yet freed.
 */
void ces_params_free(struct CesSpectralParams *params);

/**
 * `c1 = 2A1 + 1/2` of a handle.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum CesStatus ces_params_c1(const struct CesSpectralParams *params, struct CesComplex *out);

/**
 * Superpotential `W(x) = -m / sqrt(e^x - 1)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CesStatus ces_superpotential(double x, double m, double *out);

/**
 * Partner potential `V±(x, m)`, `sign` one of `CES_SIGN_*`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CesStatus ces_potential(double x, double m, int sign, double *out);

/**
 * Complex Gamma function.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CesStatus ces_gamma(struct CesComplex z, struct CesComplex *out);

/**
 * ₂F₁(a, b; c; z) for real `0 <= z < 1`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CesStatus ces_hyp2f1(struct CesComplex a,
                          struct CesComplex b,
                          struct CesComplex c,
                          double z,
                          struct CesComplex *out);

/**
 * Exact solution of the `sign` partner in the z-family, at `z = e^{-x}`.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum CesStatus ces_solution_z(const struct CesSpectralParams *params,
                              int branch,
                              int sign,
                              double z,
                              struct CesComplex *out);

/**
 * Exact solution of the `sign` partner in the v-family, at `v = 1 - e^{-x}`.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum CesStatus ces_solution_v(const struct CesSpectralParams *params,
                              int branch,
                              int sign,
                              double v,
                              struct CesComplex *out);

/**
 * Wronskian in `x` of the z-family pair (I, II), `±2ω(c1 - 1)/m`.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum CesStatus ces_wronskian(const struct CesSpectralParams *params,
                             int sign,
                             struct CesComplex *out);

/**
 * Scattering amplitude of `V+`, with `Y ~ S e^{iωx} - e^{-iωx}`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CesStatus ces_scattering_plus(double omega, double m, struct CesComplex *out);

/**
 * Scattering amplitude of `V-`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CesStatus ces_scattering_minus(double omega, double m, struct CesComplex *out);

/**
 * Zero-energy state; `which` is `CES_PSI_MINUS` or `CES_PSI_PLUS`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CesStatus ces_zero_energy(double x, double m, int which, struct CesComplex *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CES_FFI_H */
