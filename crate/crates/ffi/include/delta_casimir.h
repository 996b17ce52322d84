#ifndef DELTA_CASIMIR_H
#define DELTA_CASIMIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_DOMAIN = 1,
  DC_STATUS_POLE = 2,
  DC_STATUS_EVALUATION = 3,
  DC_STATUS_NOT_CONVERGED = 4,
  DC_STATUS_EXTRAPOLATION = 5,
  DC_STATUS_NULL_POINTER = 6,
  DC_STATUS_PANIC = 7,
} DcStatus;

typedef enum DcDirection {
  DC_DIRECTION_OUT = 0,
  DC_DIRECTION_IN = 1,
} DcDirection;

/**
 * Opaque model handle: coupling, mass scale, cutoff and quadrature tolerances.
 */
typedef struct DcModel DcModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a model. `lambda = 0` is the free theory.
 */
enum DcStatus dc_model_new(double lambda, double kappa, double epsilon, struct DcModel **out);

/**
 * Releases a model; null is ignored.
 */
void dc_model_free(struct DcModel *model);

/**
 * Sets the quadrature tolerances used by every later call on this model.
 */
enum DcStatus dc_model_set_tolerances(struct DcModel *model, double rel_tol, double abs_tol);

/**
 * Heat kernel with both points at distance `r` on the same ray.
 */
enum DcStatus dc_kernel_diagonal(const struct DcModel *model,
                                 double r,
                                 double t,
                                 double *out_value);

/**
 * Relative bulk energy, continued representation (`u > -1`, `u != 0`).
 */
enum DcStatus dc_delta_e_continued(const struct DcModel *model,
                                   double u,
                                   double *out_value,
                                   double *out_error);

/**
 * Relative bulk energy, defining representation (`u > 1`, `epsilon > 0`).
 */
enum DcStatus dc_delta_e_defining(const struct DcModel *model,
                                  double u,
                                  double *out_value,
                                  double *out_error);

enum DcStatus dc_residue_at_zero(const struct DcModel *model, double *out_value);

/**
 * Renormalized bulk energy: closed form, and optionally the quadrature value.
 */
enum DcStatus dc_delta_e_renormalized(const struct DcModel *model,
                                      double *out_closed_form,
                                      double *out_numeric);

/**
 * Regular part at `u = 0` for each cutoff, extrapolated to zero cutoff.
 * `out_converged` (optional) receives 1 or 0.
 */
enum DcStatus dc_renormalization_pipeline(const struct DcModel *model,
                                          const double *cutoffs,
                                          size_t n_cutoffs,
                                          double *out_value,
                                          int32_t *out_converged);

enum DcStatus dc_vacuum_energy_sz(double alpha, double ell, double *out_value);

/**
 * Sphere functional at radius `r` (`u > 0`, `epsilon > 0`); `direction`
 * is a `DcDirection` value.
 */
enum DcStatus dc_b_sphere(const struct DcModel *model,
                          double u,
                          double r,
                          int32_t direction,
                          double *out_value,
                          double *out_error);

/**
 * `lim_{r -> 0} r B_in(r)`.
 */
enum DcStatus dc_inner_limit(const struct DcModel *model, double u, double *out_value);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len - 1` bytes). Returns the full message
 * length without the terminator; pass `buf = NULL` to query it.
 */
size_t dc_last_error_message(char *buf, size_t len);

/**
 * Static name of a `DcStatus` value.
 */
const char *dc_status_name(int32_t status);

/**
 * Library version, NUL terminated.
 */
const char *dc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELTA_CASIMIR_H */
