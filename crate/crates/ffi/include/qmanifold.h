#ifndef QMANIFOLD_H
#define QMANIFOLD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QmEinsteinKind {
  QM_EINSTEIN_KIND_EINSTEIN = 0,
  QM_EINSTEIN_KIND_ALMOST_EINSTEIN = 1,
  QM_EINSTEIN_KIND_GENERIC = 2,
} QmEinsteinKind;

// Result of a library call.
typedef enum QmStatus {
  QM_STATUS_OK = 0,
  QM_STATUS_NULL_POINTER = 1,
  QM_STATUS_INVALID_UTF8 = 2,
  QM_STATUS_PARSE = 3,
  QM_STATUS_DOMAIN = 4,
  QM_STATUS_NOT_POSITIVE_DEFINITE = 5,
  QM_STATUS_DEGENERATE = 6,
  QM_STATUS_INVALID_ARGUMENT = 7,
  QM_STATUS_INTERNAL = 8,
} QmStatus;

// Values of the `w` argument: `g` or the associated metric `g̃`.
typedef enum QmWhich {
  QM_WHICH_G = 0,
  QM_WHICH_G_TILDE = 1,
} QmWhich;

// Opaque metric handle.
typedef struct QmMetric QmMetric;

// Pointwise classification.
typedef struct QmClassification {
  // A [`QmEinsteinKind`] value.
  int32_t kind;
  // Best-fit coefficients of `ρ ≈ αg + βg̃`.
  double alpha;
  double beta;
  double w1_residual;
  double con_ae_residual;
  // 1 if `A₃ = B₁ = B₂ = 0` at the point.
  int32_t locally_product;
} QmClassification;

// Q-basis quantities for a vector `x`.
typedef struct QmQBasis {
  double phi;
  double psi;
  double cos_phi;
  double cos_psi;
  // `r(Qᵖx)` for p = 0..3.
  double ricci_dirs[4];
  // Sectional curvatures on `{x,Qx}, {x,Q²x}, {x,Q³x}, {Qx,Q²x}, {Qx,Q³x}, {Q²x,Q³x}`.
  double sectional[6];
  // NaN when `ψ` is a right angle.
  double con_r_residual;
} QmQBasis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *qm_last_error(void);

// Library version as a static string.
const char *qm_version(void);

// Parses `A` and `B` and stores a new handle in `*out`.
//
// # Safety
// `a` and `b` must be null or NUL-terminated strings; `out` must be null or
// writable.
enum QmStatus qm_metric_new(const char *a, const char *b, struct QmMetric **out);

// The catenoid chart `A = cosh²(x1)`, `B = x1²`.
//
// # Safety
// `out` must be null or writable.
enum QmStatus qm_metric_catenoid(struct QmMetric **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `m` must be null or a handle not yet freed.
void qm_metric_free(struct QmMetric *m);

// Metric components at `point[3]`: `out[3*i + j] = h_ij`.
//
// # Safety
// `m` must be a live handle or null; `point` must hold 3 doubles and `out` 9.
enum QmStatus qm_metric_at(const struct QmMetric *m, const double *point, int32_t w, double *out);

// Christoffel symbols: `out[9*k + 3*i + j] = Γᵏᵢⱼ`.
//
// # Safety
// `point` must hold 3 doubles and `out` 27.
enum QmStatus qm_christoffel(const struct QmMetric *m, const double *point, int32_t w, double *out);

// Curvature: `out[27*i + 9*j + 3*k + l] = R_ijkl`.
//
// # Safety
// `point` must hold 3 doubles and `out` 81.
enum QmStatus qm_riemann(const struct QmMetric *m, const double *point, int32_t w, double *out);

// Ricci tensor `rho[3*i + j]` and its two traces. For `g` these are `τ` and
// `τ*`; for `g̃`, `τ̃` and `τ̃*`.
//
// # Safety
// `point` must hold 3 doubles, `rho` 9; `tau` and `tau_star` must be writable.
enum QmStatus qm_ricci(const struct QmMetric *m,
                       const double *point,
                       int32_t w,
                       double *rho,
                       double *tau,
                       double *tau_star);

// Fundamental tensor: `out[9*i + 3*j + k] = F_ijk = ∇ᵢg̃ⱼₖ`.
//
// # Safety
// `point` must hold 3 doubles and `out` 27.
enum QmStatus qm_fundamental_f(const struct QmMetric *m, const double *point, double *out);

// Lee forms `θ` and `θ̃` (lower index), 3 doubles each.
//
// # Safety
// `point`, `theta_out` and `theta_tilde_out` must each hold 3 doubles.
enum QmStatus qm_theta(const struct QmMetric *m,
                       const double *point,
                       double *theta_out,
                       double *theta_tilde_out);

// # Safety
// `point` must hold 3 doubles; `out` must be writable.
enum QmStatus qm_classify(const struct QmMetric *m,
                          const double *point,
                          struct QmClassification *out);

// Q-basis report for `x[3]` at `point[3]`. Fails with
// `QM_STATUS_DEGENERATE` when `x` does not induce a basis.
//
// # Safety
// `point` and `x` must hold 3 doubles; `out` must be writable.
enum QmStatus qm_qbasis(const struct QmMetric *m,
                        const double *point,
                        const double *x,
                        struct QmQBasis *out);

// Full point report as JSON in `*out`; release it with [`qm_string_free`].
// `x` may be null to omit the Q-basis section.
//
// # Safety
// `point` must hold 3 doubles, `x` must be null or hold 3 doubles, and `out`
// must be writable.
enum QmStatus qm_analyze_json(const struct QmMetric *m,
                              const double *point,
                              const double *x,
                              char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void qm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMANIFOLD_H */
