/* C interface to the inftyspec eigenvalue and stability library. */

#pragma once

/* Generated with cbindgen:0.26.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum InftyStatus {
  INFTY_STATUS_OK = 0,
  INFTY_STATUS_INVALID_ARGUMENT = 1,
  INFTY_STATUS_INFEASIBLE = 2,
  INFTY_STATUS_RESOLUTION = 3,
  INFTY_STATUS_DISCONNECTED = 4,
  INFTY_STATUS_NOT_CERTIFIED = 5,
  INFTY_STATUS_VACUOUS_BOUND = 6,
  INFTY_STATUS_NULL_POINTER = 7,
  INFTY_STATUS_UTF8 = 8,
  INFTY_STATUS_JSON = 9,
  INFTY_STATUS_IO = 10,
  INFTY_STATUS_INTERNAL = 11,
} InftyStatus;

/**
 * Opaque handle to a validated domain description.
 */
typedef struct InftyDomain InftyDomain;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *infty_version(void);

/**
 * Parse a domain from its JSON description {"kind", "params", "dimension"}.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum InftyStatus infty_domain_from_json(const char *json, struct InftyDomain **out);

/**
 * Serialize the domain back to JSON (caller frees via infty_string_free).
 *
 * # Safety
 * `domain` must come from this library and `out_json` must be valid.
 */
enum InftyStatus infty_domain_to_json(const struct InftyDomain *domain, char **out_json);

/**
 * Planar ball of radius `radius` centered at the origin.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum InftyStatus infty_domain_ball(double radius, struct InftyDomain **out);

/**
 * Annulus with the given radii, centered at the origin.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum InftyStatus infty_domain_annulus(double outer, double inner, struct InftyDomain **out);

/**
 * Stadium: segment of the given length with semicircular caps.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum InftyStatus infty_domain_stadium(double cap_radius, double length, struct InftyDomain **out);

/**
 * Regular polygon with `sides` sides and the given apothem.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum InftyStatus infty_domain_regular_polygon(uint32_t sides,
                                              double apothem,
                                              struct InftyDomain **out);

/**
 * Axis-aligned ellipse; `semi_axes` points at `len >= 2` semi-axis lengths.
 *
 * # Safety
 * `semi_axes` must point at `len` readable doubles; `out` must be valid.
 */
enum InftyStatus infty_domain_ellipse(const double *semi_axes,
                                      uintptr_t len,
                                      struct InftyDomain **out);

/**
 * Release a domain handle (NULL is a no-op).
 *
 * # Safety
 * `domain` must be NULL or a pointer returned by this library, not yet freed.
 */
void infty_domain_free(struct InftyDomain *domain);

/**
 * Release a string returned by this library (NULL is a no-op).
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void infty_string_free(char *s);

/**
 * Closed-form eigenvalues: lambda_D = 1/inradius, lambda_N = 2/diameter.
 *
 * # Safety
 * All pointers must be valid.
 */
enum InftyStatus infty_eigenpair_closed_form(const struct InftyDomain *domain,
                                             double *lambda_d,
                                             double *lambda_n);

/**
 * Numeric eigenvalues on a grid of spacing `h`.
 *
 * `solver`: 0 fast marching, 1 Dijkstra-8, 2 Dijkstra-16. `stride`
 * subsamples boundary sources in the diameter search. Error bars are
 * written when the bar pointers are non-NULL.
 *
 * # Safety
 * `domain`, `lambda_d`, `lambda_n` must be valid pointers.
 */
enum InftyStatus infty_eigenpair_numeric(const struct InftyDomain *domain,
                                         double h,
                                         int solver,
                                         uintptr_t stride,
                                         double *lambda_d,
                                         double *lambda_n,
                                         double *bar_d,
                                         double *bar_n);

/**
 * Full stability report against the ball of radius `r`, as a JSON string
 * (caller frees via infty_string_free). `solver`/`stride` as in
 * [`infty_eigenpair_numeric`].
 *
 * # Safety
 * `domain` and `out_json` must be valid pointers.
 */
enum InftyStatus infty_stability_report_json(const struct InftyDomain *domain,
                                             double r,
                                             double h,
                                             int solver,
                                             uintptr_t stride,
                                             char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus
