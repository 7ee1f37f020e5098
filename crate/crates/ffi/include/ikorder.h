#ifndef IKORDER_H
#define IKORDER_H

#include <stddef.h>
#include <stdint.h>

/*
 Status codes returned by every entry point.
 */
typedef enum IkStatus {
  IK_STATUS_OK = 0,
  IK_STATUS_NULL_POINTER = 1,
  /*
   Argument outside a function's domain, e.g. `x < 0` or `u` outside `[0, 1]`.
   */
  IK_STATUS_DOMAIN = 2,
  /*
   Invalid parameters or inconsistent shapes.
   */
  IK_STATUS_INVALID_PARAMETER = 3,
  IK_STATUS_JSON = 4,
  IK_STATUS_UNKNOWN_FIXTURE = 5,
  /*
   A string argument was not valid UTF-8.
   */
  IK_STATUS_UTF8 = 6,
  IK_STATUS_IO = 7,
  IK_STATUS_PANIC = 8,
} IkStatus;

/*
 Order kinds accepted by [`ik_check_order`].
 */
typedef enum IkOrderKind {
  IK_ORDER_KIND_ST = 0,
  IK_ORDER_KIND_RH = 1,
  IK_ORDER_KIND_LR = 2,
  IK_ORDER_KIND_R_RH = 3,
} IkOrderKind;

typedef enum IkOrderStatus {
  IK_ORDER_STATUS_HOLDS_ON_GRID = 0,
  IK_ORDER_STATUS_VIOLATED = 1,
  IK_ORDER_STATUS_INCONCLUSIVE = 2,
} IkOrderStatus;

/*
 Opaque finite mixture.
 */
typedef struct IkMixture IkMixture;

/*
 Evaluation grid. `log_spacing != 0` selects log spacing.
 */
typedef struct IkGrid {
  double x_min;
  double x_max;
  size_t points;
  int32_t log_spacing;
} IkGrid;

/*
 Grid verdict. Witness fields are NaN when `has_witness == 0`.
 */
typedef struct IkVerdict {
  enum IkOrderStatus status;
  int32_t has_witness;
  double witness_x;
  double witness_lhs;
  double witness_rhs;
  /*
   First sign change of the deciding function, NaN if none was refined.
   */
  double refined_crossing;
  size_t points;
  size_t skipped;
} IkVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *ik_last_error(void);

/*
 Frees a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void ik_string_free(char *s);

/*
 Distribution function of a single component.

 # Safety
 `out` must be null or valid for writes.
 */
enum IkStatus ik_cdf(double alpha, double beta, double x, double *out);

/*
 Survival function of a single component.

 # Safety
 `out` must be null or valid for writes.
 */
enum IkStatus ik_sf(double alpha, double beta, double x, double *out);

/*
 Density of a single component; `+inf` at a singular origin.

 # Safety
 `out` must be null or valid for writes.
 */
enum IkStatus ik_pdf(double alpha, double beta, double x, double *out);

/*
 Reversed hazard rate `f / F` of a single component.

 # Safety
 `out` must be null or valid for writes.
 */
enum IkStatus ik_reversed_hazard(double alpha, double beta, double x, double *out);

/*
 Quantile of a single component at probability `u`.

 # Safety
 `out` must be null or valid for writes.
 */
enum IkStatus ik_quantile(double alpha, double beta, double u, double *out);

/*
 Builds a mixture from `n` weights and component parameters.

 # Safety
 The three arrays must hold `n` readable doubles; `out` must be valid.
 */
enum IkStatus ik_mixture_new(const double *weights,
                             const double *alpha,
                             const double *beta,
                             size_t n,
                             struct IkMixture **out);

/*
 Parses a mixture from JSON, in any layout the CLI accepts.

 # Safety
 `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum IkStatus ik_mixture_from_json(const char *json, struct IkMixture **out);

/*
 Serializes a mixture to JSON; free the result with [`ik_string_free`].

 # Safety
 `m` must be a live mixture; `out` must be valid for writes.
 */
enum IkStatus ik_mixture_to_json(const struct IkMixture *m, char **out);

/*
 Number of components.

 # Safety
 `m` must be a live mixture; `out` must be valid for writes.
 */
enum IkStatus ik_mixture_len(const struct IkMixture *m, size_t *out);

/*
 Frees a mixture. Null is ignored.

 # Safety
 `m` must come from this library and not have been freed.
 */
void ik_mixture_free(struct IkMixture *m);

/*
 # Safety
 `m` must be a live mixture; `out` must be valid for writes.
 */
enum IkStatus ik_mixture_cdf(const struct IkMixture *m, double x, double *out);

/*
 # Safety
 `m` must be a live mixture; `out` must be valid for writes.
 */
enum IkStatus ik_mixture_sf(const struct IkMixture *m, double x, double *out);

/*
 # Safety
 `m` must be a live mixture; `out` must be valid for writes.
 */
enum IkStatus ik_mixture_pdf(const struct IkMixture *m, double x, double *out);

/*
 # Safety
 `m` must be a live mixture; `out` must be valid for writes.
 */
enum IkStatus ik_mixture_reversed_hazard(const struct IkMixture *m, double x, double *out);

/*
 The default grid: 2000 log-spaced points on `[1e-4, 1e4]`.
 */
struct IkGrid ik_grid_default(void);

/*
 Checks `m1 <=_kind m2` on `grid`, or on the default grid when it is null.

 # Safety
 `m1`, `m2` must be live mixtures; `grid` null or readable; `out` writable.
 */
enum IkStatus ik_check_order(enum IkOrderKind kind,
                             const struct IkMixture *m1,
                             const struct IkMixture *m2,
                             const struct IkGrid *grid,
                             struct IkVerdict *out);

/*
 Checks a theorem case given as JSON and returns the condition report as
 JSON; free it with [`ik_string_free`].

 # Safety
 `case_json` must be a NUL-terminated string; `out` must be writable.
 */
enum IkStatus ik_check_case(const char *case_json, char **out);

/*
 Runs one bundled fixture, or all of them when `id` is null, on the
 default grid. Writes the outcomes as a JSON array and sets `all_passed`.

 # Safety
 `id` null or NUL-terminated; `out_json` and `all_passed` writable.
 */
enum IkStatus ik_reproduce(const char *id, char **out_json, int32_t *all_passed);

/*
 `sf(p*) - sf(p)` at `x` for the fixed weight pair with shared components.

 # Safety
 `out` must be null or valid for writes.
 */
enum IkStatus ik_k1(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IKORDER_H */
