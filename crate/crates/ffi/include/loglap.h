#ifndef LOGLAP_H
#define LOGLAP_H

/* Generated by cbindgen; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum LoglapStatus {
  LOGLAP_STATUS_OK = 0,
  LOGLAP_STATUS_NULL_POINTER = 1,
  LOGLAP_STATUS_DOMAIN = 2,
  LOGLAP_STATUS_UNSUPPORTED_ORDER = 3,
  LOGLAP_STATUS_SINGULARITY = 4,
  LOGLAP_STATUS_DIVERGENCE = 5,
  LOGLAP_STATUS_INVALID_INPUT = 6,
  LOGLAP_STATUS_INSUFFICIENT_DATA = 7,
  LOGLAP_STATUS_PARSE = 8,
  LOGLAP_STATUS_INDEX_OUT_OF_RANGE = 9,
  /**
   * The value was computed but some integral missed its tolerance.
   */
  LOGLAP_STATUS_NOT_CONVERGED = 10,
  LOGLAP_STATUS_PANIC = 11,
} LoglapStatus;

/**
 * Opaque handle owning a computed table.
 */
typedef struct LoglapFundSolTable LoglapFundSolTable;

typedef struct LoglapQuadratureSpec {
  double abs_tol;
  double rel_tol;
  uint32_t max_depth;
  uint32_t osc_blocks;
  bool accel;
} LoglapQuadratureSpec;

typedef struct LoglapLogConstants {
  double gamma_d;
  double rho_d;
  double omega;
} LoglapLogConstants;

typedef struct LoglapComplex {
  double re;
  double im;
} LoglapComplex;

/**
 * One row of a fundamental-solution table.
 */
typedef struct LoglapFundSolRow {
  double r;
  struct LoglapComplex phi;
  double e1_rem;
  double e2_rem;
  struct LoglapComplex total;
  double err_estimate;
  bool converged;
} LoglapFundSolRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *loglap_status_message(enum LoglapStatus status);

struct LoglapQuadratureSpec loglap_default_spec(void);

/**
 * # Safety
 * `out` must be null or point to writable memory for one value.
 */
enum LoglapStatus loglap_log_constants(uint32_t d, struct LoglapLogConstants *out);

/**
 * # Safety
 * `out` must be null or point to writable memory for one value.
 */
enum LoglapStatus loglap_bessel_j(double nu, double z, double *out);

/**
 * # Safety
 * `out` must be null or point to writable memory for one value.
 */
enum LoglapStatus loglap_hankel1(double nu, double z, struct LoglapComplex *out);

/**
 * Outgoing Helmholtz fundamental solution Φ_d(r).
 *
 * # Safety
 * `out` must be null or point to writable memory for one value.
 */
enum LoglapStatus loglap_helmholtz_phi(uint32_t d, double r, struct LoglapComplex *out);

/**
 * ∫₀^∞ heat kernel dt at distance r, for d ≥ 3.
 *
 * # Safety
 * `out` must be null or point to writable memory for one value.
 */
enum LoglapStatus loglap_heat_time_integral(uint32_t d, double r, double *out);

/**
 * log(−Δ) of the Gaussian e^{−|x|²/2} at norm `r`, by the singular-integral
 * and the spectral route. A null `spec` selects the defaults.
 *
 * # Safety
 * `spec` must be null or valid; the out-pointers must be writable.
 */
enum LoglapStatus loglap_apply_gaussian(uint32_t d,
                                        double r,
                                        const struct LoglapQuadratureSpec *spec,
                                        double *out_integral,
                                        double *out_spectral);

/**
 * Number of built-in witnesses accepted by [`loglap_division_residual`].
 */
uintptr_t loglap_witness_count(void);

/**
 * |⟨E_log, log|·|²ψ⟩ − ∫ψ| for the built-in witness with the given index.
 *
 * # Safety
 * `spec` must be null or valid; `out` must be writable.
 */
enum LoglapStatus loglap_division_residual(uintptr_t witness,
                                           uint32_t d,
                                           const struct LoglapQuadratureSpec *spec,
                                           double *out);

/**
 * Tabulate the fundamental solution at `n` radii. On success `*out` owns a
 * table that must be released with [`loglap_fundsol_free`].
 *
 * # Safety
 * `radii` must point to `n` readable values; `spec` must be null or valid;
 * `out` must be writable.
 */
enum LoglapStatus loglap_fundsol_new(uint32_t d,
                                     const double *radii,
                                     uintptr_t n,
                                     const struct LoglapQuadratureSpec *spec,
                                     struct LoglapFundSolTable **out);

/**
 * Number of rows; 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle from [`loglap_fundsol_new`].
 */
uintptr_t loglap_fundsol_len(const struct LoglapFundSolTable *table);

/**
 * Row `i`. Rows whose evaluation failed report that failure's status.
 *
 * # Safety
 * `table` must be null or a live handle; `out` must be writable.
 */
enum LoglapStatus loglap_fundsol_get(const struct LoglapFundSolTable *table,
                                     uintptr_t i,
                                     struct LoglapFundSolRow *out);

/**
 * Release a table. Null is accepted and ignored.
 *
 * # Safety
 * `table` must be null or a handle not yet freed.
 */
void loglap_fundsol_free(struct LoglapFundSolTable *table);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGLAP_H */
