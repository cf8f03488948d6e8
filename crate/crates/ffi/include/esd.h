#ifndef ESD_H
#define ESD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum EsdStatus {
  ESD_STATUS_OK = 0,
  ESD_STATUS_NULL_POINTER = 1,
  ESD_STATUS_INVALID_ARGUMENT = 2,
  ESD_STATUS_UNKNOWN_KEY = 3,
  ESD_STATUS_INVALID_STATE = 4,
  ESD_STATUS_NUMERICAL = 5,
  ESD_STATUS_OUT_OF_RANGE = 6,
  ESD_STATUS_UNKNOWN_PRESET = 7,
  ESD_STATUS_PANIC = 8,
} EsdStatus;

// Opaque model parameter set.
typedef struct EsdParams EsdParams;

// Opaque time series produced by [`esd_evolve`].
typedef struct EsdSeries EsdSeries;

// Opaque sweep table produced by [`esd_figure`].
typedef struct EsdSweep EsdSweep;

typedef struct EsdRecord {
  double scaled_time;
  double negativity;
  double concurrence;
  double purity;
  double trace_error;
} EsdRecord;

typedef struct EsdSweepRow {
  double beta1;
  double beta2;
  double gamma;
  double theta;
  double phi;
  double zeta1;
  double zeta2;
  struct EsdRecord record;
} EsdSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or null.
//
// The pointer stays valid until the next failing call on the same thread.
const char *esd_last_error(void);

// New parameter set with the defaults (ζ₁ = ζ₂ = 1, n_max = 6, everything else 0).
struct EsdParams *esd_params_new(void);

// # Safety
// `params` must come from [`esd_params_new`] and not be freed twice.
void esd_params_free(struct EsdParams *params);

// Sets one parameter by name: beta1, beta2, zeta1, zeta2, phi, gamma, theta, nmax, n0.
//
// # Safety
// `params` must be a live handle and `key` a NUL-terminated string.
enum EsdStatus esd_params_set(struct EsdParams *params, const char *key, double value);

// Reads one parameter by name.
//
// # Safety
// `params` must be a live handle, `key` NUL-terminated and `out` writable.
enum EsdStatus esd_params_get(const struct EsdParams *params, const char *key, double *out);

// Evolves the initial state and samples `samples` scaled times from 0 to `t_max`.
//
// # Safety
// `params` must be a live handle and `out` writable. On success `*out`
// owns a series to be released with [`esd_series_free`].
enum EsdStatus esd_evolve(const struct EsdParams *params,
                          double t_max,
                          size_t samples,
                          struct EsdSeries **out);

// # Safety
// `series` must be a live handle or null.
size_t esd_series_len(const struct EsdSeries *series);

// # Safety
// `series` must be a live handle and `out` writable.
enum EsdStatus esd_series_get(const struct EsdSeries *series, size_t index, struct EsdRecord *out);

// # Safety
// `series` must come from [`esd_evolve`] and not be freed twice.
void esd_series_free(struct EsdSeries *series);

// Negativity series from the three-state oracle (vacuum initial phonon state only).
//
// # Safety
// `times` must point to `count` ascending doubles and `out` to `count` writable doubles.
enum EsdStatus esd_oracle_negativity(const struct EsdParams *params,
                                     const double *times,
                                     size_t count,
                                     double *out);

// Negativity of a 4×4 two-qubit density matrix (32 doubles, row-major re/im pairs).
//
// # Safety
// `rho` must point to 32 readable doubles and `out` must be writable.
enum EsdStatus esd_negativity(const double *rho, double *out);

// Wootters concurrence of a 4×4 two-qubit density matrix (same layout as [`esd_negativity`]).
//
// # Safety
// `rho` must point to 32 readable doubles and `out` must be writable.
enum EsdStatus esd_concurrence(const double *rho, double *out);

// Runs a figure preset (fig1, fig2a, fig2b, fig3) with its default grid.
// `threads` caps parallelism; 0 uses all cores.
//
// # Safety
// `name` must be NUL-terminated and `out` writable. On success `*out` owns
// a table to be released with [`esd_sweep_free`].
enum EsdStatus esd_figure(const char *name, size_t threads, struct EsdSweep **out);

// # Safety
// `sweep` must be a live handle or null.
size_t esd_sweep_len(const struct EsdSweep *sweep);

// # Safety
// `sweep` must be a live handle and `out` writable.
enum EsdStatus esd_sweep_get(const struct EsdSweep *sweep, size_t index, struct EsdSweepRow *out);

// # Safety
// `sweep` must come from [`esd_figure`] and not be freed twice.
void esd_sweep_free(struct EsdSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ESD_H */
