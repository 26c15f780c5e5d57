#ifndef BETADYNE_H
#define BETADYNE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BdStatus {
  BD_STATUS_OK = 0,
  BD_STATUS_NULL_POINTER = 1,
  BD_STATUS_INVALID_ARGUMENT = 2,
  BD_STATUS_PARSE_ERROR = 3,
  BD_STATUS_NUMERIC_ERROR = 4,
  BD_STATUS_BUFFER_TOO_SMALL = 5,
  BD_STATUS_PANIC = 6,
} BdStatus;

typedef struct BdEnsemble BdEnsemble;

/**
 * Model plus the unraveling applied by the NHH and ensemble functions.
 */
typedef struct BdModel BdModel;

typedef struct BdCoalescence {
  double min_gap;
  double max_overlap;
  double measure;
  size_t pair_first;
  size_t pair_second;
} BdCoalescence;

typedef struct BdEpResult {
  double beta_re;
  double beta_im;
  double measure;
  /**
   * 1 when the measure reached the requested tolerance.
   */
  int32_t converged;
  size_t iterations;
} BdEpResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a model from the JSON model schema.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum BdStatus bd_model_from_json(const char *json, struct BdModel **out);

/**
 * Builds a named scenario. `params_json` may be null for defaults.
 *
 * # Safety
 * `name` must be a nul-terminated string, `params_json` null or
 * nul-terminated, and `out` a valid pointer.
 */
enum BdStatus bd_model_scenario(const char *name, const char *params_json, struct BdModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from a `bd_model_*` constructor and not be used afterwards.
 */
void bd_model_free(struct BdModel *model);

/**
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum BdStatus bd_model_dim(const struct BdModel *model, size_t *out);

/**
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum BdStatus bd_model_channel_count(const struct BdModel *model, size_t *out);

/**
 * Sets one displacement per channel; any mixing matrix is dropped.
 *
 * # Safety
 * `re` and `im` must point to `n` doubles each.
 */
enum BdStatus bd_model_set_betas(struct BdModel *model,
                                 const double *re,
                                 const double *im,
                                 size_t n);

/**
 * No-jump Hamiltonian of the current unraveling, `dim * dim` values.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles each.
 */
enum BdStatus bd_model_nhh(const struct BdModel *model, double *re, double *im, size_t len);

/**
 * Liouvillian on column-stacked density matrices, `dim^4` values.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles each.
 */
enum BdStatus bd_model_liouvillian(const struct BdModel *model, double *re, double *im, size_t len);

/**
 * Eigenvalues of the no-jump Hamiltonian, `dim` values, sorted by
 * descending real part.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles each.
 */
enum BdStatus bd_model_nhh_eigenvalues(const struct BdModel *model,
                                       double *re,
                                       double *im,
                                       size_t len);

/**
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum BdStatus bd_model_coalescence(const struct BdModel *model, struct BdCoalescence *out);

/**
 * Searches a complex box for a displacement, applied equally to every
 * channel, at which the no-jump Hamiltonian has an EP.
 *
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum BdStatus bd_ep_find_beta(const struct BdModel *model,
                              double re_min,
                              double re_max,
                              double im_min,
                              double im_max,
                              double tol,
                              struct BdEpResult *out);

/**
 * Runs `trajectories` quantum-jump trajectories of the unraveled model.
 *
 * # Safety
 * `psi_re` and `psi_im` must point to `dim` doubles each; `out` must be valid.
 */
enum BdStatus bd_ensemble_run(const struct BdModel *model,
                              const double *psi_re,
                              const double *psi_im,
                              size_t dim,
                              double t0,
                              double t1,
                              size_t steps,
                              size_t trajectories,
                              uint64_t seed,
                              struct BdEnsemble **out);

/**
 * Number of time points; 0 for a null handle.
 *
 * # Safety
 * `ens` must be null or a live ensemble handle.
 */
size_t bd_ensemble_len(const struct BdEnsemble *ens);

/**
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum BdStatus bd_ensemble_times(const struct BdEnsemble *ens, double *out, size_t len);

/**
 * Fraction of trajectories without any jump up to each time.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum BdStatus bd_ensemble_nojump_fraction(const struct BdEnsemble *ens, double *out, size_t len);

/**
 * Ensemble-averaged population of basis state `level` at each time.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum BdStatus bd_ensemble_population(const struct BdEnsemble *ens,
                                     size_t level,
                                     double *out,
                                     size_t len);

/**
 * Releases an ensemble. Null is ignored.
 *
 * # Safety
 * `ens` must come from [`bd_ensemble_run`] and not be used afterwards.
 */
void bd_ensemble_free(struct BdEnsemble *ens);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *bd_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *bd_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BETADYNE_H */
