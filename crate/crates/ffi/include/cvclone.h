/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CVCLONE_H
#define CVCLONE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum CvcStatus {
  CVC_STATUS_OK = 0,
  CVC_STATUS_NULL_POINTER = 1,
  CVC_STATUS_INVALID_ARGUMENT = 2,
  CVC_STATUS_DIMENSION_MISMATCH = 3,
  CVC_STATUS_INDEX_OUT_OF_RANGE = 4,
  CVC_STATUS_REJECTED_TRANSFORM = 5,
  CVC_STATUS_NOT_UNITARY = 6,
  CVC_STATUS_UNPHYSICAL = 7,
  CVC_STATUS_INVALID_UTF8 = 8,
  CVC_STATUS_BUFFER_TOO_SMALL = 9,
  CVC_STATUS_PANIC = 10,
} CvcStatus;

typedef enum CvcVariant {
  CVC_VARIANT_DFT = 0,
  CVC_VARIANT_MSPLITTER = 1,
  CVC_VARIANT_PERCOPY = 2,
} CvcVariant;

/*
 A cloning circuit with its mode roles.
 */
typedef struct CvcCloner CvcCloner;

/*
 Clone statistics of one run.
 */
typedef struct CvcReport CvcReport;

/*
 A multimode Gaussian state.
 */
typedef struct CvcState CvcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Error message of the last call on this thread, empty if it succeeded.
 The pointer stays valid until the next call into this library on the
 same thread.
 */
const char *cvc_last_error_message(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void cvc_string_free(char *s);

/*
 `MN/(MN + M − N)`.

 # Safety
 `out` must be valid for writes.
 */
enum CvcStatus cvc_optimal_fidelity(size_t n, size_t m, double *out);

/*
 Optimal added variance per quadrature, `1/N − 1/M`.

 # Safety
 `out` must be valid for writes.
 */
enum CvcStatus cvc_optimal_added_variance(size_t n, size_t m, double *out);

/*
 Builds an N → M cloner. `variant` is a `CvcVariant` value.

 # Safety
 `out` must be valid for writes.
 */
enum CvcStatus cvc_cloner_new(size_t n, size_t m, uint32_t variant, struct CvcCloner **out);

/*
 Parses a cloner from its JSON description.

 # Safety
 `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum CvcStatus cvc_cloner_from_json(const char *json, struct CvcCloner **out);

/*
 # Safety
 `cloner` must come from this library and not have been freed. Null is
 ignored.
 */
void cvc_cloner_free(struct CvcCloner *cloner);

/*
 Serializes the cloner; release the string with `cvc_string_free`.

 # Safety
 `cloner` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_cloner_to_json(const struct CvcCloner *cloner, char **out);

/*
 # Safety
 `cloner` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_cloner_n_modes(const struct CvcCloner *cloner, size_t *out);

/*
 # Safety
 `cloner` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_cloner_beam_splitter_count(const struct CvcCloner *cloner, size_t *out);

/*
 # Safety
 `cloner` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_cloner_amplifier_count(const struct CvcCloner *cloner, size_t *out);

/*
 Copies the clone mode indices into `buf`. `out_len` receives the number
 of clones even when `buf` is too small.

 # Safety
 `cloner` must be live; `buf` must hold `len` elements; `out_len` must be
 valid for writes.
 */
enum CvcStatus cvc_cloner_clone_modes(const struct CvcCloner *cloner,
                                      size_t *buf,
                                      size_t len,
                                      size_t *out_len);

/*
 Runs the cloner on `|α⟩`, squeezed by `squeeze` together with every
 auxiliary mode, and returns the full output state.

 # Safety
 `cloner` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_cloner_run(const struct CvcCloner *cloner,
                              double alpha_re,
                              double alpha_im,
                              double squeeze,
                              struct CvcState **out);

/*
 # Safety
 `state` must come from this library and not have been freed. Null is
 ignored.
 */
void cvc_state_free(struct CvcState *state);

/*
 # Safety
 `state` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_state_n_modes(const struct CvcState *state, size_t *out);

/*
 Writes the `2n` quadrature means `(x0, p0, x1, p1, …)`.

 # Safety
 `state` must be live; `buf` must hold `len` doubles.
 */
enum CvcStatus cvc_state_mean(const struct CvcState *state, double *buf, size_t len);

/*
 Writes the `2n × 2n` covariance matrix in row-major order.

 # Safety
 `state` must be live; `buf` must hold `len` doubles.
 */
enum CvcStatus cvc_state_cov(const struct CvcState *state, double *buf, size_t len);

/*
 Fidelity of mode `mode` with the coherent state `|α⟩`.

 # Safety
 `state` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_state_fidelity_coherent(const struct CvcState *state,
                                           size_t mode,
                                           double alpha_re,
                                           double alpha_im,
                                           double *out);

/*
 Runs the cloner and collects clone statistics.

 # Safety
 `cloner` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_report_new(const struct CvcCloner *cloner,
                              double alpha_re,
                              double alpha_im,
                              double squeeze,
                              struct CvcReport **out);

/*
 # Safety
 `report` must come from this library and not have been freed. Null is
 ignored.
 */
void cvc_report_free(struct CvcReport *report);

/*
 # Safety
 `report` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_report_num_clones(const struct CvcReport *report, size_t *out);

/*
 Fidelity of clone `index` (position in the clone list, not mode index).

 # Safety
 `report` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_report_clone_fidelity(const struct CvcReport *report, size_t index, double *out);

/*
 Writes the two means and the four row-major covariance entries of clone
 `index` into `buf` (6 doubles).

 # Safety
 `report` must be live; `buf` must hold `len` doubles.
 */
enum CvcStatus cvc_report_clone_moments(const struct CvcReport *report,
                                        size_t index,
                                        double *buf,
                                        size_t len);

/*
 # Safety
 `report` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_report_optimal_fidelity(const struct CvcReport *report, double *out);

/*
 Whether fidelity, added noise and means all meet the optimal bounds.

 # Safety
 `report` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_report_saturated(const struct CvcReport *report, bool *out);

/*
 # Safety
 `report` must be live; `out` must be valid for writes.
 */
enum CvcStatus cvc_report_to_json(const struct CvcReport *report, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CVCLONE_H */
