#ifndef ODAT_H
#define ODAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum OdatStatus {
  ODAT_STATUS_OK = 0,
  ODAT_STATUS_NULL_POINTER = 1,
  ODAT_STATUS_INVALID_ARGUMENT = 2,
  ODAT_STATUS_DIMENSION = 3,
  ODAT_STATUS_NUMERICAL = 4,
  ODAT_STATUS_SYMMETRY_VIOLATION = 5,
  ODAT_STATUS_IO = 6,
  ODAT_STATUS_PANIC = 7,
} OdatStatus;

// Which transform a denoising call thresholds in, passed as `uint32_t`.
typedef enum OdatBranch {
  ODAT_BRANCH_DFT = 0,
  ODAT_BRANCH_ODAT = 1,
} OdatBranch;

// Opaque transform plan.
typedef struct OdatPlan OdatPlan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *odat_version(void);

// Message of the last failed call on this thread, or an empty string.
//
// The pointer stays valid until the next call into the library on this thread.
const char *odat_last_error_message(void);

// Build a plan for frames of length `n` sampled at `fs` Hz.
//
// `negative_exponent` nonzero selects exp(-iH) instead of exp(+iH).
// On success `*out` receives a handle to release with `odat_plan_free`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum OdatStatus odat_plan_new(size_t n,
                              double fs,
                              double sigma1,
                              double sigma2,
                              int32_t negative_exponent,
                              struct OdatPlan **out);

// Release a plan. Null is accepted and ignored.
//
// # Safety
// `plan` must be null or a handle from `odat_plan_new` not yet freed.
void odat_plan_free(struct OdatPlan *plan);

// Frame length of a plan, or 0 for a null handle.
//
// # Safety
// `plan` must be null or a live handle.
size_t odat_plan_len(const struct OdatPlan *plan);

// Forward ODAT of a real frame into split complex output.
//
// # Safety
// `frame`, `re` and `im` must each point to `len` valid doubles.
enum OdatStatus odat_forward(const struct OdatPlan *plan,
                             const double *frame,
                             size_t len,
                             double *re,
                             double *im);

// Unnormalized DFT of a real frame into split complex output.
//
// # Safety
// `frame`, `re` and `im` must each point to `len` valid doubles.
enum OdatStatus odat_dft(const struct OdatPlan *plan,
                         const double *frame,
                         size_t len,
                         double *re,
                         double *im);

// Inverse ODAT of a split complex spectrum back to a real frame.
//
// Fails with `ODAT_STATUS_SYMMETRY_VIOLATION` when the spectrum is not
// the image of a real frame.
//
// # Safety
// `re`, `im` and `frame` must each point to `len` valid doubles.
enum OdatStatus odat_inverse(const struct OdatPlan *plan,
                             const double *re,
                             const double *im,
                             size_t len,
                             double *frame);

// Denoise a noisy frame by hard thresholding at the mean DFT magnitude.
//
// `branch` takes an `OdatBranch` value.
//
// # Safety
// `noisy` and `out` must each point to `len` valid doubles.
enum OdatStatus odat_denoise(const struct OdatPlan *plan,
                             const double *noisy,
                             size_t len,
                             uint32_t branch,
                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ODAT_H */
