/* C interface to the overdet workbench. Strings returned through
 * out_json parameters are owned by the caller and released with
 * overdet_string_free(). */

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every API call. `Ok`, `InputError`, `ProbeGrowing`,
 * `ProbeVacuous`, and `ResourceCap` match the command-line exit codes.
 */
typedef enum OverdetStatus {
  OverdetStatus_Ok = 0,
  OverdetStatus_InputError = 1,
  OverdetStatus_ProbeGrowing = 2,
  OverdetStatus_ProbeVacuous = 3,
  OverdetStatus_ResourceCap = 4,
  OverdetStatus_NullPointer = 5,
  OverdetStatus_InvalidUtf8 = 6,
  OverdetStatus_Panicked = 7,
} OverdetStatus;

/**
 * Parsed input document; created by [`overdet_document_parse`], released
 * by [`overdet_document_free`]. The struct is opaque to C.
 */
typedef struct OverdetDocument OverdetDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an input document. On success `*out_doc` owns the handle; on
 * failure `*out_doc` is null and the return status says why (parse error
 * details are not carried across this call — run the same text through
 * the command-line tool for the full message).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out_doc` must be a valid
 * pointer to writable memory.
 */
enum OverdetStatus overdet_document_parse(const char *json,
                                          bool lenient,
                                          struct OverdetDocument **out_doc);

/**
 * Releases a document handle. Null is a no-op; a handle must not be used
 * after this call.
 *
 * # Safety
 * `doc` must be null or a pointer from [`overdet_document_parse`] that has
 * not been freed.
 */
void overdet_document_free(struct OverdetDocument *doc);

/**
 * Releases a string returned through any `out_json` parameter.
 *
 * # Safety
 * `s` must be null or a string pointer returned by this library that has
 * not been freed.
 */
void overdet_string_free(char *s);

/**
 * Static version string; do not free.
 */
const char *overdet_version(void);

/**
 * Free resolution, integrability conditions, and annihilator report.
 *
 * # Safety
 * `doc` must be a live handle; `out_json` must be writable.
 */
enum OverdetStatus overdet_resolve(const struct OverdetDocument *doc, char **out_json);

/**
 * Factorization and Puiseux branch report for the document's curve.
 *
 * # Safety
 * `doc` must be a live handle; `out_json` must be writable.
 */
enum OverdetStatus overdet_variety(const struct OverdetDocument *doc,
                                   uint32_t puiseux_order,
                                   char **out_json);

/**
 * Axiom and subadditivity report for the document's weights.
 *
 * # Safety
 * `doc` must be a live handle; `out_json` must be writable.
 */
enum OverdetStatus overdet_weights(const struct OverdetDocument *doc, char **out_json);

/**
 * Support-width decay experiment. `weight_json` may be null to use the
 * gevrey weight with exponent 1/s; otherwise it is a weight object or a
 * document whose first weight is used.
 *
 * # Safety
 * `weight_json` must be null or NUL-terminated; `out_json` must be
 * writable.
 */
enum OverdetStatus overdet_pw_check(const char *weight_json,
                                    uint32_t s,
                                    double epsilon,
                                    uintptr_t factors,
                                    char **out_json);

/**
 * Finite-radius growth-transfer probe on the document's curve. The status
 * mirrors the probe verdict: `ProbeGrowing` and `ProbeVacuous` still carry
 * the full report in `out_json`.
 *
 * # Safety
 * `doc` must be a live handle; `out_json` must be writable.
 */
enum OverdetStatus overdet_pl_probe(const struct OverdetDocument *doc,
                                    double rmax,
                                    uint32_t alpha,
                                    uintptr_t radii,
                                    uintptr_t angles,
                                    uint64_t seed,
                                    char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
