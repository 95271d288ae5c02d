#ifndef CYCLOGAP_H
#define CYCLOGAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum cg_status {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  /**
   * Zero or otherwise out-of-domain argument.
   */
  CG_STATUS_INVALID_ARGUMENT = 2,
  CG_STATUS_CAP_EXCEEDED = 3,
  CG_STATUS_OVERFLOW = 4,
  CG_STATUS_NOT_SQUAREFREE = 5,
  CG_STATUS_NOT_ODD = 6,
  CG_STATUS_NOT_PRIME = 7,
  CG_STATUS_PRIME_NOT_LARGER = 8,
  /**
   * Caller buffer too short; the required length was written back.
   */
  CG_STATUS_BUFFER_TOO_SMALL = 9,
  /**
   * Arithmetic failure that should not happen for valid inputs.
   */
  CG_STATUS_ARITHMETIC = 10,
  CG_STATUS_INTERNAL = 11,
} cg_status;

/**
 * Which gap table of a block report to read.
 */
typedef enum cg_table {
  CG_TABLE_WITHIN_M = 0,
  CG_TABLE_WITHIN_R = 1,
  CG_TABLE_BETWEEN_M = 2,
  CG_TABLE_BETWEEN_R = 3,
  CG_TABLE_BETWEEN_P = 4,
} cg_table;

/**
 * Block gap tables for one `(m, p)`.
 */
typedef struct cg_gap_report cg_gap_report;

/**
 * Integer polynomial handle.
 */
typedef struct cg_poly cg_poly;

/**
 * Outcome of every block check for one `(m, p)`.
 */
typedef struct cg_verification cg_verification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into this library from the same thread.
 */
const char *cg_last_error(void);

/**
 * The n-th cyclotomic polynomial.
 */
enum cg_status cg_phi(uint64_t n, struct cg_poly **out);

/**
 * The n-th inverse cyclotomic polynomial.
 */
enum cg_status cg_psi(uint64_t n, struct cg_poly **out);

/**
 * `Phi_mp` built from its representative blocks.
 */
enum cg_status cg_assemble_phi_mp(uint64_t m, uint64_t p, struct cg_poly **out);

/**
 * Builds a polynomial from `len` ascending coefficients.
 */
enum cg_status cg_poly_from_coeffs(const int64_t *coeffs, size_t len, struct cg_poly **out);

void cg_poly_free(struct cg_poly *poly);

/**
 * Number of stored coefficients (degree + 1; 0 for the zero polynomial).
 */
size_t cg_poly_len(const struct cg_poly *poly);

/**
 * Copies the ascending coefficients into `buf`, which must hold
 * `cg_poly_len` entries.
 */
enum cg_status cg_poly_coeffs(const struct cg_poly *poly, int64_t *buf, size_t len);

/**
 * Maximum gap between consecutive exponents; fails on the zero polynomial.
 */
enum cg_status cg_poly_max_gap(const struct cg_poly *poly, size_t *out);

/**
 * Maximum gap of the n-th cyclotomic polynomial.
 */
enum cg_status cg_gap(uint64_t n, size_t *out);

/**
 * Maximum gap of `Phi_mp` from the block gap tables.
 */
enum cg_status cg_max_gap_via_blocks(uint64_t m, uint64_t p, size_t *out);

enum cg_status cg_block_gap_report(uint64_t m, uint64_t p, struct cg_gap_report **out);

void cg_gap_report_free(struct cg_gap_report *report);

enum cg_status cg_gap_report_gap(const struct cg_gap_report *report, size_t *out);

/**
 * Copies one gap table (one entry per p-block). `needed` always receives
 * the table length; pass `len = 0` to query it.
 */
enum cg_status cg_gap_report_table(const struct cg_gap_report *report,
                                   enum cg_table table,
                                   size_t *buf,
                                   size_t len,
                                   size_t *needed);

/**
 * Runs every block check for `(m, p)`. A failing check is not an error:
 * the call succeeds and the handle records the failure.
 */
enum cg_status cg_verify_instance(uint64_t m, uint64_t p, struct cg_verification **out);

void cg_verification_free(struct cg_verification *v);

/**
 * 1 if every check passed, 0 otherwise (also 0 for NULL).
 */
int32_t cg_verification_all_passed(const struct cg_verification *v);

/**
 * Number of checks; indices `0..count` are valid for the accessors below.
 */
size_t cg_check_count(void);

/**
 * Static NUL-terminated name of check `index`, or NULL if out of range.
 */
const char *cg_check_name(size_t index);

/**
 * Writes 1 to `passed` if check `index` passed, else 0.
 */
enum cg_status cg_verification_check(const struct cg_verification *v,
                                     size_t index,
                                     int32_t *passed);

/**
 * The full report as JSON; free with [`cg_string_free`].
 */
enum cg_status cg_verification_to_json(const struct cg_verification *v, char **out);

void cg_string_free(char *s);

/**
 * Renders a polynomial in ascending order; free with [`cg_string_free`].
 */
enum cg_status cg_poly_to_string(const struct cg_poly *poly, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLOGAP_H */
