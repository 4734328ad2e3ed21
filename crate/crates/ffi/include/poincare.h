#ifndef POINCARE_H
#define POINCARE_H

/* Generated from the Rust sources; edit there, not here. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * The call succeeded.
 */
#define POINCARE_OK 0

/**
 * The computation ran but a mathematical check failed.
 */
#define POINCARE_ERR_MATH 1

/**
 * An argument was out of range or a required pointer was null.
 */
#define POINCARE_ERR_ARGUMENT 2

/**
 * An internal invariant was violated; the handle is unusable.
 */
#define POINCARE_ERR_PANIC 3

/**
 * Largest degree the interface accepts.
 */
#define POINCARE_MAX_DEGREE 30

/**
 * A computed series for one degree. Opaque; create with
 * `poincare_compute`, release with `poincare_free`.
 */
typedef struct PoincareSeries PoincareSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Compute the series for binary forms of degree `n` and store a handle
 * in `*out`. The seed fixes every random choice; equal seeds give
 * byte-identical results. Returns `POINCARE_OK`, or an error code with
 * `*out` untouched.
 */
int32_t poincare_compute(uint32_t n, uint64_t seed, struct PoincareSeries **out);

/**
 * Release a handle. Null is accepted and ignored.
 */
void poincare_free(struct PoincareSeries *series);

/**
 * The degree the handle was computed for, or 0 for a null handle.
 */
uint32_t poincare_degree(const struct PoincareSeries *series);

/**
 * Number of stored numerator coefficients: the polynomial is
 * palindromic, so only the first half up to the middle is kept.
 * Returns 0 for a null handle.
 */
size_t poincare_half_len(const struct PoincareSeries *series);

/**
 * Write numerator coefficient `index` as a decimal string to `*out`.
 * Coefficients grow past what fits in a C integer type for larger
 * degrees, so they travel as text. Free with `poincare_string_free`.
 */
int32_t poincare_half_coeff(const struct PoincareSeries *series, size_t index, char **out);

/**
 * Write the two-line text rendering (numerator coefficients, then the
 * factored denominator) to `*out`. Free with `poincare_string_free`.
 */
int32_t poincare_text(const struct PoincareSeries *series, char **out);

/**
 * Write the JSON rendering of the entry to `*out`. Integers that do
 * not fit in 53 bits appear as decimal strings. Free with
 * `poincare_string_free`.
 */
int32_t poincare_json(const struct PoincareSeries *series, char **out);

/**
 * Compare the Taylor expansion of the stored series against
 * independently counted invariant dimensions, far enough to pin the
 * rational function down. Returns `POINCARE_OK` when every coefficient
 * matches. On a mismatch returns `POINCARE_ERR_MATH` and, when
 * `first_mismatch` is non-null, stores the first offending degree
 * there; on success stores -1.
 */
int32_t poincare_certify(const struct PoincareSeries *series, int64_t *first_mismatch);

/**
 * Free a string returned by this library. Null is accepted and ignored.
 */
void poincare_string_free(char *text);

/**
 * Library version as a static string; do not free.
 */
const char *poincare_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* POINCARE_H */
