#ifndef NORMLINES_H
#define NORMLINES_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum NlStatus {
  NL_STATUS_OK = 0,
  NL_STATUS_NULL_POINTER = 1,
  NL_STATUS_INVALID_UTF8 = 2,
  NL_STATUS_PARSE = 3,
  NL_STATUS_INVALID_ARGUMENT = 4,
  NL_STATUS_DEGENERATE = 5,
  NL_STATUS_INTERNAL = 6,
  NL_STATUS_PANIC = 7,
} NlStatus;

/**
 * A 2x2 rational matrix.
 */
typedef struct NlMatrix2 NlMatrix2;

/**
 * A 3x3 rational matrix.
 */
typedef struct NlMatrix3 NlMatrix3;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a 2x2 matrix from 4 row-major entry strings.
 *
 * # Safety
 * `entries` must point to 4 valid NUL-terminated strings; `out` must be writable.
 */
enum NlStatus nl_matrix2_new(const char *const *entries, struct NlMatrix2 **out);

/**
 * # Safety
 * `m` must be null or a handle from [`nl_matrix2_new`] not yet freed.
 */
void nl_matrix2_free(struct NlMatrix2 *m);

/**
 * Builds a 3x3 matrix from 9 row-major entry strings.
 *
 * # Safety
 * `entries` must point to 9 valid NUL-terminated strings; `out` must be writable.
 */
enum NlStatus nl_matrix3_new(const char *const *entries, struct NlMatrix3 **out);

/**
 * # Safety
 * `m` must be null or a handle from [`nl_matrix3_new`] not yet freed.
 */
void nl_matrix3_free(struct NlMatrix3 *m);

/**
 * Whether some line through the origin keeps its length under `m`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum NlStatus nl_matrix2_has_lines(const struct NlMatrix2 *m, bool *out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum NlStatus nl_matrix3_has_lines(const struct NlMatrix3 *m, bool *out);

/**
 * Full 2x2 analysis as canonical JSON. Free the result with [`nl_string_free`].
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum NlStatus nl_analyze2_json(const struct NlMatrix2 *m, char **out);

/**
 * Full 3x3 analysis as canonical JSON. `pivot` is `'x'`, `'y'`, `'z'` or 0
 * for the default choice.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum NlStatus nl_analyze3_json(const struct NlMatrix3 *m, uint32_t bound, char pivot, char **out);

/**
 * Powers and eigen-iterates of `[[q+1, q], [q, q-1]]` as canonical JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum NlStatus nl_torus_json(int64_t q, uint64_t n, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void nl_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *nl_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NORMLINES_H */
