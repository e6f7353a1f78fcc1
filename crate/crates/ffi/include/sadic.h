/* Generated by cbindgen; do not edit. */

#ifndef SADIC_H
#define SADIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SadicStatus {
  SADIC_STATUS_OK = 0,
  SADIC_STATUS_NULL_POINTER = 1,
  SADIC_STATUS_INVALID_ARGUMENT = 2,
  SADIC_STATUS_CONFIG = 3,
  SADIC_STATUS_STRUCTURE = 4,
  SADIC_STATUS_LEVEL_UNAVAILABLE = 5,
  SADIC_STATUS_UNVALIDATED = 6,
  SADIC_STATUS_SIZE_LIMIT = 7,
  SADIC_STATUS_MEMORY_BUDGET = 8,
  SADIC_STATUS_NOT_DECOMPOSABLE = 9,
  SADIC_STATUS_IO = 10,
  SADIC_STATUS_PANIC = 11,
} SadicStatus;

typedef enum SadicWhich {
  SADIC_WHICH_U = 0,
  SADIC_WHICH_V = 1,
} SadicWhich;

/**
 * Opaque parameter family.
 */
typedef struct SadicFamily SadicFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or null. Free with [`sadic_string_free`].
 */
char *sadic_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sadic_string_free(char *s);

/**
 * Sets the process-wide materialization cap in letters.
 */
void sadic_set_max_letters(uint64_t cap);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SadicStatus sadic_family_paper(struct SadicFamily **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SadicStatus sadic_family_mini(struct SadicFamily **out);

/**
 * Family from three tables of `levels` decimal or `2^k` strings.
 *
 * # Safety
 * `l`, `m`, `n` must each point to `levels` valid C strings; `out` must be valid for writes.
 */
enum SadicStatus sadic_family_custom(const char *const *l,
                                     const char *const *m,
                                     const char *const *n,
                                     size_t levels,
                                     struct SadicFamily **out);

/**
 * Family from a TOML file, or `"paper"` / `"mini"`.
 *
 * # Safety
 * `path` must be a valid C string; `out` must be valid for writes.
 */
enum SadicStatus sadic_family_from_config(const char *path, struct SadicFamily **out);

/**
 * # Safety
 * `fam` must come from a `sadic_family_*` constructor and not have been freed. Null is ignored.
 */
void sadic_family_free(struct SadicFamily *fam);

/**
 * Hypothesis report for index `i` as JSON; `all_ok` receives the overall verdict.
 *
 * # Safety
 * Pointers must be valid; `json_out` receives a string to free with [`sadic_string_free`].
 */
enum SadicStatus sadic_hypothesis_check(const struct SadicFamily *fam,
                                        size_t i,
                                        bool *all_ok,
                                        char **json_out);

/**
 * Parikh vectors of `u_i^(h)` and `v_i^(h)` as `{"u": {...}, "v": {...}}`.
 *
 * # Safety
 * Pointers must be valid; free the string with [`sadic_string_free`].
 */
enum SadicStatus sadic_parikh_uv(const struct SadicFamily *fam,
                                 size_t h,
                                 size_t i,
                                 char **json_out);

/**
 * `s(n)` for decimal `n`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SadicStatus sadic_s_symbolic(const struct SadicFamily *fam, const char *n, uint8_t *out);

/**
 * `p(n)` for decimal `n`, as a decimal string.
 *
 * # Safety
 * Pointers must be valid; free the string with [`sadic_string_free`].
 */
enum SadicStatus sadic_p_symbolic(const struct SadicFamily *fam, const char *n, char **out);

/**
 * `u_i^(h)` or `v_i^(h)` as a string of `'0'` and `'1'`.
 *
 * # Safety
 * Pointers must be valid; free the string with [`sadic_string_free`].
 */
enum SadicStatus sadic_generate_word(const struct SadicFamily *fam,
                                     size_t h,
                                     size_t i,
                                     enum SadicWhich which,
                                     char **out);

/**
 * Prefix of `u^(h)` of `len` letters.
 *
 * # Safety
 * Pointers must be valid; free the string with [`sadic_string_free`].
 */
enum SadicStatus sadic_prefix(const struct SadicFamily *fam, size_t h, size_t len, char **out);

/**
 * Window length `N_i` as a decimal string.
 *
 * # Safety
 * Pointers must be valid; free the string with [`sadic_string_free`].
 */
enum SadicStatus sadic_recurrence_bound(const struct SadicFamily *fam, size_t i, char **out);

/**
 * Frequency report for rank `i` as JSON.
 *
 * # Safety
 * Pointers must be valid; free the string with [`sadic_string_free`].
 */
enum SadicStatus sadic_excess_report_json(const struct SadicFamily *fam, size_t i, char **out);

/**
 * Splits `word` as `s σ_h(v) p`; writes `{"s": ..., "v": ..., "p": ...}` with `s`, `p` in run notation.
 *
 * # Safety
 * Pointers must be valid; free the string with [`sadic_string_free`].
 */
enum SadicStatus sadic_desubstitute(const struct SadicFamily *fam,
                                    size_t h,
                                    const char *word,
                                    char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SADIC_H */
