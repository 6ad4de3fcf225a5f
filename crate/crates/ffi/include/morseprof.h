/* C interface to the morseprof library. Regenerated by the crate's build script. */

#ifndef MORSEPROF_H
#define MORSEPROF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum MpStatus {
  MP_STATUS_OK = 0,
  MP_STATUS_NULL_POINTER = 1,
  MP_STATUS_INVALID_UTF8 = 2,
  MP_STATUS_PARSE_ERROR = 3,
  MP_STATUS_VALIDATION_ERROR = 4,
  MP_STATUS_UNKNOWN_NAME = 5,
  MP_STATUS_CAP_EXCEEDED = 6,
  MP_STATUS_BUDGET_EXHAUSTED = 7,
} MpStatus;

/**
 * Opaque filtration handle.
 */
typedef struct MpFiltration MpFiltration;

/**
 * Opaque persistence pairing handle.
 */
typedef struct MpPairing MpPairing;

/**
 * Opaque profile handle (levels plus detected spikes).
 */
typedef struct MpProfile MpProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message set by the most recent failing call on this thread, or null.
 * The pointer stays valid until the next failing call on the thread.
 */
const char *mp_last_error_message(void);

/**
 * Parses the filtration file format. With `auto_close`, missing faces are
 * inserted at the smallest grade of their listed cofaces.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` to writable
 * pointer storage.
 */
enum MpStatus mp_filtration_parse(const char *text, bool auto_close, struct MpFiltration **out);

/**
 * Builds a built-in example filtration: point, circle, dunce-hat,
 * dunce-hat-filtration, pentagon-rips.
 *
 * # Safety
 * `name` must point to a NUL-terminated string and `out` to writable
 * pointer storage.
 */
enum MpStatus mp_filtration_catalog(const char *name, struct MpFiltration **out);

/**
 * # Safety
 * `f` must be a pointer from this library, not yet freed; null is a no-op.
 */
void mp_filtration_free(struct MpFiltration *f);

/**
 * Number of simplices; 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle from this library.
 */
size_t mp_filtration_simplex_count(const struct MpFiltration *f);

/**
 * Number of distinct grades; 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle from this library.
 */
size_t mp_filtration_level_count(const struct MpFiltration *f);

/**
 * Canonical filtration file text; free with `mp_string_free`.
 *
 * # Safety
 * `f` must be a live handle and `out` writable pointer storage.
 */
enum MpStatus mp_filtration_to_string(const struct MpFiltration *f, char **out);

/**
 * Computes the persistence pairing of a filtration.
 *
 * # Safety
 * `f` must be a live handle and `out` writable pointer storage.
 */
enum MpStatus mp_pairing_compute(const struct MpFiltration *f, struct MpPairing **out);

/**
 * # Safety
 * `p` must be a pointer from this library, not yet freed; null is a no-op.
 */
void mp_pairing_free(struct MpPairing *p);

/**
 * Barcode as JSON (`[{dim, birth, death|null}, ...]`); free with
 * `mp_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` writable pointer storage.
 */
enum MpStatus mp_barcode_json(const struct MpPairing *p, char **out);

/**
 * Betti number of the sublevel complex at `grade` in homology dimension
 * `dim`, written to `out`.
 *
 * # Safety
 * `p` must be a live handle and `out` writable integer storage.
 */
enum MpStatus mp_betti_at(const struct MpPairing *p, double grade, size_t dim, size_t *out);

/**
 * Computes the Morse complexity profile with exact values at levels of at
 * most `exact_cap` simplices, plus spike detection.
 *
 * # Safety
 * `f` must be a live handle and `out` writable pointer storage.
 */
enum MpStatus mp_profile_compute(const struct MpFiltration *f,
                                 size_t exact_cap,
                                 struct MpProfile **out);

/**
 * # Safety
 * `p` must be a pointer from this library, not yet freed; null is a no-op.
 */
void mp_profile_free(struct MpProfile *p);

/**
 * Profile and spikes as JSON; free with `mp_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` writable pointer storage.
 */
enum MpStatus mp_profile_json(const struct MpProfile *p, char **out);

/**
 * Number of detected spikes; 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle from this library.
 */
size_t mp_profile_spike_count(const struct MpProfile *p);

/**
 * Greedy critical total at level index `level`, written to `out`.
 *
 * # Safety
 * `p` must be a live handle and `out` writable integer storage.
 */
enum MpStatus mp_profile_greedy_total(const struct MpProfile *p, size_t level, size_t *out);

/**
 * Runs the collapsibility search on the filtration's full complex.
 * Writes 1 for collapsible and 0 for a definite refutation; budget
 * exhaustion returns `BudgetExhausted` and writes nothing.
 *
 * # Safety
 * `f` must be a live handle and `out` writable integer storage.
 */
enum MpStatus mp_collapse_search(const struct MpFiltration *f, uint64_t node_budget, int32_t *out);

/**
 * Exact minimal Morse number of the filtration's full complex, refusing
 * complexes larger than `simplex_cap`.
 *
 * # Safety
 * `f` must be a live handle and `out` writable integer storage.
 */
enum MpStatus mp_exact_min_morse(const struct MpFiltration *f, size_t simplex_cap, size_t *out);

/**
 * Per-level greedy critical totals: writes up to `len` values into `buf`
 * and stores the level count in `out_len`.
 *
 * # Safety
 * `f` must be a live handle, `buf` writable storage for `len` values (or
 * null with `len == 0`), `out_len` writable.
 */
enum MpStatus mp_greedy_totals(const struct MpFiltration *f,
                               size_t *buf,
                               size_t len,
                               size_t *out_len);

/**
 * Frees a string returned by this library; null is a no-op.
 *
 * # Safety
 * `s` must be a string from this library, not yet freed.
 */
void mp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MORSEPROF_H */
