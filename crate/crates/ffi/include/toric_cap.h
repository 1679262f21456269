#ifndef TORIC_CAP_H
#define TORIC_CAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcStatus {
  TcStatus_Ok = 0,
  TcStatus_NullPointer = 1,
  TcStatus_InvalidParameter = 2,
  TcStatus_InvalidDomain = 3,
  TcStatus_InvalidThreshold = 4,
  TcStatus_DegenerateEdge = 5,
  TcStatus_SpectrumBoundary = 6,
  TcStatus_Contract = 7,
  TcStatus_Truncation = 8,
  TcStatus_Parse = 9,
  TcStatus_Overflow = 10,
  TcStatus_Panic = 11,
} TcStatus;

typedef enum TcMethod {
  TcMethod_Auto = 0,
  TcMethod_General = 1,
  TcMethod_Formula = 2,
} TcMethod;

/**
 * Opaque region handle.
 */
typedef struct TcProfile TcProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *tc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void tc_string_free(char *s);

/**
 * Parses `{"vertices": [["x","y"], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum TcStatus tc_profile_from_json(const char *json, struct TcProfile **out);

/**
 * # Safety
 * `a` and `b` must be NUL-terminated rationals and `out` writable.
 */
enum TcStatus tc_profile_ellipsoid(const char *a, const char *b, struct TcProfile **out);

/**
 * # Safety
 * `a` and `b` must be NUL-terminated rationals and `out` writable.
 */
enum TcStatus tc_profile_polydisk(const char *a, const char *b, struct TcProfile **out);

/**
 * # Safety
 * `p` must come from a `tc_profile_*` constructor and not be used again.
 */
void tc_profile_free(struct TcProfile *p);

/**
 * `c_k` as a `"p/q"` string.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum TcStatus tc_capacity(const struct TcProfile *p, int64_t k, enum TcMethod m, char **out);

/**
 * `c_k` as a reduced fraction; fails with `Overflow` if it does not fit.
 *
 * # Safety
 * `p` must be a live handle and `num`, `den` writable.
 */
enum TcStatus tc_capacity_i64(const struct TcProfile *p,
                              int64_t k,
                              enum TcMethod m,
                              int64_t *num,
                              int64_t *den);

/**
 * Betti number in `degree` of the window `[a, b)`; `b` may be `"inf"`.
 *
 * # Safety
 * `p` must be a live handle, `a` and `b` NUL-terminated, `out` writable.
 */
enum TcStatus tc_betti(const struct TcProfile *p,
                       const char *a,
                       const char *b,
                       int64_t degree,
                       uintptr_t *out);

/**
 * Spectrum up to `a_max` as a JSON array.
 *
 * # Safety
 * `p` must be a live handle, `a_max` NUL-terminated, `out` writable.
 */
enum TcStatus tc_spectrum_json(const struct TcProfile *p, const char *a_max, char **out);

/**
 * `lim c_k / k` as a `"p/q"` string.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum TcStatus tc_asymptotic_limit(const struct TcProfile *p, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIC_CAP_H */
