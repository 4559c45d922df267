#ifndef G2CENSUS_H
#define G2CENSUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define G2C_OK 0

/**
 * Bad argument: not an odd prime power, bad `D`, budget exceeded.
 */
#define G2C_ERR_PARAM 1

/**
 * A verification ran and failed.
 */
#define G2C_ERR_MISMATCH 2

/**
 * Internal consistency failure or panic.
 */
#define G2C_ERR_INTERNAL 3

/**
 * A required pointer was null.
 */
#define G2C_ERR_NULL 4

/**
 * Cache file or other I/O failure.
 */
#define G2C_ERR_IO 5

/**
 * Also count elliptic curves by enumeration.
 */
#define G2C_BRUTE_FORCE_EC 1

/**
 * Also search every genus-2 model.
 */
#define G2C_BRUTE_FORCE_G2 2

/**
 * Census state: the class-number cache shared by successive calls.
 */
typedef struct G2cCensus G2cCensus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *g2c_last_error(void);

/**
 * Opens a census handle. `cache_path` may be null for an in-memory cache.
 *
 * # Safety
 * `cache_path` must be null or a NUL-terminated string; `out` must be valid
 * for a pointer write.
 */
int32_t g2c_census_new(const char *cache_path, G2cCensus **out);

/**
 * Releases a handle from `g2c_census_new`. Null is ignored.
 *
 * # Safety
 * `h` must come from `g2c_census_new` and not be used afterwards.
 */
void g2c_census_free(G2cCensus *h);

/**
 * Writes the cache back to its file, if it has one.
 *
 * # Safety
 * `h` must be a live handle.
 */
int32_t g2c_census_save(const G2cCensus *h);

/**
 * Verifies one `q`. Returns `G2C_OK` if every check passed and
 * `G2C_ERR_MISMATCH` if any failed; the counts are written either way.
 *
 * # Safety
 * `h` must be a live handle; the out-pointers must be valid for writes.
 */
int32_t g2c_census_verify(const G2cCensus *h,
                          uint64_t q,
                          uint32_t flags,
                          uint32_t jobs,
                          uint64_t *out_ppas,
                          uint64_t *out_split);

/**
 * The full report for `q` as a JSON string, to be freed with `g2c_string_free`.
 *
 * # Safety
 * `h` must be a live handle; `out_json` must be valid for a pointer write.
 */
int32_t g2c_census_report_json(const G2cCensus *h,
                               uint64_t q,
                               uint32_t flags,
                               uint32_t jobs,
                               char **out_json);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void g2c_string_free(char *s);

/**
 * `#Cl R_f` for the order of conductor `f` in `Q(sqrt(-2), sqrt(-D))`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
int32_t g2c_ring_class_number(uint64_t d, uint64_t f, uint64_t *out);

/**
 * Both sides of the class-number identity for `(D, f)`; returns
 * `G2C_ERR_MISMATCH` when they differ.
 *
 * # Safety
 * The out-pointers must be valid for writes.
 */
int32_t g2c_brauer(uint64_t d, uint64_t f, uint64_t *out_lhs, uint64_t *out_rhs);

/**
 * Number of genus-2 models over `F_q` whose Weil polynomial is
 * `x^4 + a1 x^3 + a2 x^2 + q a1 x + q^2`.
 *
 * # Safety
 * `out_count` must be valid for a write.
 */
int32_t g2c_search_g2(uint64_t q, int64_t a1, int64_t a2, uint32_t jobs, uint64_t *out_count);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* G2CENSUS_H */
