#ifndef RIGIDITYLAB_H
#define RIGIDITYLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  RL_STATUS_NULL_ARGUMENT = 1,
  RL_STATUS_INVALID_UTF8 = 2,
  RL_STATUS_PARSE = 3,
  RL_STATUS_PRECONDITION = 4,
  RL_STATUS_OVERFLOW = 5,
  RL_STATUS_PANIC = 6,
} RlStatus;

/**
 * Opaque oracle handle.
 */
typedef struct RlOracle RlOracle;

/**
 * Opaque set handle.
 */
typedef struct RlSet RlSet;

/**
 * Opaque term handle.
 */
typedef struct RlTerm RlTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread; do not free.
 */
const char *rl_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void rl_string_free(char *s);

/**
 * # Safety
 * `src` must be a nul-terminated string; `out` must be writable.
 */
enum RlStatus rl_term_parse(const char *src, struct RlTerm **out);

/**
 * # Safety
 * `term` must be null or a handle from [`rl_term_parse`], not yet freed.
 */
void rl_term_free(struct RlTerm *term);

/**
 * Canonical rendering of a term.
 *
 * # Safety
 * `term` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_term_render(const struct RlTerm *term, char **out);

/**
 * Evaluates at `x`; [`RlStatus::Overflow`] if the value exceeds 64 bits.
 *
 * # Safety
 * `term` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_term_eval_u64(const struct RlTerm *term, uint64_t x, uint64_t *out);

/**
 * Evaluates at a decimal natural, writing a decimal string.
 *
 * # Safety
 * `term` must be a live handle, `x` nul-terminated, `out` writable.
 */
enum RlStatus rl_term_eval_dec(const struct RlTerm *term, const char *x, char **out);

/**
 * # Safety
 * `src` must be a nul-terminated string; `out` must be writable.
 */
enum RlStatus rl_set_parse(const char *src, struct RlSet **out);

/**
 * The antichain family member `{2^i (2n+1)}`, `i <= 64`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RlStatus rl_set_family(uint32_t i, struct RlSet **out);

/**
 * # Safety
 * `set` must be null or a live set handle.
 */
void rl_set_free(struct RlSet *set);

/**
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_set_render(const struct RlSet *set, char **out);

/**
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_set_contains(const struct RlSet *set, uint64_t x, bool *out);

/**
 * Decides `s ⊆* t`. When it fails and `witness` is non-null, writes the
 * witness class as `"r mod m"`; otherwise writes null there.
 *
 * # Safety
 * `s`, `t` must be live handles; `holds` writable; `witness` null or writable.
 */
enum RlStatus rl_set_almost_subset(const struct RlSet *s,
                                   const struct RlSet *t,
                                   bool *holds,
                                   char **witness);

/**
 * # Safety
 * `src` must be a nul-terminated string; `out` must be writable.
 */
enum RlStatus rl_oracle_parse(const char *src, struct RlOracle **out);

/**
 * # Safety
 * `oracle` must be null or a live oracle handle.
 */
void rl_oracle_free(struct RlOracle *oracle);

/**
 * # Safety
 * `oracle` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_oracle_render(const struct RlOracle *oracle, char **out);

/**
 * # Safety
 * `oracle` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_oracle_query(const struct RlOracle *oracle, uint64_t x, bool *out);

/**
 * Builds `B_S` from `base`; [`RlStatus::Precondition`] if `base(c) = 1`.
 *
 * # Safety
 * `set`, `base` must be live handles; `out` must be writable.
 */
enum RlStatus rl_oracle_dup(const struct RlSet *set,
                            uint64_t c,
                            const struct RlOracle *base,
                            struct RlOracle **out);

/**
 * Checks `B_S ≡_m A` below `bound`; `ok` is false on the first violation.
 *
 * # Safety
 * `base`, `set` must be live handles; `ok` must be writable.
 */
enum RlStatus rl_dup_verify(const struct RlOracle *base,
                            const struct RlSet *set,
                            uint64_t c,
                            uint64_t bound,
                            bool *ok);

/**
 * Exact measure of the test level `U_n` for `k`, as `numerator / 2^exponent`.
 * The numerator is written as a decimal string.
 *
 * # Safety
 * `k` must be a live handle; `numerator` and `exponent` must be writable.
 */
enum RlStatus rl_test_level_measure(const struct RlTerm *k,
                                    size_t n,
                                    char **numerator,
                                    uint64_t *exponent);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIGIDITYLAB_H */
