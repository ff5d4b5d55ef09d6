#ifndef ARFKIT_H
#define ARFKIT_H

/* Generated by cbindgen from the arfkit-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit-code contract, plus boundary errors.
 */
typedef enum ArfkitStatus {
  ARFKIT_STATUS_OK = 0,
  ARFKIT_STATUS_INPUT_ERROR = 1,
  ARFKIT_STATUS_PRECISION_FAILURE = 2,
  ARFKIT_STATUS_INTERNAL_INCONSISTENCY = 3,
  ARFKIT_STATUS_NULL_POINTER = 4,
  ARFKIT_STATUS_INVALID_UTF8 = 5,
  ARFKIT_STATUS_BUFFER_TOO_SMALL = 6,
} ArfkitStatus;

/**
 * Opaque numerical semigroup handle.
 */
typedef struct ArfkitSemigroup ArfkitSemigroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next
 * arfkit call on the same thread; never NULL.
 */
const char *arfkit_last_error_message(void);

/**
 * Free a string returned by an arfkit function. NULL is allowed.
 */
void arfkit_string_free(char *s);

/**
 * Canonical JSON report for a quadratic form literal such as
 * `"x1*x2 + x3^2"`. Byte-identical to `arfkit form <literal> --json`.
 */
enum ArfkitStatus arfkit_form_report_json(const char *form_literal, char **out_json);

/**
 * Canonical JSON report for a generator set. Byte-identical to
 * `arfkit semigroup --generators ... --json`.
 */
enum ArfkitStatus arfkit_semigroup_report_json(const uint64_t *generators,
                                               size_t len,
                                               char **out_json);

/**
 * Canonical JSON report for a branch. `coordinates_text` uses the branch
 * file format (one series literal per line); `field_spec` is `"q"` or
 * `"f<p>"`. Byte-identical to the corresponding CLI invocation.
 */
enum ArfkitStatus arfkit_branch_report_json(const char *coordinates_text,
                                            const char *field_spec,
                                            uint32_t truncation,
                                            uint32_t max_steps,
                                            bool precision_guard,
                                            char **out_json);

/**
 * Canonical JSON report for a ramification filtration. Byte-identical to
 * `arfkit ramify --orders ... --abelian ... --json`.
 */
enum ArfkitStatus arfkit_ramify_report_json(const uint64_t *orders,
                                            size_t len,
                                            bool abelian,
                                            char **out_json);

/**
 * Build a numerical semigroup from generators. On success `*out` owns the
 * handle; free it with [`arfkit_semigroup_free`].
 */
enum ArfkitStatus arfkit_semigroup_from_generators(const uint64_t *generators,
                                                   size_t len,
                                                   struct ArfkitSemigroup **out);

/**
 * Free a semigroup handle. NULL is allowed.
 */
void arfkit_semigroup_free(struct ArfkitSemigroup *semigroup);

/**
 * True iff every element shift of the semigroup is additively closed.
 */
enum ArfkitStatus arfkit_semigroup_is_arf(const struct ArfkitSemigroup *semigroup, bool *out);

/**
 * Least element from which every natural number belongs.
 */
enum ArfkitStatus arfkit_semigroup_conductor(const struct ArfkitSemigroup *semigroup,
                                             uint64_t *out);

/**
 * Least nonzero element.
 */
enum ArfkitStatus arfkit_semigroup_multiplicity(const struct ArfkitSemigroup *semigroup,
                                                uint64_t *out);

/**
 * Membership test.
 */
enum ArfkitStatus arfkit_semigroup_contains(const struct ArfkitSemigroup *semigroup,
                                            uint64_t n,
                                            bool *out);

/**
 * The smallest Arf semigroup containing this one, as a new handle.
 */
enum ArfkitStatus arfkit_semigroup_arf_closure(const struct ArfkitSemigroup *semigroup,
                                               struct ArfkitSemigroup **out);

/**
 * Elements below the conductor. Fills `buf` (capacity `cap`) and stores the
 * required length in `*out_len`; call with a NULL buffer to size first.
 */
enum ArfkitStatus arfkit_semigroup_sporadic(const struct ArfkitSemigroup *semigroup,
                                            uint64_t *buf,
                                            size_t cap,
                                            size_t *out_len);

/**
 * Multiplicity sequence of an Arf semigroup (buffer contract as for
 * [`arfkit_semigroup_sporadic`]). Fails with an input error when the
 * semigroup is not Arf.
 */
enum ArfkitStatus arfkit_semigroup_multiplicity_sequence(const struct ArfkitSemigroup *semigroup,
                                                         uint64_t *buf,
                                                         size_t cap,
                                                         size_t *out_len);

/**
 * Characters of an Arf semigroup (buffer contract as for
 * [`arfkit_semigroup_sporadic`]).
 */
enum ArfkitStatus arfkit_semigroup_characters(const struct ArfkitSemigroup *semigroup,
                                              uint64_t *buf,
                                              size_t cap,
                                              size_t *out_len);

/**
 * Arf invariant of a nondegenerate form literal, by both routes, which must
 * agree (0 or 1 written to `*out_arf`).
 */
enum ArfkitStatus arfkit_form_arf(const char *form_literal, uint8_t *out_arf);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARFKIT_H */
