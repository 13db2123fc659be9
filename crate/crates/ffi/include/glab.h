#ifndef GLAB_H
#define GLAB_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; 2 to 4 agree with the exit codes of the `glab` binary.
 */
typedef enum GlabStatus {
  GLAB_STATUS_OK = 0,
  GLAB_STATUS_HYPOTHESIS_FAILURE = 2,
  GLAB_STATUS_CHECK_FAILURE = 3,
  GLAB_STATUS_INPUT_ERROR = 4,
  GLAB_STATUS_NULL_ARGUMENT = 5,
  GLAB_STATUS_INVALID_UTF8 = 6,
  GLAB_STATUS_BUFFER_TOO_SMALL = 7,
  GLAB_STATUS_PANIC = 8,
} GlabStatus;

/**
 * A simplicial complex.
 */
typedef struct GlabComplex GlabComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a facet list (JSON or one facet per line) into `*out`.
 *
 * # Safety
 * `text_in` is a NUL-terminated string and `out` is writable.
 */
enum GlabStatus glab_complex_parse(const char *text_in, struct GlabComplex **out);

/**
 * Looks up a builtin such as `cycle:5` or `join:cycle:3,cycle:3`.
 *
 * # Safety
 * `name` is a NUL-terminated string and `out` is writable.
 */
enum GlabStatus glab_complex_builtin(const char *name, struct GlabComplex **out);

/**
 * Releases a complex. Null is ignored.
 *
 * # Safety
 * `k` came from this library and is not used afterwards.
 */
void glab_complex_free(struct GlabComplex *k);

/**
 * Number of vertices.
 *
 * # Safety
 * `k` is a live handle and `out` is writable.
 */
enum GlabStatus glab_complex_vertex_count(const struct GlabComplex *k, uintptr_t *out);

/**
 * Size of the facets; fails with `HYPOTHESIS_FAILURE` on impure input.
 *
 * # Safety
 * `k` is a live handle and `out` is writable.
 */
enum GlabStatus glab_complex_rank(const struct GlabComplex *k, uintptr_t *out);

/**
 * Writes the h-vector into `buf` (capacity `cap`) and its length into
 * `*len`. With `cap` too small only `*len` is written.
 *
 * # Safety
 * `k` is a live handle, `len` is writable and `buf` holds `cap` entries.
 */
enum GlabStatus glab_complex_h_vector(const struct GlabComplex *k,
                                      int64_t *buf,
                                      uintptr_t cap,
                                      uintptr_t *len);

/**
 * Whether the complex is a GF(2) homology sphere.
 *
 * # Safety
 * `k` is a live handle and `out` is writable.
 */
enum GlabStatus glab_complex_is_sphere(const struct GlabComplex *k, bool *out);

/**
 * Runs a command on the complex, for example
 * `"identity --facet 1,2 --gamma 1 --tau 2 --seed 7"`, with the same
 * arguments as the `glab` binary. `--input` and `--builtin` are ignored.
 *
 * The JSON report is stored in `*report` whenever the arguments parse,
 * including when a check fails; release it with [`glab_string_free`].
 *
 * # Safety
 * `k` is a live handle, `args` a NUL-terminated string and `report` writable.
 */
enum GlabStatus glab_run(const struct GlabComplex *k, const char *args, char **report);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` came from this library and is not used afterwards.
 */
void glab_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *glab_last_error(void);

/**
 * Library version, a static string.
 */
const char *glab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GLAB_H */
