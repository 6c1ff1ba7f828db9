#ifndef OCTANOMIAL_H
#define OCTANOMIAL_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible call.
typedef enum OctStatus {
  OCT_STATUS_OK = 0,
  OCT_STATUS_NULL_ARGUMENT = 1,
  OCT_STATUS_PARSE = 2,
  OCT_STATUS_NOT_SMOOTH = 3,
  OCT_STATUS_NOT_SPLIT = 4,
  OCT_STATUS_CUBE_ROOT_UNAVAILABLE = 5,
  OCT_STATUS_NO_SOLUTION = 6,
  OCT_STATUS_VERIFICATION_FAILED = 7,
  OCT_STATUS_FIELD = 8,
  OCT_STATUS_OTHER = 9,
  OCT_STATUS_PANIC = 10,
} OctStatus;

// A finite field, the rationals, or a number field.
typedef struct OctField OctField;

// A smooth cubic surface.
typedef struct OctSurface OctSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. Valid until the next call on the same thread.
const char *oct_last_error(void);

// Frees a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed.
void oct_string_free(char *s);

// Parses a field spec such as "Fp:13", "Fq:2:2" or "Q".
//
// # Safety
// `spec` must be a nul-terminated string and `out` writable.
enum OctStatus oct_field_new(const char *spec, struct OctField **out);

// # Safety
// `k` must come from [`oct_field_new`] and not have been freed.
void oct_field_free(struct OctField *k);

// Number of elements, or 0 for an infinite field.
//
// # Safety
// `k` must be a live field handle.
enum OctStatus oct_field_cardinality(const struct OctField *k, uint64_t *out);

// The octanomial surface with parameters a[0..4], given as element literals.
//
// # Safety
// `k` must be a live field handle, `a` must point to four nul-terminated strings.
enum OctStatus oct_surface_octanomial(const struct OctField *k,
                                      const char *const *a,
                                      struct OctSurface **out);

// A surface from its JSON form `{"field", "degree", "coeffs"}` (or an object with a "surface" key).
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum OctStatus oct_surface_from_json(const char *json, struct OctSurface **out);

// # Safety
// `x` must come from this library and not have been freed.
void oct_surface_free(struct OctSurface *x);

// # Safety
// `x` must be a live surface handle.
enum OctStatus oct_surface_is_smooth(const struct OctSurface *x, bool *out);

// Number of lines defined over the field of the surface.
//
// # Safety
// `x` must be a live surface handle.
enum OctStatus oct_surface_line_count(const struct OctSurface *x, uintptr_t *out);

// Eckardt points of a split surface.
//
// # Safety
// `x` must be a live surface handle.
enum OctStatus oct_surface_eckardt_count(const struct OctSurface *x, uintptr_t *out);

// Reduction to octanomial form along triad pair `pair`; writes JSON `{T, params, scalar, ...}`.
//
// # Safety
// `x` must be a live surface handle; free the output with [`oct_string_free`].
enum OctStatus oct_surface_reduce(const struct OctSurface *x,
                                  uintptr_t pair,
                                  uintptr_t ordering,
                                  uintptr_t cube_root,
                                  char **out_json);

// Instantiates a catalog stratum with the given free values (may be null when
// `n_free` is 0) and verifies it. Writes the report JSON; returns
// `VerificationFailed` when any claim fails, with the report still written.
//
// # Safety
// `label` must be nul-terminated, `free` must hold `n_free` strings, and
// `k` must be a live field handle.
enum OctStatus oct_stratum_verify(const char *label,
                                  bool alternative,
                                  const struct OctField *k,
                                  const char *const *free,
                                  uintptr_t n_free,
                                  char **out_json);

// Runs one command-line invocation (`argv[0]` is the program name) and
// writes its JSON output. Returns the process exit code (0, 1 or 2), or -1
// on a null argument.
//
// # Safety
// `argv` must hold `argc` nul-terminated strings.
int32_t oct_run(uintptr_t argc, const char *const *argv, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCTANOMIAL_H */
