#ifndef CATLOGIC_H
#define CATLOGIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum CatlogicStatus {
  CATLOGIC_STATUS_OK = 0,
  // The call ran but a check it performed came out negative.
  CATLOGIC_STATUS_CHECK_FAILED = 1,
  CATLOGIC_STATUS_INVALID_INPUT = 2,
  CATLOGIC_STATUS_NULL_POINTER = 3,
  // A bug inside the library; the message is in `catlogic_last_error`.
  CATLOGIC_STATUS_PANIC = 4,
} CatlogicStatus;

// A validated finite category.
typedef struct CatlogicCategory CatlogicCategory;

// A finite ring.
typedef struct CatlogicRing CatlogicRing;

// Exactness verdicts for a category.
typedef struct CatlogicClassification {
  bool is_lex;
  bool is_regular;
  bool is_exact;
} CatlogicClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the next call.
const char *catlogic_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` is null or was returned by this library and not yet freed.
void catlogic_string_free(char *s);

// Parses and validates a category in the JSON table format.
//
// # Safety
// `json` is a NUL-terminated string; `out` is writable.
enum CatlogicStatus catlogic_category_from_json(const char *json, struct CatlogicCategory **out);

// # Safety
// `c` is null or a handle from `catlogic_category_from_json` not yet freed.
void catlogic_category_free(struct CatlogicCategory *c);

// # Safety
// `c` is a live category handle or null.
size_t catlogic_category_num_objects(const struct CatlogicCategory *c);

// # Safety
// `c` is a live category handle or null.
size_t catlogic_category_num_morphisms(const struct CatlogicCategory *c);

// Decides lex, regular and exact.
//
// # Safety
// `c` is a live category handle; `out` is writable.
enum CatlogicStatus catlogic_category_classify(const struct CatlogicCategory *c,
                                               struct CatlogicClassification *out);

// A ring by name: `zN` for 1 ≤ N ≤ 256, or `f2x2`.
//
// # Safety
// `name` is a NUL-terminated string; `out` is writable.
enum CatlogicStatus catlogic_ring_new(const char *name, struct CatlogicRing **out);

// # Safety
// `r` is null or a handle from `catlogic_ring_new` not yet freed.
void catlogic_ring_free(struct CatlogicRing *r);

// # Safety
// `r` is a live ring handle or null.
size_t catlogic_ring_size(const struct CatlogicRing *r);

// Writes whether `phi` implies `psi` in every module. Formulas use the human syntax
// (`E y: x = 2*y`) or the matrix syntax (`pp n=1 m=1 rows=[[1,-2]]`); `psi` shares the
// free variables of `phi`.
//
// # Safety
// `r` is a live ring handle, the formulas are NUL-terminated and `out` is writable.
enum CatlogicStatus catlogic_pp_implies(const struct CatlogicRing *r,
                                        const char *phi,
                                        const char *psi,
                                        bool *out);

// Runs the oracle suite and hands back its JSON report in `*out_json`. Returns
// `CATLOGIC_STATUS_CHECK_FAILED` when some check disagreed.
//
// # Safety
// `out_json` is writable; release the string with `catlogic_string_free`.
enum CatlogicStatus catlogic_oracle_suite(uint64_t seed, size_t budget, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATLOGIC_H */
