#ifndef QTKRING_H
#define QTKRING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QtkStatus {
  QTK_STATUS_OK = 0,
  // A computation ran but one of its checks failed.
  QTK_STATUS_CHECK_FAILED = 1,
  // Malformed or inconsistent input.
  QTK_STATUS_INPUT_ERROR = 2,
  QTK_STATUS_NULL_POINTER = 3,
  // An internal panic was caught at the boundary.
  QTK_STATUS_PANIC = 4,
} QtkStatus;

// Result of a K-ring computation.
typedef struct QtkKRing QtkKRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Computes the K-ring report. `r` and `functional` are optional
// comma-separated rationals (pass NULL for the defaults); `budget` 0 uses
// the default. On success `*out` receives a handle. A report whose checks
// fail is still returned, with status `QTK_STATUS_CHECK_FAILED`.
//
// # Safety
// String arguments must be NUL-terminated or NULL; `out` must be writable.
enum QtkStatus qtk_kring_compute(const char *polytope_json,
                                 const char *lambda_json,
                                 const char *r,
                                 const char *functional,
                                 uint64_t budget,
                                 struct QtkKRing **out);

// Rank of the quotient, or 0 for a NULL handle.
//
// # Safety
// `h` must be NULL or a live handle.
uintptr_t qtk_kring_rank(const struct QtkKRing *h);

// Number of vertices of the polytope, or 0 for a NULL handle.
//
// # Safety
// `h` must be NULL or a live handle.
uintptr_t qtk_kring_vertex_count(const struct QtkKRing *h);

// The report as compact JSON. Borrowed: valid until the handle is freed.
//
// # Safety
// `h` must be NULL or a live handle.
const char *qtk_kring_report_json(const struct QtkKRing *h);

// # Safety
// `h` must be NULL or a handle from `qtk_kring_compute`, freed once.
void qtk_kring_free(struct QtkKRing *h);

// Validates a polytope and characteristic map; `*report_json` receives the
// report when `report_json` is not NULL.
//
// # Safety
// String arguments must be NUL-terminated; `report_json` NULL or writable.
enum QtkStatus qtk_validate(const char *polytope_json, const char *lambda_json, char **report_json);

// Cross-checks a Bott tower's Laurent presentation against the cube
// pipeline. `*isomorphic` and `*report_json` are written when non-NULL.
//
// # Safety
// `bott_json` must be NUL-terminated; out-pointers NULL or writable.
enum QtkStatus qtk_bott_compare(const char *bott_json,
                                uint64_t budget,
                                bool *isomorphic,
                                char **report_json);

// Laurent presentation report for a Cartan matrix and word. `convention`
// is `"row"`, `"col"` or NULL for the file's setting.
//
// # Safety
// String arguments must be NUL-terminated or NULL; `report_json` writable.
enum QtkStatus qtk_bott_samelson(const char *cartan_json,
                                 const char *convention,
                                 uint64_t budget,
                                 char **report_json);

// Message for the last failing call on this thread, or NULL. Borrowed:
// valid until the next call into this library on the same thread.
const char *qtk_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void qtk_string_free(char *s);

// Library version, static.
const char *qtk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTKRING_H */
