#ifndef CYCLEWALK_H
#define CYCLEWALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Family code for the M-type walk (coin `(2/L)J - I`).
#define CW_FAMILY_M 0

// Family code for the F-type walk (coin `(2/L)J - P`).
#define CW_FAMILY_F 1

typedef enum CwStatus {
  CW_STATUS_OK = 0,
  // A required pointer argument was null.
  CW_STATUS_NULL_ARGUMENT = 1,
  // Arguments outside the domain of the computation (bad family, even `L`, `N < 2`, ...).
  CW_STATUS_INVALID_ARGUMENT = 2,
  // An internal consistency check failed.
  CW_STATUS_INTERNAL = 3,
  // The library panicked; the panic was caught at the boundary.
  CW_STATUS_PANIC = 4,
} CwStatus;

// Opaque JSON result handle.
typedef struct CwDocument CwDocument;

// Opaque walk handle.
typedef struct CwWalk CwWalk;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a walk. `family` is [`CW_FAMILY_M`] or [`CW_FAMILY_F`].
//
// # Safety
// `out` must be valid for a pointer write. On success `*out` owns a handle to be released
// with [`cw_walk_free`]; on failure it is set to null.
enum CwStatus cw_walk_new(uint32_t family, uint32_t states, uint32_t vertices, struct CwWalk **out);

// Releases a walk. Null is ignored.
//
// # Safety
// `walk` must be null or a handle from [`cw_walk_new`] not yet freed.
void cw_walk_free(struct CwWalk *walk);

// Dimension `L * N` of the evolution operator, or 0 for a null handle.
//
// # Safety
// `walk` must be null or a live handle.
size_t cw_walk_dimension(const struct CwWalk *walk);

// Decides the period. Writes `T` to `*period`, or 0 when the walk is not periodic.
//
// # Safety
// `walk` must be a live handle and `period` valid for a write.
enum CwStatus cw_period(const struct CwWalk *walk, uint64_t *period);

// Full period result (verdict, certificate) as JSON.
//
// # Safety
// `walk` must be a live handle and `out` valid for a pointer write.
enum CwStatus cw_period_report(const struct CwWalk *walk, struct CwDocument **out);

// Characteristic polynomial of `U` with all momentum sectors, as JSON.
//
// # Safety
// `walk` must be a live handle and `out` valid for a pointer write.
enum CwStatus cw_charpoly(const struct CwWalk *walk, struct CwDocument **out);

// Characteristic polynomial of sector `k` (`0 <= k < N`), as JSON.
//
// # Safety
// `walk` must be a live handle and `out` valid for a pointer write.
enum CwStatus cw_sector_charpoly(const struct CwWalk *walk,
                                 uint32_t sector,
                                 struct CwDocument **out);

// Walk zeta function `1 / det(I - uU)`, as JSON.
//
// # Safety
// `walk` must be a live handle and `out` valid for a pointer write.
enum CwStatus cw_zeta(const struct CwWalk *walk, struct CwDocument **out);

// NUL-terminated JSON text owned by `doc`, or null for a null handle.
//
// # Safety
// `doc` must be null or a live document. The pointer is valid until the document is freed.
const char *cw_document_json(const struct CwDocument *doc);

// Releases a document. Null is ignored.
//
// # Safety
// `doc` must be null or a document not yet freed.
void cw_document_free(struct CwDocument *doc);

// Message for the most recent failure on this thread, or null after a successful call.
//
// The pointer is valid until the next `cw_*` call on the same thread.
const char *cw_last_error(void);

// Library version as a static NUL-terminated string.
const char *cw_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLEWALK_H */
