/* C interface to the groupcast rate-region toolkit. */

#ifndef GROUPCAST_H
#define GROUPCAST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Region selector mirroring the library's catalog.
typedef enum GcRegionKind {
  GC_REGION_KIND_INNER_BOUND = 0,
  GC_REGION_KIND_SPLIT_RATE9_D = 1,
  GC_REGION_KIND_NETWORK_INNER_BOUND = 2,
  GC_REGION_KIND_CAPACITY = 3,
  GC_REGION_KIND_THREE_DEGRADED = 4,
  GC_REGION_KIND_TWO_DEGRADED = 5,
  GC_REGION_KIND_BINNING_INNER_BOUND = 6,
  GC_REGION_KIND_BINNING_SPLIT11_D = 7,
} GcRegionKind;

// Status codes for fallible calls.
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_POINTER = 1,
  GC_STATUS_INVALID_UTF8 = 2,
  GC_STATUS_SCHEMA_ERROR = 3,
  GC_STATUS_DOMAIN_ERROR = 4,
  GC_STATUS_CAPABILITY_EXCEEDED = 5,
  GC_STATUS_UNBOUNDED = 6,
  GC_STATUS_INTERNAL_ERROR = 7,
} GcStatus;

// Opaque combination network handle.
typedef struct GcNetwork GcNetwork;

// Opaque H-polytope handle.
typedef struct GcPolytope GcPolytope;

// Opaque verification report handle.
typedef struct GcReport GcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Most recent error message on this thread, or null if none was recorded.
// The pointer stays valid until the next failing call on the same thread.
const char *gc_last_error_message(void);

// Parses a network from its JSON form. Returns null on error.
//
// # Safety
// `json` must be a valid NUL-terminated string pointer.
struct GcNetwork *gc_network_parse(const char *json);

// # Safety
// `net` must come from [`gc_network_parse`] and not have been freed.
void gc_network_free(struct GcNetwork *net);

// Receiver count of the network, or 0 on a null handle.
//
// # Safety
// `net` must be a live handle or null.
uint32_t gc_network_k(const struct GcNetwork *net);

// Network serialized back to JSON; free with [`gc_string_free`].
//
// # Safety
// `net` must be a live handle or null.
char *gc_network_to_json(const struct GcNetwork *net);

// Generates a region for the network; the result is minimized when
// `reduce` is nonzero. Returns null on error.
//
// # Safety
// `net` must be a live handle or null.
struct GcPolytope *gc_region(const struct GcNetwork *net, enum GcRegionKind kind, int32_t reduce);

// # Safety
// `poly` must come from [`gc_region`] and not have been freed.
void gc_polytope_free(struct GcPolytope *poly);

// Number of variables, or 0 on a null handle.
//
// # Safety
// `poly` must be a live handle or null.
uint32_t gc_polytope_dim(const struct GcPolytope *poly);

// Number of rows, or 0 on a null handle.
//
// # Safety
// `poly` must be a live handle or null.
uint32_t gc_polytope_rows(const struct GcPolytope *poly);

// H-representation JSON; free with [`gc_string_free`].
//
// # Safety
// `poly` must be a live handle or null.
char *gc_polytope_to_json(const struct GcPolytope *poly);

// Enumerates vertices into a V-representation JSON string placed in `out`.
// Fails with `CapabilityExceeded` above dimension 6 and `Unbounded` for
// unbounded polyhedra.
//
// # Safety
// `poly` must be a live handle or null; `out` must be a valid pointer.
enum GcStatus gc_polytope_vertices_json(const struct GcPolytope *poly, char **out);

// Runs the capacity verification pipeline. Returns null on error; a
// completed run with failing checks still returns a report.
//
// # Safety
// `net` must be a live handle or null.
struct GcReport *gc_verify_capacity(const struct GcNetwork *net, uint64_t seed);

// Runs the split-rate projection pipeline at the network's uniform coding
// distribution. Returns null on error.
//
// # Safety
// `net` must be a live handle or null.
struct GcReport *gc_fme_pipeline(const struct GcNetwork *net,
                                 int32_t check_intermediates,
                                 uint64_t seed);

// 1 if every check passed, 0 if some failed, -1 on a null handle.
//
// # Safety
// `report` must be a live handle or null.
int32_t gc_report_pass(const struct GcReport *report);

// Report JSON; free with [`gc_string_free`].
//
// # Safety
// `report` must be a live handle or null.
char *gc_report_to_json(const struct GcReport *report);

// # Safety
// `report` must come from a `gc_*` call and not have been freed.
void gc_report_free(struct GcReport *report);

// Releases a string returned by any `*_to_json` function.
//
// # Safety
// `s` must come from this library and not have been freed.
void gc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROUPCAST_H */
