#ifndef SUPCHECK_H
#define SUPCHECK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SupcheckCondition {
  SUPCHECK_CONDITION_SP = 0,
  SUPCHECK_CONDITION_LSP = 1,
  SUPCHECK_CONDITION_RSP = 2,
  SUPCHECK_CONDITION_MSP = 3,
  SUPCHECK_CONDITION_WMSP = 4,
  SUPCHECK_CONDITION_LMSP = 5,
} SupcheckCondition;

// Status codes.
typedef enum SupcheckStatus {
  SUPCHECK_STATUS_OK = 0,
  SUPCHECK_STATUS_NULL_POINTER = 1,
  SUPCHECK_STATUS_INVALID_UTF8 = 2,
  SUPCHECK_STATUS_PARSE = 3,
  SUPCHECK_STATUS_INVALID_ARGUMENT = 4,
  SUPCHECK_STATUS_BAD_REDUCTION = 5,
  SUPCHECK_STATUS_TORSION_POINT = 6,
  SUPCHECK_STATUS_LIMIT_EXCEEDED = 7,
  SUPCHECK_STATUS_ARITHMETIC = 8,
  SUPCHECK_STATUS_PANIC = 9,
} SupcheckStatus;

typedef enum SupcheckVerdict {
  SUPCHECK_VERDICT_HOLDS = 0,
  SUPCHECK_VERDICT_HOLDS_WITH_EXCEPTIONS = 1,
  SUPCHECK_VERDICT_VIOLATED = 2,
} SupcheckVerdict;

// Opaque point on a product of copies of the multiplicative group and
// elliptic curves.
typedef struct SupcheckPoint SupcheckPoint;

// Scan parameters. Start from `supcheck_scan_options_default`.
typedef struct SupcheckScanOptions {
  // Inclusive prime range.
  uint64_t lo;
  uint64_t hi;
  // Violating primes tolerated.
  size_t budget;
  // Additive slack for LSP.
  uint32_t slack;
  // Coefficient box bound for MSP, WMSP and LMSP.
  uint64_t bound;
  // Use exact lattice methods where available.
  bool exact;
} SupcheckScanOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *supcheck_last_error(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void supcheck_string_free(char *s);

// Parse a point. `group` may be null for a plain comma list of rationals
// (a torus point); otherwise it reads like `gm:2`, `ec:0,-2` or
// `gm:1*ec:0,-2`, with point components separated by `*`.
//
// # Safety
// `group` is null or a NUL-terminated string; `point` is a NUL-terminated
// string; `out` is valid for writes.
enum SupcheckStatus supcheck_point_parse(const char *group,
                                         const char *point,
                                         struct SupcheckPoint **out);

// Release a point. Null is ignored.
//
// # Safety
// `point` must come from `supcheck_point_parse` and not have been freed.
void supcheck_point_free(struct SupcheckPoint *point);

// Canonical text of a point.
//
// # Safety
// `point` is a live handle; `out` is valid for writes.
enum SupcheckStatus supcheck_point_to_string(const struct SupcheckPoint *point, char **out);

// Order of the reduction of `point` modulo the prime `p`.
// Returns `BAD_REDUCTION` when the point does not reduce at `p`.
//
// # Safety
// `point` is a live handle; `out` is valid for writes.
enum SupcheckStatus supcheck_point_order(const struct SupcheckPoint *point,
                                         uint64_t p,
                                         uint64_t *out);

// Number of connected components of the smallest algebraic subgroup
// containing a torus point. Fails with `LIMIT_EXCEEDED` when it does not
// fit in 64 bits.
//
// # Safety
// `point` is a live handle; `out` is valid for writes.
enum SupcheckStatus supcheck_point_components(const struct SupcheckPoint *point, uint64_t *out);

// Default scan options: primes 2..10000, no budget, no slack, box bound 20,
// exact methods on.
struct SupcheckScanOptions supcheck_scan_options_default(void);

// Scan a prime range for violations of `condition`.
//
// SP, LSP and RSP take one point on each side; WMSP takes two; MSP and
// LMSP take any matching number. `ell` is read by LSP and LMSP. For RSP a
// null `sample` selects the first 25 primes. `options` may be null for the
// defaults. On success `out_json` receives the report and `out_verdict`
// (if non-null) its verdict.
//
// # Safety
// Pointer/length pairs describe valid arrays of live handles or primes;
// `out_json` is valid for writes.
enum SupcheckStatus supcheck_check(enum SupcheckCondition condition,
                                   const struct SupcheckPoint *const *ps,
                                   size_t n_ps,
                                   const struct SupcheckPoint *const *qs,
                                   size_t n_qs,
                                   uint64_t ell,
                                   const uint64_t *sample,
                                   size_t n_sample,
                                   const struct SupcheckScanOptions *options,
                                   char **out_json,
                                   enum SupcheckVerdict *out_verdict);

// Search for `phi(P) = c Q` with `c` minimal. `bound` limits the
// coefficient search on elliptic factors (0 means none given, which is an
// error when `q` has one). `out_json` receives `{"relation": null, ...}`
// when no relation exists.
//
// # Safety
// `p` and `q` are live handles; `out_json` is valid for writes.
enum SupcheckStatus supcheck_relate(const struct SupcheckPoint *p,
                                    const struct SupcheckPoint *q,
                                    uint64_t bound,
                                    char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPCHECK_H */
