#ifndef FQ_H
#define FQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum FqStatus {
  FQ_STATUS_OK = 0,
  FQ_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed argument: bad UTF-8, bad JSON, out-of-range value.
   */
  FQ_STATUS_INVALID_ARGUMENT = 2,
  FQ_STATUS_COMPLEX = 3,
  FQ_STATUS_TESSELLATION = 4,
  FQ_STATUS_LOOPS = 5,
  FQ_STATUS_COLORING = 6,
  FQ_STATUS_LATTICE = 7,
  /**
   * The complex has no good coloring.
   */
  FQ_STATUS_CONTRADICTION = 8,
  FQ_STATUS_PANIC = 9,
} FqStatus;

/**
 * Outcome of [`fq_decide`].
 */
typedef enum FqVerdict {
  FQ_VERDICT_EXISTS = 0,
  FQ_VERDICT_RULED_OUT = 1,
  FQ_VERDICT_UNKNOWN = 2,
} FqVerdict;

/**
 * A good edge coloring of some complex.
 */
typedef struct FqColoring FqColoring;

/**
 * A surface complex.
 */
typedef struct FqComplex FqComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *fq_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fq_string_free(char *s);

/**
 * Number of p-gons tessellating the genus-`genus` surface.
 *
 * # Safety
 * `faces` must be valid for writes.
 */
enum FqStatus fq_face_count(size_t p, size_t genus, size_t *faces);

/**
 * Typed block tessellation; requires 4 | F.
 *
 * # Safety
 * `result` must be valid for writes.
 */
enum FqStatus fq_complex_build_block(size_t p, size_t genus, struct FqComplex **result);

/**
 * Untyped rectangular tessellation with `a * b` faces.
 *
 * # Safety
 * `result` must be valid for writes.
 */
enum FqStatus fq_complex_build_rect(size_t p, size_t a, size_t b, struct FqComplex **result);

/**
 * Parses an `fq-complex/1` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `result` valid for writes.
 */
enum FqStatus fq_complex_from_json(const char *json, struct FqComplex **result);

/**
 * Serializes a complex as an `fq-complex/1` document.
 *
 * # Safety
 * `complex` must be a live handle; `json` valid for writes.
 */
enum FqStatus fq_complex_to_json(const struct FqComplex *complex, char **json);

/**
 * Destroys a complex. Null is ignored.
 *
 * # Safety
 * `complex` must come from this library and not have been freed.
 */
void fq_complex_free(struct FqComplex *complex);

/**
 * Face, edge and vertex counts. Any output pointer may be null.
 *
 * # Safety
 * `complex` must be a live handle; non-null outputs valid for writes.
 */
enum FqStatus fq_complex_counts(const struct FqComplex *complex,
                                size_t *faces,
                                size_t *edges,
                                size_t *vertices);

/**
 * Checks the surface axioms; `expected_genus < 0` skips the genus check.
 * The full report is written to `report_json` when it is not null.
 *
 * # Safety
 * `complex` must be a live handle; `passed` valid for writes.
 */
enum FqStatus fq_complex_validate(const struct FqComplex *complex,
                                  int64_t expected_genus,
                                  bool *passed,
                                  char **report_json);

/**
 * Geodesic loop report as an `fq-loops/1` document.
 *
 * # Safety
 * `complex` must be a live handle; `json` valid for writes.
 */
enum FqStatus fq_complex_loops(const struct FqComplex *complex, char **json);

/**
 * Cuts every face into `pieces` (2 or 4) pieces. `axis == 0` means no
 * axis. The subdivision map is written to `map_json` when it is not null.
 *
 * # Safety
 * `complex` must be a live handle; `result` valid for writes.
 */
enum FqStatus fq_complex_subdivide(const struct FqComplex *complex,
                                   size_t pieces,
                                   size_t axis,
                                   struct FqComplex **result,
                                   char **map_json);

/**
 * Solves for a good coloring. Returns [`FqStatus::Contradiction`] when
 * none exists; the witness is then in the last error message.
 *
 * # Safety
 * `complex` must be a live handle; `result` valid for writes.
 */
enum FqStatus fq_color(const struct FqComplex *complex,
                       bool exhaustive,
                       struct FqColoring **result);

/**
 * Parses an `fq-coloring/1` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `result` valid for writes.
 */
enum FqStatus fq_coloring_from_json(const char *json, struct FqColoring **result);

/**
 * Copies up to `capacity` colors into `colors` and stores the edge count
 * in `len`. Call with `capacity == 0` to query the length.
 *
 * # Safety
 * `coloring` must be a live handle; `colors` valid for `capacity` writes.
 */
enum FqStatus fq_coloring_colors(const struct FqColoring *coloring,
                                 uint8_t *colors,
                                 size_t capacity,
                                 size_t *len);

/**
 * Destroys a coloring. Null is ignored.
 *
 * # Safety
 * `coloring` must come from this library and not have been freed.
 */
void fq_coloring_free(struct FqColoring *coloring);

/**
 * Assigns local groups for the thickness sequence `q[0..q_len]` and checks
 * the link conditions. Writes the `fq-cert/1` document and whether every
 * vertex passed.
 *
 * # Safety
 * Handles must be live; `q` valid for `q_len` reads; outputs valid for writes.
 */
enum FqStatus fq_certify(const struct FqComplex *complex,
                         const struct FqColoring *coloring,
                         const uint64_t *q,
                         size_t q_len,
                         bool *certified,
                         char **cert_json);

/**
 * Decides whether a lattice exists for `(p, q, genus)`, optionally running
 * the certifying construction. Writes the verdict and, if `decision_json`
 * is not null, the `fq-decision/1` document.
 *
 * # Safety
 * `q` valid for `q_len` reads; `verdict` valid for writes.
 */
enum FqStatus fq_decide(size_t p,
                        const uint64_t *q,
                        size_t q_len,
                        size_t genus,
                        bool certify,
                        enum FqVerdict *verdict,
                        char **decision_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FQ_H */
