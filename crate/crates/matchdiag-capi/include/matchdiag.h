#ifndef MATCHDIAG_H
#define MATCHDIAG_H

/* Generated by cbindgen from matchdiag-capi; regenerate with `cargo build`, do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible `md_` call.
 */
typedef enum {
  /**
   * The call succeeded.
   */
  MD_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MD_STATUS_NULL_POINTER = 1,
  /**
   * The input was rejected: bad coordinates or distances, malformed
   * JSON, an out-of-range option.
   */
  MD_STATUS_INVALID_INPUT = 2,
  /**
   * The mapping does not fit the two spaces.
   */
  MD_STATUS_MAPPING_ERROR = 3,
  /**
   * An internal invariant failed; this indicates a bug in the library.
   */
  MD_STATUS_INTERNAL_ERROR = 4,
} MdStatus;

/**
 * A computed diagram document: both barcodes, the block cells, the
 * deficiency counts, and the derived kernel/image/cokernel barcodes.
 * Opaque; release with `md_document_free`.
 */
typedef struct MdDocument MdDocument;

/**
 * A finite metric space. Opaque; create with `md_space_from_points` or
 * `md_space_from_matrix` and release with `md_space_free`.
 */
typedef struct MdSpace MdSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread; empty when
 * nothing has failed yet. The pointer stays valid until the next failing
 * `md_` call on the same thread. Do not free it.
 */
const char *md_last_error_message(void);

/**
 * Builds a metric space from `point_count` points with `dim` coordinates
 * each, laid out row-major in `coords`. Distances are Euclidean.
 *
 * On success writes a new handle to `out`.
 *
 * # Safety
 *
 * `coords` must point to `point_count * dim` readable doubles and `out`
 * to a writable pointer slot.
 */
MdStatus md_space_from_points(const double *coords, size_t point_count, size_t dim, MdSpace **out);

/**
 * Builds a metric space from a full `point_count` x `point_count` distance
 * matrix, laid out row-major in `distances`. The matrix must be symmetric
 * with a zero diagonal and positive finite off-diagonal entries.
 *
 * On success writes a new handle to `out`.
 *
 * # Safety
 *
 * `distances` must point to `point_count * point_count` readable doubles
 * and `out` to a writable pointer slot.
 */
MdStatus md_space_from_matrix(const double *distances, size_t point_count, MdSpace **out);

/**
 * Number of points in the space, or 0 for a null handle.
 *
 * # Safety
 *
 * `space` must be null or a live handle from this library.
 */
size_t md_space_point_count(const MdSpace *space);

/**
 * Releases a space handle. Null is a no-op.
 *
 * # Safety
 *
 * `space` must be null or a handle not freed before.
 */
void md_space_free(MdSpace *space);

/**
 * Runs the full pipeline for the mapping that sends domain point `i` to
 * codomain point `mapping[i]`. `mapping_len` must equal the domain's point
 * count. `geometric` selects the component-graph route instead of the
 * component-count sweep (the results agree; the flag exists for
 * cross-checking). `tol` groups death values closer than the given
 * nonnegative tolerance; pass 0 for exact equality.
 *
 * On success writes a new document handle to `out`.
 *
 * # Safety
 *
 * `domain` and `codomain` must be live space handles, `mapping` must point
 * to `mapping_len` readable size_t values, and `out` to a writable pointer
 * slot.
 */
MdStatus md_compute(const MdSpace *domain,
                    const MdSpace *codomain,
                    const size_t *mapping,
                    size_t mapping_len,
                    bool geometric,
                    double tol,
                    MdDocument **out);

/**
 * Serializes a document to its canonical JSON form.
 *
 * On success writes a NUL-terminated string to `out`; release it with
 * `md_string_free`.
 *
 * # Safety
 *
 * `doc` must be a live document handle and `out` a writable pointer slot.
 */
MdStatus md_document_to_json(const MdDocument *doc, char **out);

/**
 * Parses a document from JSON produced by `md_document_to_json` (or by the
 * matchdiag CLI).
 *
 * On success writes a new document handle to `out`.
 *
 * # Safety
 *
 * `text` must be a readable NUL-terminated string and `out` a writable
 * pointer slot.
 */
MdStatus md_document_from_json(const char *text, MdDocument **out);

/**
 * Computes the smallest delta admitting a delta-matching between the
 * matching diagrams of two documents, written to `out_delta`. Discarding a
 * point `(a, b)` costs `max(a, b)` against delta (with infinite `a`
 * ignored), so the result is always finite.
 *
 * # Safety
 *
 * `first` and `second` must be live document handles and `out_delta` a
 * writable double slot.
 */
MdStatus md_min_delta(const MdDocument *first, const MdDocument *second, double *out_delta);

/**
 * Releases a document handle. Null is a no-op.
 *
 * # Safety
 *
 * `doc` must be null or a handle not freed before.
 */
void md_document_free(MdDocument *doc);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 *
 * `text` must be null or a string from `md_document_to_json` not freed
 * before.
 */
void md_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATCHDIAG_H */
