//! C bindings for the matchdiag pipeline.
//!
//! The surface is deliberately small: build finite metric spaces from flat
//! arrays, run the compute pipeline into an opaque document handle,
//! serialize documents to JSON and back, and compare two documents by the
//! smallest delta admitting a delta-matching. Every fallible call returns an
//! [`MdStatus`]; on failure, [`md_last_error_message`] holds a
//! human-readable explanation for the current thread.
//!
//! Ownership follows the usual C conventions: handles and strings returned
//! through out-pointers belong to the caller and are released with the
//! matching `md_*_free`, all of which accept null. Panics never cross the
//! boundary; they are caught and reported as [`MdStatus::InternalError`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use matchdiag::blockfn::SetMapping;
use matchdiag::document::{compute_document, ComputeOptions, DiagramDocument};
use matchdiag::matching::min_delta_matching;
use matchdiag::metric::FiniteMetricSpace;
use matchdiag::Error;

/// A finite metric space. Opaque; create with `md_space_from_points` or
/// `md_space_from_matrix` and release with `md_space_free`.
pub struct MdSpace(FiniteMetricSpace);

/// A computed diagram document: both barcodes, the block cells, the
/// deficiency counts, and the derived kernel/image/cokernel barcodes.
/// Opaque; release with `md_document_free`.
pub struct MdDocument(DiagramDocument);

/// Result code of every fallible `md_` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// The input was rejected: bad coordinates or distances, malformed
    /// JSON, an out-of-range option.
    InvalidInput = 2,
    /// The mapping does not fit the two spaces.
    MappingError = 3,
    /// An internal invariant failed; this indicates a bug in the library.
    InternalError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("interior NULs were replaced");
    });
}

fn status_for(err: &Error) -> MdStatus {
    match err {
        Error::SizeMismatch(..)
        | Error::MappingOutOfRange { .. }
        | Error::MappingNotTotal(_)
        | Error::MappingMissing(_)
        | Error::NoCoordinateMatch { .. } => MdStatus::MappingError,
        Error::InternalInvariantViolation(_) | Error::NegativeDeficiency { .. } => {
            MdStatus::InternalError
        }
        _ => MdStatus::InvalidInput,
    }
}

fn fail(err: &Error) -> MdStatus {
    set_last_error(&err.to_string());
    status_for(err)
}

fn null_pointer() -> MdStatus {
    set_last_error("required pointer argument is null");
    MdStatus::NullPointer
}

fn invalid(msg: &str) -> MdStatus {
    set_last_error(msg);
    MdStatus::InvalidInput
}

/// Catches panics so they surface as a status code instead of unwinding
/// into the caller's stack frames.
fn guarded<F: FnOnce() -> MdStatus>(body: F) -> MdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic caught at the C boundary");
            MdStatus::InternalError
        }
    }
}

/// Message describing the most recent failure on this thread; empty when
/// nothing has failed yet. The pointer stays valid until the next failing
/// `md_` call on the same thread. Do not free it.
#[no_mangle]
pub extern "C" fn md_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds a metric space from `point_count` points with `dim` coordinates
/// each, laid out row-major in `coords`. Distances are Euclidean.
///
/// On success writes a new handle to `out`.
///
/// # Safety
///
/// `coords` must point to `point_count * dim` readable doubles and `out`
/// to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn md_space_from_points(
    coords: *const f64,
    point_count: usize,
    dim: usize,
    out: *mut *mut MdSpace,
) -> MdStatus {
    if coords.is_null() || out.is_null() {
        return null_pointer();
    }
    if dim == 0 {
        return invalid("dim must be positive");
    }
    let len = match point_count.checked_mul(dim) {
        Some(len) => len,
        None => return invalid("point_count * dim overflows"),
    };
    let flat = unsafe { std::slice::from_raw_parts(coords, len) };
    guarded(|| {
        let points: Vec<Vec<f64>> = flat.chunks(dim).map(<[f64]>::to_vec).collect();
        match FiniteMetricSpace::from_points(&points) {
            Ok(space) => {
                unsafe { *out = Box::into_raw(Box::new(MdSpace(space))) };
                MdStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Builds a metric space from a full `point_count` x `point_count` distance
/// matrix, laid out row-major in `distances`. The matrix must be symmetric
/// with a zero diagonal and positive finite off-diagonal entries.
///
/// On success writes a new handle to `out`.
///
/// # Safety
///
/// `distances` must point to `point_count * point_count` readable doubles
/// and `out` to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn md_space_from_matrix(
    distances: *const f64,
    point_count: usize,
    out: *mut *mut MdSpace,
) -> MdStatus {
    if distances.is_null() || out.is_null() {
        return null_pointer();
    }
    if point_count == 0 {
        return fail(&Error::EmptySpace);
    }
    let len = match point_count.checked_mul(point_count) {
        Some(len) => len,
        None => return invalid("point_count * point_count overflows"),
    };
    let flat = unsafe { std::slice::from_raw_parts(distances, len) };
    guarded(|| {
        let rows: Vec<Vec<f64>> = flat.chunks(point_count).map(<[f64]>::to_vec).collect();
        match FiniteMetricSpace::from_matrix(&rows) {
            Ok(space) => {
                unsafe { *out = Box::into_raw(Box::new(MdSpace(space))) };
                MdStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Number of points in the space, or 0 for a null handle.
///
/// # Safety
///
/// `space` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn md_space_point_count(space: *const MdSpace) -> usize {
    if space.is_null() {
        return 0;
    }
    unsafe { &(*space).0 }.len()
}

/// Releases a space handle. Null is a no-op.
///
/// # Safety
///
/// `space` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn md_space_free(space: *mut MdSpace) {
    if !space.is_null() {
        drop(unsafe { Box::from_raw(space) });
    }
}

/// Runs the full pipeline for the mapping that sends domain point `i` to
/// codomain point `mapping[i]`. `mapping_len` must equal the domain's point
/// count. `geometric` selects the component-graph route instead of the
/// component-count sweep (the results agree; the flag exists for
/// cross-checking). `tol` groups death values closer than the given
/// nonnegative tolerance; pass 0 for exact equality.
///
/// On success writes a new document handle to `out`.
///
/// # Safety
///
/// `domain` and `codomain` must be live space handles, `mapping` must point
/// to `mapping_len` readable size_t values, and `out` to a writable pointer
/// slot.
#[no_mangle]
pub unsafe extern "C" fn md_compute(
    domain: *const MdSpace,
    codomain: *const MdSpace,
    mapping: *const usize,
    mapping_len: usize,
    geometric: bool,
    tol: f64,
    out: *mut *mut MdDocument,
) -> MdStatus {
    if domain.is_null() || codomain.is_null() || mapping.is_null() || out.is_null() {
        return null_pointer();
    }
    let domain = unsafe { &(*domain).0 };
    let codomain = unsafe { &(*codomain).0 };
    let targets = unsafe { std::slice::from_raw_parts(mapping, mapping_len) };
    guarded(|| {
        if !tol.is_finite() || tol < 0.0 {
            return invalid(&format!("tol must be a nonnegative finite number, got {tol}"));
        }
        if mapping_len != domain.len() {
            set_last_error(&format!(
                "mapping has {mapping_len} entries for a domain with {} points",
                domain.len()
            ));
            return MdStatus::MappingError;
        }
        let mapping = match SetMapping::new(targets.to_vec(), codomain.len()) {
            Ok(mapping) => mapping,
            Err(err) => return fail(&err),
        };
        let options = ComputeOptions { geometric, tol };
        match compute_document(domain, codomain, &mapping, &options) {
            Ok(doc) => {
                unsafe { *out = Box::into_raw(Box::new(MdDocument(doc))) };
                MdStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Serializes a document to its canonical JSON form.
///
/// On success writes a NUL-terminated string to `out`; release it with
/// `md_string_free`.
///
/// # Safety
///
/// `doc` must be a live document handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn md_document_to_json(
    doc: *const MdDocument,
    out: *mut *mut c_char,
) -> MdStatus {
    if doc.is_null() || out.is_null() {
        return null_pointer();
    }
    let doc = unsafe { &(*doc).0 };
    guarded(|| {
        let json = CString::new(doc.to_json()).expect("JSON has no interior NUL");
        unsafe { *out = json.into_raw() };
        MdStatus::Ok
    })
}

/// Parses a document from JSON produced by `md_document_to_json` (or by the
/// matchdiag CLI).
///
/// On success writes a new document handle to `out`.
///
/// # Safety
///
/// `text` must be a readable NUL-terminated string and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn md_document_from_json(
    text: *const c_char,
    out: *mut *mut MdDocument,
) -> MdStatus {
    if text.is_null() || out.is_null() {
        return null_pointer();
    }
    let text = unsafe { CStr::from_ptr(text) };
    guarded(|| {
        let text = match text.to_str() {
            Ok(text) => text,
            Err(_) => return invalid("document text is not valid UTF-8"),
        };
        match DiagramDocument::from_json(text) {
            Ok(doc) => {
                unsafe { *out = Box::into_raw(Box::new(MdDocument(doc))) };
                MdStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Computes the smallest delta admitting a delta-matching between the
/// matching diagrams of two documents, written to `out_delta`. Discarding a
/// point `(a, b)` costs `max(a, b)` against delta (with infinite `a`
/// ignored), so the result is always finite.
///
/// # Safety
///
/// `first` and `second` must be live document handles and `out_delta` a
/// writable double slot.
#[no_mangle]
pub unsafe extern "C" fn md_min_delta(
    first: *const MdDocument,
    second: *const MdDocument,
    out_delta: *mut f64,
) -> MdStatus {
    if first.is_null() || second.is_null() || out_delta.is_null() {
        return null_pointer();
    }
    let first = unsafe { &(*first).0 };
    let second = unsafe { &(*second).0 };
    guarded(|| {
        let d1 = match first.to_matching_diagram() {
            Ok(diagram) => diagram,
            Err(err) => return fail(&err),
        };
        let d2 = match second.to_matching_diagram() {
            Ok(diagram) => diagram,
            Err(err) => return fail(&err),
        };
        unsafe { *out_delta = min_delta_matching(&d1, &d2).delta() };
        MdStatus::Ok
    })
}

/// Releases a document handle. Null is a no-op.
///
/// # Safety
///
/// `doc` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn md_document_free(doc: *mut MdDocument) {
    if !doc.is_null() {
        drop(unsafe { Box::from_raw(doc) });
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
///
/// `text` must be null or a string from `md_document_to_json` not freed
/// before.
#[no_mangle]
pub unsafe extern "C" fn md_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}
