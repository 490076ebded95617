//! C ABI for `fq-core`.
//!
//! Complexes and colorings are opaque handles created and destroyed by
//! this library. Every fallible function returns an [`FqStatus`]; on
//! failure [`fq_last_error_message`] describes the error for the calling
//! thread. Strings returned through out-parameters are owned by the caller
//! and released with [`fq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fq_core::coloring::{solve_good_coloring, ColoringOutcome, SolveMode};
use fq_core::complex::{validate, SurfaceComplex};
use fq_core::lattice::{assign_groups, certificate, decide, TypeSequence, Verdict};
use fq_core::loops::trace_geodesic_loops;
use fq_core::tessellation::{
    build_block_tessellation, build_rect_tessellation, face_count, subdivide,
};
use fq_core::{
    io, ColoringError, ComplexError, FormatError, LatticeError, LoopError, TessellationError,
};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqStatus {
    Ok = 0,
    NullArgument = 1,
    /// Malformed argument: bad UTF-8, bad JSON, out-of-range value.
    InvalidArgument = 2,
    Complex = 3,
    Tessellation = 4,
    Loops = 5,
    Coloring = 6,
    Lattice = 7,
    /// The complex has no good coloring.
    Contradiction = 8,
    Panic = 9,
}

/// Outcome of [`fq_decide`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqVerdict {
    Exists = 0,
    RuledOut = 1,
    Unknown = 2,
}

/// A surface complex.
pub struct FqComplex(SurfaceComplex);

/// A good edge coloring of some complex.
pub struct FqColoring(fq_core::coloring::EdgeColoring);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(FqStatus, String);

macro_rules! status_from {
    ($($ty:ty => $status:ident),* $(,)?) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure(FqStatus::$status, e.to_string())
            }
        })*
    };
}

status_from! {
    ComplexError => Complex,
    TessellationError => Tessellation,
    LoopError => Loops,
    ColoringError => Coloring,
    LatticeError => Lattice,
    FormatError => InvalidArgument,
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(FqStatus::InvalidArgument, msg.into())
}

/// Runs `f`, records any error and converts panics into [`FqStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FqStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FqStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(FqStatus::NullArgument, "null pointer argument".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(FqStatus::NullArgument, "null output pointer".into()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(
            FqStatus::NullArgument,
            "null string argument".into(),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| invalid(format!("string is not UTF-8: {e}")))
}

unsafe fn read_sequence(q: *const u64, len: usize) -> Result<TypeSequence, Failure> {
    if q.is_null() {
        return Err(Failure(FqStatus::NullArgument, "null sequence".into()));
    }
    let entries = std::slice::from_raw_parts(q, len).to_vec();
    Ok(TypeSequence::new(entries)?)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of p-gons tessellating the genus-`genus` surface.
///
/// # Safety
/// `faces` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_face_count(p: usize, genus: usize, faces: *mut usize) -> FqStatus {
    guard(|| {
        *out(faces)? = face_count(p, genus)?;
        Ok(())
    })
}

/// Typed block tessellation; requires 4 | F.
///
/// # Safety
/// `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_build_block(
    p: usize,
    genus: usize,
    result: *mut *mut FqComplex,
) -> FqStatus {
    guard(|| {
        let slot = out(result)?;
        *slot = boxed(FqComplex(build_block_tessellation(p, genus)?));
        Ok(())
    })
}

/// Untyped rectangular tessellation with `a * b` faces.
///
/// # Safety
/// `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_build_rect(
    p: usize,
    a: usize,
    b: usize,
    result: *mut *mut FqComplex,
) -> FqStatus {
    guard(|| {
        let slot = out(result)?;
        *slot = boxed(FqComplex(build_rect_tessellation(p, a, b)?));
        Ok(())
    })
}

/// Parses an `fq-complex/1` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_from_json(
    json: *const c_char,
    result: *mut *mut FqComplex,
) -> FqStatus {
    guard(|| {
        let slot = out(result)?;
        *slot = boxed(FqComplex(io::complex_from_json(read_str(json)?)?));
        Ok(())
    })
}

/// Serializes a complex as an `fq-complex/1` document.
///
/// # Safety
/// `complex` must be a live handle; `json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_to_json(
    complex: *const FqComplex,
    json: *mut *mut c_char,
) -> FqStatus {
    guard(|| {
        let c = deref(complex)?;
        *out(json)? = into_c_string(io::complex_to_json(&c.0));
        Ok(())
    })
}

/// Destroys a complex. Null is ignored.
///
/// # Safety
/// `complex` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_free(complex: *mut FqComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Face, edge and vertex counts. Any output pointer may be null.
///
/// # Safety
/// `complex` must be a live handle; non-null outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_counts(
    complex: *const FqComplex,
    faces: *mut usize,
    edges: *mut usize,
    vertices: *mut usize,
) -> FqStatus {
    guard(|| {
        let c = &deref(complex)?.0;
        let v = c.num_vertices()?;
        for (ptr, value) in [
            (faces, c.num_faces()),
            (edges, c.num_edges()),
            (vertices, v),
        ] {
            if let Some(slot) = ptr.as_mut() {
                *slot = value;
            }
        }
        Ok(())
    })
}

/// Checks the surface axioms; `expected_genus < 0` skips the genus check.
/// The full report is written to `report_json` when it is not null.
///
/// # Safety
/// `complex` must be a live handle; `passed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_validate(
    complex: *const FqComplex,
    expected_genus: i64,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> FqStatus {
    guard(|| {
        let c = deref(complex)?;
        let report = validate(&c.0, (expected_genus >= 0).then_some(expected_genus));
        *out(passed)? = report.passed;
        if let Some(slot) = report_json.as_mut() {
            *slot = into_c_string(io::validation_to_json(&report));
        }
        Ok(())
    })
}

/// Geodesic loop report as an `fq-loops/1` document.
///
/// # Safety
/// `complex` must be a live handle; `json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_loops(
    complex: *const FqComplex,
    json: *mut *mut c_char,
) -> FqStatus {
    guard(|| {
        let report = trace_geodesic_loops(&deref(complex)?.0)?;
        *out(json)? = into_c_string(io::loops_to_json(&report));
        Ok(())
    })
}

/// Cuts every face into `pieces` (2 or 4) pieces. `axis == 0` means no
/// axis. The subdivision map is written to `map_json` when it is not null.
///
/// # Safety
/// `complex` must be a live handle; `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_complex_subdivide(
    complex: *const FqComplex,
    pieces: usize,
    axis: usize,
    result: *mut *mut FqComplex,
    map_json: *mut *mut c_char,
) -> FqStatus {
    guard(|| {
        let c = deref(complex)?;
        let slot = out(result)?;
        let (fine, map) = subdivide(&c.0, pieces, (axis != 0).then_some(axis))?;
        if let Some(m) = map_json.as_mut() {
            *m = into_c_string(io::subdivision_to_json(&map));
        }
        *slot = boxed(FqComplex(fine));
        Ok(())
    })
}

/// Solves for a good coloring. Returns [`FqStatus::Contradiction`] when
/// none exists; the witness is then in the last error message.
///
/// # Safety
/// `complex` must be a live handle; `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_color(
    complex: *const FqComplex,
    exhaustive: bool,
    result: *mut *mut FqColoring,
) -> FqStatus {
    guard(|| {
        let c = deref(complex)?;
        let slot = out(result)?;
        let mode = if exhaustive {
            SolveMode::Exhaustive
        } else {
            SolveMode::Propagate
        };
        match solve_good_coloring(&c.0, mode)? {
            ColoringOutcome::Colored(coloring) => {
                *slot = boxed(FqColoring(coloring));
                Ok(())
            }
            outcome @ ColoringOutcome::Contradiction(_) => Err(Failure(
                FqStatus::Contradiction,
                io::coloring_to_json(&outcome, mode),
            )),
        }
    })
}

/// Parses an `fq-coloring/1` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_coloring_from_json(
    json: *const c_char,
    result: *mut *mut FqColoring,
) -> FqStatus {
    guard(|| {
        let slot = out(result)?;
        *slot = boxed(FqColoring(io::coloring_from_json(read_str(json)?)?));
        Ok(())
    })
}

/// Copies up to `capacity` colors into `colors` and stores the edge count
/// in `len`. Call with `capacity == 0` to query the length.
///
/// # Safety
/// `coloring` must be a live handle; `colors` valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn fq_coloring_colors(
    coloring: *const FqColoring,
    colors: *mut u8,
    capacity: usize,
    len: *mut usize,
) -> FqStatus {
    guard(|| {
        let c = &deref(coloring)?.0;
        *out(len)? = c.colors.len();
        if capacity > 0 {
            let n = capacity.min(c.colors.len());
            std::slice::from_raw_parts_mut(out(colors)?, n).copy_from_slice(&c.colors[..n]);
        }
        Ok(())
    })
}

/// Destroys a coloring. Null is ignored.
///
/// # Safety
/// `coloring` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_coloring_free(coloring: *mut FqColoring) {
    if !coloring.is_null() {
        drop(Box::from_raw(coloring));
    }
}

/// Assigns local groups for the thickness sequence `q[0..q_len]` and checks
/// the link conditions. Writes the `fq-cert/1` document and whether every
/// vertex passed.
///
/// # Safety
/// Handles must be live; `q` valid for `q_len` reads; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_certify(
    complex: *const FqComplex,
    coloring: *const FqColoring,
    q: *const u64,
    q_len: usize,
    certified: *mut bool,
    cert_json: *mut *mut c_char,
) -> FqStatus {
    guard(|| {
        let (c, col) = (deref(complex)?, deref(coloring)?);
        let q = read_sequence(q, q_len)?;
        let flag = out(certified)?;
        let cert = certificate(&assign_groups(&c.0, &col.0, &q)?, None);
        *flag = cert.certified;
        if let Some(slot) = cert_json.as_mut() {
            *slot = into_c_string(io::certificate_to_json(&cert));
        }
        Ok(())
    })
}

/// Decides whether a lattice exists for `(p, q, genus)`, optionally running
/// the certifying construction. Writes the verdict and, if `decision_json`
/// is not null, the `fq-decision/1` document.
///
/// # Safety
/// `q` valid for `q_len` reads; `verdict` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fq_decide(
    p: usize,
    q: *const u64,
    q_len: usize,
    genus: usize,
    certify: bool,
    verdict: *mut FqVerdict,
    decision_json: *mut *mut c_char,
) -> FqStatus {
    guard(|| {
        let q = read_sequence(q, q_len)?;
        let slot = out(verdict)?;
        let decision = decide(p, &q, genus, certify)?;
        *slot = match decision.verdict {
            Verdict::Exists { .. } => FqVerdict::Exists,
            Verdict::RuledOut { .. } => FqVerdict::RuledOut,
            Verdict::Unknown { .. } => FqVerdict::Unknown,
        };
        if let Some(json) = decision_json.as_mut() {
            *json = into_c_string(io::decision_to_json(&decision));
        }
        Ok(())
    })
}
