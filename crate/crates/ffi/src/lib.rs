//! C ABI for the homfin library.
//!
//! Conventions:
//! - every constructor returns a status code and writes an opaque handle
//!   through an out-pointer; handles are freed with the matching `_free`;
//! - all fallible calls return [`HfStatus`]; on failure a thread-local
//!   message is retrievable with [`hf_last_error`];
//! - strings are NUL-terminated UTF-8; strings returned by the library are
//!   released with [`hf_string_free`].

use homfin::coset::ReductiveSplit;
use homfin::curvature;
use homfin::error::Error;
use homfin::fixtures::{fixture, CaseId};
use homfin::liealg::{build_compact_algebra, CompactLieAlgebra};
use homfin::norm::{LFunction, NormKind, NormShape};
use homfin::obstruct;
use homfin::rootsys::{build_root_system, Family};
use homfin::specfile;
use nalgebra::DVector;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::str::FromStr;
use std::sync::Arc;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    PreconditionViolated = 4,
    NumericalError = 5,
    IoError = 6,
}

/// Opaque handle: a compact simple Lie algebra in a Chevalley-derived basis.
pub struct HfAlgebra {
    inner: Arc<CompactLieAlgebra>,
}

/// Opaque handle: a reductive split g = h + m with its isotypic summands.
pub struct HfSplit {
    inner: ReductiveSplit,
}

/// Opaque handle: an invariant Minkowski norm on m.
pub struct HfNorm {
    inner: LFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(e: &Error) -> HfStatus {
    let msg = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|c| *c.borrow_mut() = msg);
    match e {
        Error::Parse { .. } => HfStatus::ParseError,
        Error::InvalidArgument(_) | Error::WrongNormShape(_) => HfStatus::InvalidArgument,
        Error::PreconditionViolated { .. } | Error::DegenerateFlag(_) => {
            HfStatus::PreconditionViolated
        }
        Error::Io(_) => HfStatus::IoError,
        _ => HfStatus::NumericalError,
    }
}

fn invalid(msg: &str) -> HfStatus {
    set_error(&Error::InvalidArgument(msg.to_string()))
}

/// Copy the last error message into `buf` (truncated to `cap` bytes
/// including the NUL); returns the full message length without the NUL.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (query mode).
#[no_mangle]
pub unsafe extern "C" fn hf_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|c| {
        let msg = c.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, HfStatus> {
    if p.is_null() {
        return Err(HfStatus::NullPointer);
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid("string is not valid UTF-8"))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, HfStatus> {
    p.as_ref().ok_or(HfStatus::NullPointer)
}

// ---------------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------------

/// Build the compact real form for a root-system family ("A", "C", "G2")
/// and rank.
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_algebra_new(
    family: *const c_char,
    rank: usize,
    out: *mut *mut HfAlgebra,
) -> HfStatus {
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    let family = match cstr(family) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let result = Family::from_str(family)
        .and_then(|f| build_root_system(f, rank))
        .and_then(|rs| build_compact_algebra(&rs));
    match result {
        Ok(g) => {
            *out = Box::into_raw(Box::new(HfAlgebra { inner: Arc::new(g) }));
            HfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// # Safety
/// `a` must be a pointer returned by `hf_algebra_new` (or null).
#[no_mangle]
pub unsafe extern "C" fn hf_algebra_free(a: *mut HfAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hf_algebra_dim(a: *const HfAlgebra, out: *mut usize) -> HfStatus {
    let a = match deref(a) {
        Ok(a) => a,
        Err(st) => return st,
    };
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    *out = a.inner.dim;
    HfStatus::Ok
}

/// Worst Jacobi-identity residual over the structure constants.
///
/// # Safety
/// `a` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hf_algebra_jacobi_residual(
    a: *const HfAlgebra,
    out: *mut f64,
) -> HfStatus {
    let a = match deref(a) {
        Ok(a) => a,
        Err(st) => return st,
    };
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    *out = a.inner.jacobi_residual();
    HfStatus::Ok
}

// ---------------------------------------------------------------------------
// splits
// ---------------------------------------------------------------------------

/// Build the reductive split of a built-in case ("C1".."C5",
/// "AW_degenerate", "sphere_SU", "sphere_Sp"), in the reference summand
/// order.
///
/// # Safety
/// `case_id` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_split_case(
    case_id: *const c_char,
    out: *mut *mut HfSplit,
) -> HfStatus {
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    let case = match cstr(case_id) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let result =
        CaseId::from_str(case).and_then(|c| obstruct::build_case_split(&fixture(c)));
    match result {
        Ok(split) => {
            *out = Box::into_raw(Box::new(HfSplit { inner: split }));
            HfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Build a reductive split from a space file on disk.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_split_from_file(
    path: *const c_char,
    out: *mut *mut HfSplit,
) -> HfStatus {
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    let path = match cstr(path) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let result = (|| -> Result<ReductiveSplit, Error> {
        let text = std::fs::read_to_string(path)?;
        let spec = specfile::parse_space(path, &text)?;
        let rs = build_root_system(spec.family, spec.rank)?;
        let g = Arc::new(build_compact_algebra(&rs)?);
        let split = homfin::coset::reductive_split(g, &spec.subalgebra)?;
        if spec.expected_summands.is_empty() {
            Ok(split)
        } else {
            split.match_expected(&spec.expected_summands)
        }
    })();
    match result {
        Ok(split) => {
            *out = Box::into_raw(Box::new(HfSplit { inner: split }));
            HfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// # Safety
/// `s` must be a pointer returned by a split constructor (or null).
#[no_mangle]
pub unsafe extern "C" fn hf_split_free(s: *mut HfSplit) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hf_split_dim_m(s: *const HfSplit, out: *mut usize) -> HfStatus {
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    *out = s.inner.dim_m();
    HfStatus::Ok
}

/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hf_split_num_summands(s: *const HfSplit, out: *mut usize) -> HfStatus {
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    *out = s.inner.num_summands();
    HfStatus::Ok
}

/// Copy the summand dimensions into `buf` (`cap` elements; must be at least
/// the summand count).
///
/// # Safety
/// `s` must be valid; `buf` must point to `cap` writable elements.
#[no_mangle]
pub unsafe extern "C" fn hf_split_summand_dims(
    s: *const HfSplit,
    buf: *mut usize,
    cap: usize,
) -> HfStatus {
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if buf.is_null() {
        return HfStatus::NullPointer;
    }
    let dims = s.inner.summand_dims();
    if cap < dims.len() {
        return invalid("buffer too small for summand dims");
    }
    for (i, d) in dims.iter().enumerate() {
        *buf.add(i) = *d;
    }
    HfStatus::Ok
}

/// Dimension of t intersect m.
///
/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hf_split_rank_gap(s: *const HfSplit, out: *mut usize) -> HfStatus {
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    *out = s.inner.rank_gap();
    HfStatus::Ok
}

// ---------------------------------------------------------------------------
// norms
// ---------------------------------------------------------------------------

unsafe fn make_norm(
    s: *const HfSplit,
    kind: NormKind,
    shape: NormShape,
    out: *mut *mut HfNorm,
) -> HfStatus {
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    match LFunction::new(shape, kind, s.inner.summand_dims()) {
        Ok(n) => {
            *out = Box::into_raw(Box::new(HfNorm { inner: n }));
            HfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Diagonal (Riemannian) norm with one positive coefficient per summand.
///
/// # Safety
/// `s` must be valid; `coeffs` must point to `len` readable doubles; `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_norm_diagonal(
    s: *const HfSplit,
    coeffs: *const f64,
    len: usize,
    out: *mut *mut HfNorm,
) -> HfStatus {
    if coeffs.is_null() {
        return HfStatus::NullPointer;
    }
    let coeffs = std::slice::from_raw_parts(coeffs, len).to_vec();
    make_norm(s, NormKind::Diagonal { coeffs }, NormShape::Reversible, out)
}

/// Non-reversible randers-kind norm: `len` positive coefficients for the
/// first summands plus a drift `b` along the last (one-dimensional)
/// summand, |b| < 1.
///
/// # Safety
/// `s` must be valid; `coeffs` must point to `len` readable doubles; `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_norm_randers(
    s: *const HfSplit,
    coeffs: *const f64,
    len: usize,
    b: f64,
    out: *mut *mut HfNorm,
) -> HfStatus {
    if coeffs.is_null() {
        return HfStatus::NullPointer;
    }
    let coeffs = std::slice::from_raw_parts(coeffs, len).to_vec();
    make_norm(
        s,
        NormKind::Randers { coeffs, b },
        NormShape::NonReversible,
        out,
    )
}

/// Load a norm file from disk and instantiate it for the split's summands.
///
/// # Safety
/// `s` must be valid; `path` must be a NUL-terminated string; `out` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn hf_norm_from_file(
    s: *const HfSplit,
    path: *const c_char,
    out: *mut *mut HfNorm,
) -> HfStatus {
    let split = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    let path = match cstr(path) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let result = (|| -> Result<LFunction, Error> {
        let text = std::fs::read_to_string(path)?;
        specfile::parse_norm(path, &text)?.realize(split.inner.summand_dims())
    })();
    match result {
        Ok(n) => {
            *out = Box::into_raw(Box::new(HfNorm { inner: n }));
            HfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// # Safety
/// `n` must be a pointer returned by a norm constructor (or null).
#[no_mangle]
pub unsafe extern "C" fn hf_norm_free(n: *mut HfNorm) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// Evaluate F(y) for y given in m-coordinates (`len` = dim m).
///
/// # Safety
/// `s`, `n`, `out` must be valid; `y` must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn hf_norm_eval(
    s: *const HfSplit,
    n: *const HfNorm,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> HfStatus {
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let n = match deref(n) {
        Ok(n) => n,
        Err(st) => return st,
    };
    if y.is_null() || out.is_null() {
        return HfStatus::NullPointer;
    }
    if len != s.inner.dim_m() {
        return invalid("coordinate length does not match dim m");
    }
    let coords = DVector::from_vec(std::slice::from_raw_parts(y, len).to_vec());
    match n.inner.norm_coords(&coords) {
        Ok(v) => {
            *out = v;
            HfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

// ---------------------------------------------------------------------------
// curvature and case verification
// ---------------------------------------------------------------------------

/// Flag curvature K(y, v) for a commuting flag; the vectors are given in
/// the short spec syntax ("u[2e1]", "v[e1-e2]", "t[e1+e2-2e3]").
///
/// # Safety
/// All pointers must be valid; `y` and `v` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn hf_flag_curvature(
    s: *const HfSplit,
    n: *const HfNorm,
    y: *const c_char,
    v: *const c_char,
    tol: f64,
    out_k: *mut f64,
) -> HfStatus {
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let n = match deref(n) {
        Ok(n) => n,
        Err(st) => return st,
    };
    if out_k.is_null() {
        return HfStatus::NullPointer;
    }
    let (y, v) = match (cstr(y), cstr(v)) {
        (Ok(y), Ok(v)) => (y, v),
        (Err(st), _) | (_, Err(st)) => return st,
    };
    let result = (|| -> Result<f64, Error> {
        let yv = specfile::parse_vector_spec(&s.inner.algebra, y)?;
        let vv = specfile::parse_vector_spec(&s.inner.algebra, v)?;
        Ok(curvature::flag_curvature(&s.inner, &n.inner, &yv, &vv, tol)?.k)
    })();
    match result {
        Ok(k) => {
            *out_k = k;
            HfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Run a built-in case end to end and return its JSON report (release with
/// `hf_string_free`).
///
/// # Safety
/// `case_id` must be a NUL-terminated string; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_verify_case_json(
    case_id: *const c_char,
    norms: usize,
    flags: usize,
    seed: u64,
    tol: f64,
    out_json: *mut *mut c_char,
) -> HfStatus {
    if out_json.is_null() {
        return HfStatus::NullPointer;
    }
    let case = match cstr(case_id) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let result = (|| -> Result<String, Error> {
        let case = CaseId::from_str(case)?;
        let report = obstruct::verify_case(case, norms, flags, seed, tol)?;
        serde_json::to_string_pretty(&report)
            .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))
    })();
    match result {
        Ok(json) => match CString::new(json) {
            Ok(c) => {
                *out_json = c.into_raw();
                HfStatus::Ok
            }
            Err(_) => invalid("report contains interior NUL"),
        },
        Err(e) => set_error(&e),
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library (or be null), and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn hf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
