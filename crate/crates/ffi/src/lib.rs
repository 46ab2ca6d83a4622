//! C interface to `grasspair`.
//!
//! Objects are opaque handles created by `gp_*_new` style functions and released with the
//! matching `gp_*_free`. Every fallible function returns a [`GpStatus`]; on failure the
//! message is available from [`gp_last_error_message`] until the next failing call on the
//! same thread. Strings returned through `char **` must be released with [`gp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use grasspair::complement::{decide_finite, ComplementCertificate, Decision};
use grasspair::error::Error;
use grasspair::geodesics::{geodesic_eval, geodesic_log};
use grasspair::pairs::{analyze, fredholm_index, ProjectionPair};
use grasspair::report::{analyze_report, classify_example, to_json, ProbeConfig};
use grasspair::substrate::{matrix_from_json, CMatrix, TolerancePolicy, C64};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotProjection = 3,
    Numerical = 4,
    NoComplement = 5,
    NoGeodesic = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// Five-space dimensions of a pair.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GpDims {
    pub n: usize,
    pub d11: usize,
    pub d00: usize,
    pub d10: usize,
    pub d01: usize,
    pub generic_dim: usize,
}

/// Complex matrix.
pub struct GpMatrix {
    inner: CMatrix,
}

/// Pair of orthogonal projections of the same size.
pub struct GpPair {
    inner: ProjectionPair,
}

/// Common complement certificate.
pub struct GpCertificate {
    inner: ComplementCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GpStatus {
    match e {
        Error::NotHermitian(_) | Error::NotProjection(_) => GpStatus::NotProjection,
        Error::NoGeodesic { .. } => GpStatus::NoGeodesic,
        Error::Parse(_) => GpStatus::Parse,
        Error::Io(_) => GpStatus::Io,
        Error::NonFinite | Error::CertificateFailed(_) | Error::WindingIllConditioned(_) => GpStatus::Numerical,
        _ => GpStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), (GpStatus, String)>>(f: F) -> GpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GpStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            GpStatus::Panic
        }
    }
}

fn lift<T>(r: grasspair::Result<T>) -> Result<T, (GpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (GpStatus, String) {
    (GpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GpStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (GpStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GpStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (GpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn string_out(s: String) -> Result<*mut c_char, (GpStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (GpStatus::Numerical, "string contains NUL".into()))
}

fn policy() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// Message of the last failing call on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn gp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `rows x cols` matrix from row-major interleaved `(re, im)` doubles (`2*rows*cols` values).
///
/// # Safety
/// `data` must point to `2*rows*cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut GpMatrix,
) -> GpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let len = rows
            .checked_mul(cols)
            .and_then(|x| x.checked_mul(2))
            .ok_or((GpStatus::InvalidArgument, "size overflow".into()))?;
        if len > 0 && data.is_null() {
            return Err(null("data"));
        }
        let vals = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(data, len)
        };
        let m = CMatrix::from_fn(rows, cols, |i, j| {
            let k = 2 * (i * cols + j);
            C64::new(vals[k], vals[k + 1])
        });
        *out = Box::into_raw(Box::new(GpMatrix { inner: m }));
        Ok(())
    })
}

/// Parses a matrix from JSON `{"rows":r,"cols":c,"data":[[re,im],...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_from_json(json: *const c_char, out: *mut *mut GpMatrix) -> GpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let m = lift(matrix_from_json(read_str(json, "json")?))?;
        *out = Box::into_raw(Box::new(GpMatrix { inner: m }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_free(m: *mut GpMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a valid handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_rows(m: *const GpMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.nrows())
}

/// # Safety
/// `m` must be a valid handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_cols(m: *const GpMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.ncols())
}

/// Copies the entries row-major as interleaved `(re, im)`; `len` is the capacity of `buf` in doubles.
///
/// # Safety
/// `buf` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gp_matrix_copy_data(m: *const GpMatrix, buf: *mut f64, len: usize) -> GpStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.inner;
        let need = 2 * m.len();
        if len < need {
            return Err((
                GpStatus::InvalidArgument,
                format!("buffer holds {len} doubles, need {need}"),
            ));
        }
        if need == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let k = 2 * (i * m.ncols() + j);
                dst[k] = m[(i, j)].re;
                dst[k + 1] = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Builds a pair from two orthogonal projections; the matrices are copied.
///
/// # Safety
/// `p`, `q` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_new(p: *const GpMatrix, q: *const GpMatrix, out: *mut *mut GpPair) -> GpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let p = deref(p, "p")?.inner.clone();
        let q = deref(q, "q")?.inner.clone();
        let pair = lift(ProjectionPair::new(p, q))?;
        *out = Box::into_raw(Box::new(GpPair { inner: pair }));
        Ok(())
    })
}

/// # Safety
/// `pair` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_free(pair: *mut GpPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Five-space dimensions.
///
/// # Safety
/// `pair` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_dims(pair: *const GpPair, out: *mut GpDims) -> GpStatus {
    guard(|| {
        let pair = &deref(pair, "pair")?.inner;
        let out = out_ptr(out, "out")?;
        let a = lift(analyze(pair, &policy()))?;
        *out = GpDims {
            n: a.n,
            d11: a.d11,
            d00: a.d00,
            d10: a.d10,
            d01: a.d01,
            generic_dim: a.generic_dim(),
        };
        Ok(())
    })
}

/// Principal angles of the generic part in ascending order. `*count` receives the number of
/// angles; at most `cap` are written to `buf`.
///
/// # Safety
/// `buf` must have room for `cap` doubles (may be NULL when `cap` is 0); `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_angles(pair: *const GpPair, buf: *mut f64, cap: usize, count: *mut usize) -> GpStatus {
    guard(|| {
        let pair = &deref(pair, "pair")?.inner;
        let count = out_ptr(count, "count")?;
        let a = lift(analyze(pair, &policy()))?;
        *count = a.angles.len();
        let k = cap.min(a.angles.len());
        if k > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            std::slice::from_raw_parts_mut(buf, k).copy_from_slice(&a.angles[..k]);
        }
        Ok(())
    })
}

/// `dim(S ∩ T⊥) - dim(S⊥ ∩ T)`.
///
/// # Safety
/// `pair` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_fredholm_index(pair: *const GpPair, out: *mut i64) -> GpStatus {
    guard(|| {
        let pair = &deref(pair, "pair")?.inner;
        let out = out_ptr(out, "out")?;
        *out = lift(fredholm_index(pair, &policy()))?;
        Ok(())
    })
}

/// Operator-norm distance `|P - Q|`, or NaN for a NULL handle.
///
/// # Safety
/// `pair` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_distance(pair: *const GpPair) -> f64 {
    pair.as_ref().map_or(f64::NAN, |p| p.inner.distance())
}

/// Decides whether the ranges have a common complement. Returns `GP_STATUS_NO_COMPLEMENT`
/// with `*out` set to NULL when they do not; the reason is in [`gp_last_error_message`].
///
/// # Safety
/// `pair` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_decide(pair: *const GpPair, out: *mut *mut GpCertificate) -> GpStatus {
    guard(|| {
        let pair = &deref(pair, "pair")?.inner;
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        match lift(decide_finite(pair, &policy()))? {
            Decision::Certificate(c) => {
                *out = Box::into_raw(Box::new(GpCertificate { inner: c }));
                Ok(())
            }
            Decision::NoComplement { reason } => Err((GpStatus::NoComplement, reason)),
        }
    })
}

/// # Safety
/// `cert` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gp_certificate_free(cert: *mut GpCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Orthonormal basis of the common complement as an `n x dim` matrix.
///
/// # Safety
/// `cert` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_certificate_basis(cert: *const GpCertificate, out: *mut *mut GpMatrix) -> GpStatus {
    guard(|| {
        let cert = &deref(cert, "certificate")?.inner;
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(GpMatrix {
            inner: cert.z.basis.clone(),
        }));
        Ok(())
    })
}

/// Direct-sum residuals against the two ranges and distances from the witness projection.
///
/// # Safety
/// `cert` must be a valid handle; every output pointer must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn gp_certificate_residuals(
    cert: *const GpCertificate,
    residual_s: *mut f64,
    residual_t: *mut f64,
    dist_ps: *mut f64,
    dist_pt: *mut f64,
) -> GpStatus {
    guard(|| {
        let c = &deref(cert, "certificate")?.inner;
        for (p, v) in [
            (residual_s, c.residual_s),
            (residual_t, c.residual_t),
            (dist_ps, c.dist_ps),
            (dist_pt, c.dist_pt),
        ] {
            if let Some(p) = p.as_mut() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Point `δ(t)` of the minimal geodesic from P (t = 0) to Q (t = 1).
///
/// # Safety
/// `pair` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_pair_geodesic(pair: *const GpPair, t: f64, out: *mut *mut GpMatrix) -> GpStatus {
    guard(|| {
        let pair = &deref(pair, "pair")?.inner;
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        if !t.is_finite() {
            return Err((GpStatus::InvalidArgument, "t is not finite".into()));
        }
        let log = lift(geodesic_log(pair, &policy()))?;
        let m = lift(geodesic_eval(&log, t))?;
        *out = Box::into_raw(Box::new(GpMatrix { inner: m }));
        Ok(())
    })
}

/// Full analysis report of a pair as JSON, same schema as `grasspair analyze`.
///
/// # Safety
/// `pair` must be a valid handle; `out` must be writable. Free the string with [`gp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gp_pair_analyze_json(pair: *const GpPair, seed: u64, out: *mut *mut c_char) -> GpStatus {
    guard(|| {
        let pair = &deref(pair, "pair")?.inner;
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let probe = ProbeConfig {
            seed,
            ..ProbeConfig::default()
        };
        let report = lift(analyze_report(pair, &policy(), &probe))?;
        *out = string_out(to_json(&report))?;
        Ok(())
    })
}

/// Classifies a registered example over the given levels and returns the report as JSON.
/// `params_json` may be NULL for defaults.
///
/// # Safety
/// `name` must be a NUL-terminated string, `levels` must point to `n_levels` values and
/// `out` must be writable. Free the string with [`gp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gp_classify_example(
    name: *const c_char,
    params_json: *const c_char,
    levels: *const usize,
    n_levels: usize,
    out: *mut *mut c_char,
) -> GpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let name = read_str(name, "name")?;
        let params = if params_json.is_null() {
            serde_json::Value::Null
        } else {
            serde_json::from_str(read_str(params_json, "params_json")?)
                .map_err(|e| (GpStatus::Parse, format!("params: {e}")))?
        };
        if n_levels > 0 && levels.is_null() {
            return Err(null("levels"));
        }
        let lv = if n_levels == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(levels, n_levels)
        };
        let report = lift(classify_example(name, &params, lv, &policy()))?;
        *out = string_out(to_json(&report))?;
        Ok(())
    })
}
