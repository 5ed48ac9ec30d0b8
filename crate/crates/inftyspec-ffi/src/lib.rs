//! C ABI for the eigenvalue and stability library: opaque domain handles,
//! status codes, and JSON-string reports.
//!
//! Conventions: every function returns an [`InftyStatus`]; results come back
//! through out-pointers. Strings returned through `char **` are owned by the
//! caller and must be released with [`infty_string_free`]; domain handles
//! with [`infty_domain_free`]. All panics are caught at the boundary and
//! reported as `INFTY_STATUS_INTERNAL`.

use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use inftyspec::domains::DomainSpec;
use inftyspec::error::Error;
use inftyspec::geodesic::{GeodesicConfig, Solver};
use inftyspec::spectra::{eigenpair_numeric, ReportOptions};

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InftyStatus {
    Ok = 0,
    InvalidArgument = 1,
    Infeasible = 2,
    Resolution = 3,
    Disconnected = 4,
    NotCertified = 5,
    VacuousBound = 6,
    NullPointer = 7,
    Utf8 = 8,
    Json = 9,
    Io = 10,
    Internal = 11,
}

/// Opaque handle to a validated domain description.
pub struct InftyDomain {
    spec: DomainSpec,
}

fn status_of(e: &Error) -> InftyStatus {
    match e {
        Error::InvalidParameter(_) | Error::NotConvex(_) | Error::EmptyIntersection(_) => {
            InftyStatus::InvalidArgument
        }
        Error::Infeasible(_) => InftyStatus::Infeasible,
        Error::ResolutionTooCoarse(_) | Error::EmptyRaster(_) => InftyStatus::Resolution,
        Error::Disconnected(_) => InftyStatus::Disconnected,
        Error::NotCertified(_) => InftyStatus::NotCertified,
        Error::BoundVacuous(_) => InftyStatus::VacuousBound,
        Error::Json(_) => InftyStatus::Json,
        Error::Io(_) => InftyStatus::Io,
    }
}

fn guarded(f: impl FnOnce() -> InftyStatus) -> InftyStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(InftyStatus::Internal)
}

fn solver_from(code: c_int) -> Option<Solver> {
    match code {
        0 => Some(Solver::FastMarching),
        1 => Some(Solver::Dijkstra8),
        2 => Some(Solver::Dijkstra16),
        _ => None,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, InftyStatus> {
    if ptr.is_null() {
        return Err(InftyStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| InftyStatus::Utf8)
}

fn give_string(s: String, out: *mut *mut c_char) -> InftyStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            InftyStatus::Ok
        }
        Err(_) => InftyStatus::Internal,
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn infty_version() -> *const c_char {
    concat!("inftyspec ", env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parse a domain from its JSON description {"kind", "params", "dimension"}.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_from_json(
    json: *const c_char,
    out: *mut *mut InftyDomain,
) -> InftyStatus {
    if out.is_null() {
        return InftyStatus::NullPointer;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guarded(|| match serde_json::from_str::<DomainSpec>(text) {
        Ok(spec) => match spec.validate() {
            Ok(()) => {
                *out = Box::into_raw(Box::new(InftyDomain { spec }));
                InftyStatus::Ok
            }
            Err(e) => status_of(&e),
        },
        Err(_) => InftyStatus::Json,
    })
}

/// Serialize the domain back to JSON (caller frees via infty_string_free).
///
/// # Safety
/// `domain` must come from this library and `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_to_json(
    domain: *const InftyDomain,
    out_json: *mut *mut c_char,
) -> InftyStatus {
    if domain.is_null() || out_json.is_null() {
        return InftyStatus::NullPointer;
    }
    let spec = &(*domain).spec;
    guarded(|| match serde_json::to_string(spec) {
        Ok(s) => give_string(s, out_json),
        Err(_) => InftyStatus::Json,
    })
}

/// Planar ball of radius `radius` centered at the origin.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_ball(
    radius: c_double,
    out: *mut *mut InftyDomain,
) -> InftyStatus {
    new_domain(out, || DomainSpec::disk(radius))
}

/// Annulus with the given radii, centered at the origin.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_annulus(
    outer: c_double,
    inner: c_double,
    out: *mut *mut InftyDomain,
) -> InftyStatus {
    new_domain(out, || DomainSpec::annulus(outer, inner))
}

/// Stadium: segment of the given length with semicircular caps.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_stadium(
    cap_radius: c_double,
    length: c_double,
    out: *mut *mut InftyDomain,
) -> InftyStatus {
    new_domain(out, || DomainSpec::stadium(cap_radius, length))
}

/// Regular polygon with `sides` sides and the given apothem.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_regular_polygon(
    sides: u32,
    apothem: c_double,
    out: *mut *mut InftyDomain,
) -> InftyStatus {
    new_domain(out, || DomainSpec::regular_polygon(sides, apothem))
}

/// Axis-aligned ellipse; `semi_axes` points at `len >= 2` semi-axis lengths.
///
/// # Safety
/// `semi_axes` must point at `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_ellipse(
    semi_axes: *const c_double,
    len: usize,
    out: *mut *mut InftyDomain,
) -> InftyStatus {
    if semi_axes.is_null() {
        return InftyStatus::NullPointer;
    }
    let axes = std::slice::from_raw_parts(semi_axes, len).to_vec();
    new_domain(out, || DomainSpec::ellipse(axes))
}

unsafe fn new_domain(
    out: *mut *mut InftyDomain,
    build: impl FnOnce() -> Result<DomainSpec, Error>,
) -> InftyStatus {
    if out.is_null() {
        return InftyStatus::NullPointer;
    }
    guarded(|| match build() {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(InftyDomain { spec }));
            InftyStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a domain handle (NULL is a no-op).
///
/// # Safety
/// `domain` must be NULL or a pointer returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn infty_domain_free(domain: *mut InftyDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// Release a string returned by this library (NULL is a no-op).
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn infty_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Closed-form eigenvalues: lambda_D = 1/inradius, lambda_N = 2/diameter.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn infty_eigenpair_closed_form(
    domain: *const InftyDomain,
    lambda_d: *mut c_double,
    lambda_n: *mut c_double,
) -> InftyStatus {
    if domain.is_null() || lambda_d.is_null() || lambda_n.is_null() {
        return InftyStatus::NullPointer;
    }
    let spec = &(*domain).spec;
    guarded(|| {
        let pair = inftyspec::spectra::eigenpair_closed_form(spec);
        *lambda_d = pair.lambda_d;
        *lambda_n = pair.lambda_n;
        InftyStatus::Ok
    })
}

/// Numeric eigenvalues on a grid of spacing `h`.
///
/// `solver`: 0 fast marching, 1 Dijkstra-8, 2 Dijkstra-16. `stride`
/// subsamples boundary sources in the diameter search. Error bars are
/// written when the bar pointers are non-NULL.
///
/// # Safety
/// `domain`, `lambda_d`, `lambda_n` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn infty_eigenpair_numeric(
    domain: *const InftyDomain,
    h: c_double,
    solver: c_int,
    stride: usize,
    lambda_d: *mut c_double,
    lambda_n: *mut c_double,
    bar_d: *mut c_double,
    bar_n: *mut c_double,
) -> InftyStatus {
    if domain.is_null() || lambda_d.is_null() || lambda_n.is_null() {
        return InftyStatus::NullPointer;
    }
    let Some(solver) = solver_from(solver) else {
        return InftyStatus::InvalidArgument;
    };
    let spec = &(*domain).spec;
    guarded(|| {
        match eigenpair_numeric(spec, h, &GeodesicConfig::new(solver, stride)) {
            Ok(pair) => {
                *lambda_d = pair.lambda_d;
                *lambda_n = pair.lambda_n;
                if !bar_d.is_null() {
                    *bar_d = pair.error_bars.0;
                }
                if !bar_n.is_null() {
                    *bar_n = pair.error_bars.1;
                }
                InftyStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Full stability report against the ball of radius `r`, as a JSON string
/// (caller frees via infty_string_free). `solver`/`stride` as in
/// [`infty_eigenpair_numeric`].
///
/// # Safety
/// `domain` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn infty_stability_report_json(
    domain: *const InftyDomain,
    r: c_double,
    h: c_double,
    solver: c_int,
    stride: usize,
    out_json: *mut *mut c_char,
) -> InftyStatus {
    if domain.is_null() || out_json.is_null() {
        return InftyStatus::NullPointer;
    }
    let Some(solver) = solver_from(solver) else {
        return InftyStatus::InvalidArgument;
    };
    let spec = &(*domain).spec;
    guarded(|| {
        let opts = ReportOptions {
            geodesic: GeodesicConfig::new(solver, stride),
            ..ReportOptions::default()
        };
        match inftyspec::spectra::stability_report(spec, r, h, &opts) {
            Ok(report) => match serde_json::to_string(&report) {
                Ok(s) => give_string(s, out_json),
                Err(_) => InftyStatus::Json,
            },
            Err(e) => status_of(&e),
        }
    })
}
