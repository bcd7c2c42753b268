//! C interface to `qmanifold`.
//!
//! A metric is created from two expression strings and held behind an opaque
//! [`QmMetric`] handle. Every fallible function returns a [`QmStatus`]; on
//! failure, [`qm_last_error`] returns a message for the calling thread.
//! Tensors are written to caller-provided arrays in row-major order, with the
//! index layout given on each function. Strings returned by the library must
//! be released with [`qm_string_free`].

use qmanifold::analysis::{analyze_metric, PointAnalysis};
use qmanifold::catenoid::CatenoidChart;
use qmanifold::classify::{ClassifyTolerances, EinsteinKind};
use qmanifold::connection::{christoffel, fundamental_f, theta};
use qmanifold::curvature::{ricci, riemann};
use qmanifold::qbasis::QBasisReport;
use qmanifold::report::{to_json, PointReport};
use qmanifold::{Error, MetricAt, MetricSpec, Which};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result of a library call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    NotPositiveDefinite = 5,
    Degenerate = 6,
    InvalidArgument = 7,
    Internal = 8,
}

/// Values of the `w` argument: `g` or the associated metric `g̃`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmWhich {
    G = 0,
    GTilde = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmEinsteinKind {
    Einstein = 0,
    AlmostEinstein = 1,
    Generic = 2,
}

/// Pointwise classification.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QmClassification {
    /// A [`QmEinsteinKind`] value.
    pub kind: i32,
    /// Best-fit coefficients of `ρ ≈ αg + βg̃`.
    pub alpha: f64,
    pub beta: f64,
    pub w1_residual: f64,
    pub con_ae_residual: f64,
    /// 1 if `A₃ = B₁ = B₂ = 0` at the point.
    pub locally_product: i32,
}

/// Q-basis quantities for a vector `x`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QmQBasis {
    pub phi: f64,
    pub psi: f64,
    pub cos_phi: f64,
    pub cos_psi: f64,
    /// `r(Qᵖx)` for p = 0..3.
    pub ricci_dirs: [f64; 4],
    /// Sectional curvatures on `{x,Qx}, {x,Q²x}, {x,Q³x}, {Qx,Q²x}, {Qx,Q³x}, {Q²x,Q³x}`.
    pub sectional: [f64; 6],
    /// NaN when `ψ` is a right angle.
    pub con_r_residual: f64,
}

/// Opaque metric handle.
pub struct QmMetric {
    spec: MetricSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QmStatus {
    match e {
        Error::Parse(_) => QmStatus::Parse,
        Error::Eval(_) => QmStatus::Domain,
        Error::NotPositiveDefinite { .. } => QmStatus::NotPositiveDefinite,
        Error::DegenerateVector { .. }
        | Error::NullDirection { .. }
        | Error::DegeneratePlane { .. }
        | Error::DegenerateParameter => QmStatus::Degenerate,
    }
}

struct Fail(QmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QmStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error: panic inside qmanifold".to_string());
            QmStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QmStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn read3(p: *const f64, what: &str) -> Result<[f64; 3], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let v = [*p, *p.add(1), *p.add(2)];
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Fail(
            QmStatus::InvalidArgument,
            format!("{what} must be finite, got {v:?}"),
        ));
    }
    Ok(v)
}

unsafe fn metric_ref<'a>(m: *const QmMetric) -> Result<&'a QmMetric, Fail> {
    m.as_ref().ok_or_else(|| null("metric"))
}

unsafe fn at(m: *const QmMetric, point: *const f64) -> Result<MetricAt, Fail> {
    let m = metric_ref(m)?;
    Ok(m.spec.metric_at(read3(point, "point")?)?)
}

unsafe fn write_out(out: *mut f64, values: impl IntoIterator<Item = f64>) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output array"));
    }
    for (i, v) in values.into_iter().enumerate() {
        *out.add(i) = v;
    }
    Ok(())
}

fn which(w: i32) -> Result<Which, Fail> {
    match w {
        w if w == QmWhich::G as i32 => Ok(Which::G),
        w if w == QmWhich::GTilde as i32 => Ok(Which::Gt),
        _ => Err(Fail(
            QmStatus::InvalidArgument,
            format!("unknown metric selector {w}"),
        )),
    }
}

fn analysis(m: &MetricAt) -> PointAnalysis {
    analyze_metric(m, ClassifyTolerances::default())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `A` and `B` and stores a new handle in `*out`.
///
/// # Safety
/// `a` and `b` must be null or NUL-terminated strings; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qm_metric_new(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut QmMetric,
) -> QmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = MetricSpec::parse(read_str(a, "A")?, read_str(b, "B")?)?;
        *out = Box::into_raw(Box::new(QmMetric { spec }));
        Ok(())
    })
}

/// The catenoid chart `A = cosh²(x1)`, `B = x1²`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qm_metric_catenoid(out: *mut *mut QmMetric) -> QmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = CatenoidChart::new().spec().clone();
        *out = Box::into_raw(Box::new(QmMetric { spec }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qm_metric_free(m: *mut QmMetric) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Metric components at `point[3]`: `out[3*i + j] = h_ij`.
///
/// # Safety
/// `m` must be a live handle or null; `point` must hold 3 doubles and `out` 9.
#[no_mangle]
pub unsafe extern "C" fn qm_metric_at(
    m: *const QmMetric,
    point: *const f64,
    w: i32,
    out: *mut f64,
) -> QmStatus {
    guard(|| {
        let g = at(m, point)?;
        write_out(out, g.metric(which(w)?).iter().flatten().copied())
    })
}

/// Christoffel symbols: `out[9*k + 3*i + j] = Γᵏᵢⱼ`.
///
/// # Safety
/// `point` must hold 3 doubles and `out` 27.
#[no_mangle]
pub unsafe extern "C" fn qm_christoffel(
    m: *const QmMetric,
    point: *const f64,
    w: i32,
    out: *mut f64,
) -> QmStatus {
    guard(|| {
        let g = at(m, point)?;
        let c = christoffel(&g, which(w)?);
        write_out(out, c.gamma.iter().flatten().flatten().copied())
    })
}

/// Curvature: `out[27*i + 9*j + 3*k + l] = R_ijkl`.
///
/// # Safety
/// `point` must hold 3 doubles and `out` 81.
#[no_mangle]
pub unsafe extern "C" fn qm_riemann(
    m: *const QmMetric,
    point: *const f64,
    w: i32,
    out: *mut f64,
) -> QmStatus {
    guard(|| {
        let g = at(m, point)?;
        let r = riemann(&g, which(w)?);
        write_out(out, r.r.iter().flatten().flatten().flatten().copied())
    })
}

/// Ricci tensor `rho[3*i + j]` and its two traces. For `g` these are `τ` and
/// `τ*`; for `g̃`, `τ̃` and `τ̃*`.
///
/// # Safety
/// `point` must hold 3 doubles, `rho` 9; `tau` and `tau_star` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_ricci(
    m: *const QmMetric,
    point: *const f64,
    w: i32,
    rho: *mut f64,
    tau: *mut f64,
    tau_star: *mut f64,
) -> QmStatus {
    guard(|| {
        if tau.is_null() || tau_star.is_null() {
            return Err(null("tau output"));
        }
        let g = at(m, point)?;
        let which = which(w)?;
        let r = ricci(&riemann(&g, which), &g, which);
        write_out(rho, r.rho.iter().flatten().copied())?;
        *tau = r.tau;
        *tau_star = r.tau_star;
        Ok(())
    })
}

/// Fundamental tensor: `out[9*i + 3*j + k] = F_ijk = ∇ᵢg̃ⱼₖ`.
///
/// # Safety
/// `point` must hold 3 doubles and `out` 27.
#[no_mangle]
pub unsafe extern "C" fn qm_fundamental_f(
    m: *const QmMetric,
    point: *const f64,
    out: *mut f64,
) -> QmStatus {
    guard(|| {
        let g = at(m, point)?;
        let f = fundamental_f(&g, &christoffel(&g, Which::G));
        write_out(out, f.f.iter().flatten().flatten().copied())
    })
}

/// Lee forms `θ` and `θ̃` (lower index), 3 doubles each.
///
/// # Safety
/// `point`, `theta_out` and `theta_tilde_out` must each hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn qm_theta(
    m: *const QmMetric,
    point: *const f64,
    theta_out: *mut f64,
    theta_tilde_out: *mut f64,
) -> QmStatus {
    guard(|| {
        let g = at(m, point)?;
        let f = fundamental_f(&g, &christoffel(&g, Which::G));
        let t = theta(&g, &f);
        write_out(theta_out, t.theta)?;
        write_out(theta_tilde_out, t.theta_tilde)
    })
}

/// # Safety
/// `point` must hold 3 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_classify(
    m: *const QmMetric,
    point: *const f64,
    out: *mut QmClassification,
) -> QmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = analysis(&at(m, point)?);
        let c = &a.classification;
        let kind = match c.einstein.kind {
            EinsteinKind::Einstein { .. } => QmEinsteinKind::Einstein,
            EinsteinKind::AlmostEinstein { .. } => QmEinsteinKind::AlmostEinstein,
            EinsteinKind::Generic => QmEinsteinKind::Generic,
        };
        *out = QmClassification {
            kind: kind as i32,
            alpha: c.einstein.alpha,
            beta: c.einstein.beta,
            w1_residual: c.w1_residual,
            con_ae_residual: c.con_ae_residual,
            locally_product: i32::from(c.is_locally_product),
        };
        Ok(())
    })
}

/// Q-basis report for `x[3]` at `point[3]`. Fails with
/// `QM_STATUS_DEGENERATE` when `x` does not induce a basis.
///
/// # Safety
/// `point` and `x` must hold 3 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_qbasis(
    m: *const QmMetric,
    point: *const f64,
    x: *const f64,
    out: *mut QmQBasis,
) -> QmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = read3(x, "x")?;
        let g = at(m, point)?;
        let q = QBasisReport::from_analysis(&analysis(&g), &x)?;
        *out = QmQBasis {
            phi: q.phi,
            psi: q.psi,
            cos_phi: q.cos_phi,
            cos_psi: q.cos_psi,
            ricci_dirs: q.ricci_dirs,
            sectional: q.sectional,
            con_r_residual: q.con_r_residual.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Full point report as JSON in `*out`; release it with [`qm_string_free`].
/// `x` may be null to omit the Q-basis section.
///
/// # Safety
/// `point` must hold 3 doubles, `x` must be null or hold 3 doubles, and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_analyze_json(
    m: *const QmMetric,
    point: *const f64,
    x: *const f64,
    out: *mut *mut c_char,
) -> QmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = if x.is_null() {
            None
        } else {
            Some(read3(x, "x")?)
        };
        let a = analysis(&at(m, point)?);
        let q = x.map(|x| QBasisReport::from_analysis(&a, &x)).transpose()?;
        let report = PointReport::new(a, q, ClassifyTolerances::default());
        let json = to_json(&report).map_err(|e| Fail(QmStatus::Internal, e.to_string()))?;
        *out = CString::new(json).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
