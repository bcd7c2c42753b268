use qmanifold_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn metric(a: &str, b: &str) -> *mut QmMetric {
    let (a, b) = (CString::new(a).unwrap(), CString::new(b).unwrap());
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { qm_metric_new(a.as_ptr(), b.as_ptr(), &mut m) },
        QmStatus::Ok
    );
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    let p = qm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn catenoid_values() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qm_metric_catenoid(&mut m) }, QmStatus::Ok);
    let p = [1.0, 0.3, -0.2];
    let mut g = [0.0; 9];
    assert_eq!(
        unsafe { qm_metric_at(m, p.as_ptr(), QmWhich::GTilde as i32, g.as_mut_ptr()) },
        QmStatus::Ok
    );
    let c2 = 1f64.cosh().powi(2);
    assert_eq!(g, [-c2, 0.0, 0.0, 0.0, -c2, 0.0, 0.0, 0.0, 1.0]);

    let mut r = [0.0; 81];
    assert_eq!(
        unsafe { qm_riemann(m, p.as_ptr(), QmWhich::G as i32, r.as_mut_ptr()) },
        QmStatus::Ok
    );
    // R_1212 sits at 27*0 + 9*1 + 3*0 + 1
    let r1212 = r[10] / (c2 * c2);
    assert!((r1212 - 1.0 / 1f64.cosh().powi(4)).abs() < 1e-12);

    let (mut rho, mut tau, mut ts) = ([0.0; 9], 0.0, 0.0);
    assert_eq!(
        unsafe {
            qm_ricci(
                m,
                p.as_ptr(),
                QmWhich::G as i32,
                rho.as_mut_ptr(),
                &mut tau,
                &mut ts,
            )
        },
        QmStatus::Ok
    );
    assert!((tau + 2.0 / 1f64.cosh().powi(4)).abs() < 1e-12);
    assert!((ts - 2.0 / 1f64.cosh().powi(4)).abs() < 1e-12);

    let (mut th, mut tht) = ([0.0; 3], [0.0; 3]);
    assert_eq!(
        unsafe { qm_theta(m, p.as_ptr(), th.as_mut_ptr(), tht.as_mut_ptr()) },
        QmStatus::Ok
    );
    let scale = 1.0 / 1f64.cosh();
    assert!((th[0] * scale + 2.0 / 1f64.cosh()).abs() < 1e-12);

    let mut c = QmClassification::default();
    assert_eq!(unsafe { qm_classify(m, p.as_ptr(), &mut c) }, QmStatus::Ok);
    assert_eq!(c.kind, QmEinsteinKind::Generic as i32);
    assert_eq!(c.locally_product, 0);
    assert!(c.w1_residual < 1e-12 && c.con_ae_residual < 1e-12);
    unsafe { qm_metric_free(m) };
}

#[test]
fn christoffel_and_f_layout() {
    let m = metric("exp(x3)", "1");
    let p = [0.1, 0.2, 0.3];
    let mut gamma = [0.0; 27];
    assert_eq!(
        unsafe { qm_christoffel(m, p.as_ptr(), 0, gamma.as_mut_ptr()) },
        QmStatus::Ok
    );
    // Γ³₁₁ = -A₃/(2B)
    assert!((gamma[9 * 2] + 0.3f64.exp() / 2.0).abs() < 1e-12);
    // Γ¹₁₃ = A₃/(2A)
    assert!((gamma[2] - 0.5).abs() < 1e-12);
    let mut f = [0.0; 27];
    assert_eq!(
        unsafe { qm_fundamental_f(m, p.as_ptr(), f.as_mut_ptr()) },
        QmStatus::Ok
    );
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(f[9 * i + 3 * j + k], f[9 * i + 3 * k + j]);
            }
        }
    }
    unsafe { qm_metric_free(m) };
}

#[test]
fn qbasis_and_json() {
    let m = metric("4/(1 + x1^2 + x2^2)^2", "1");
    let p = [0.2, -0.4, 1.0];
    let x = [0.4, 0.9, 0.7];
    let mut q = QmQBasis::default();
    assert_eq!(
        unsafe { qm_qbasis(m, p.as_ptr(), x.as_ptr(), &mut q) },
        QmStatus::Ok
    );
    assert!((q.cos_psi - (2.0 * q.cos_phi - 1.0)).abs() < 1e-12);
    assert!(q.phi > 0.0 && q.psi > q.phi);

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { qm_analyze_json(m, p.as_ptr(), x.as_ptr(), &mut s) },
        QmStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { qm_string_free(s) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(
        v["classification"]["einstein"]["kind"]["kind"],
        "almost_einstein"
    );
    assert!(v["qbasis"]["phi"].as_f64().unwrap() > 0.0);

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { qm_analyze_json(m, p.as_ptr(), ptr::null(), &mut s) },
        QmStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { qm_string_free(s) };
    assert!(!text.contains("\"qbasis\""));
    unsafe { qm_metric_free(m) };
}

#[test]
fn error_codes() {
    let mut m = ptr::null_mut();
    let a = CString::new("cosh(x1").unwrap();
    let b = CString::new("1").unwrap();
    assert_eq!(
        unsafe { qm_metric_new(a.as_ptr(), b.as_ptr(), &mut m) },
        QmStatus::Parse
    );
    assert!(m.is_null());
    assert!(last_error().contains("expected"), "{}", last_error());
    assert_eq!(
        unsafe { qm_metric_new(ptr::null(), b.as_ptr(), &mut m) },
        QmStatus::NullPointer
    );

    let m = metric("x1", "1");
    let mut g = [0.0; 9];
    let bad = [-1.0, 0.0, 0.0];
    assert_eq!(
        unsafe { qm_metric_at(m, bad.as_ptr(), 0, g.as_mut_ptr()) },
        QmStatus::NotPositiveDefinite
    );
    assert!(last_error().contains("not positive definite"));
    let ok = [1.0, 0.0, 0.0];
    assert_eq!(
        unsafe { qm_metric_at(m, ok.as_ptr(), 7, g.as_mut_ptr()) },
        QmStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { qm_metric_at(m, ok.as_ptr(), 0, ptr::null_mut()) },
        QmStatus::NullPointer
    );
    let nan = [f64::NAN, 0.0, 0.0];
    assert_eq!(
        unsafe { qm_metric_at(m, nan.as_ptr(), 0, g.as_mut_ptr()) },
        QmStatus::InvalidArgument
    );
    let mut q = QmQBasis::default();
    let x = [0.0, 0.0, 1.0];
    assert_eq!(
        unsafe { qm_qbasis(m, ok.as_ptr(), x.as_ptr(), &mut q) },
        QmStatus::Degenerate
    );
    unsafe { qm_metric_free(m) };

    let m = metric("log(x1)", "1");
    let p = [-1.0, 0.0, 0.0];
    assert_eq!(
        unsafe { qm_metric_at(m, p.as_ptr(), 0, g.as_mut_ptr()) },
        QmStatus::Domain
    );
    unsafe { qm_metric_free(m) };
    assert_eq!(
        unsafe { qm_metric_at(ptr::null(), ok.as_ptr(), 0, g.as_mut_ptr()) },
        QmStatus::NullPointer
    );
    unsafe { qm_metric_free(ptr::null_mut()) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
