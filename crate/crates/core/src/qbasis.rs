//! Bases generated by the `Q`-orbit `{x, Qx, Q²x, Q³x}` of a tangent vector,
//! their angles, and Ricci and sectional curvatures along them.

use crate::analysis::{analyze_metric, PointAnalysis};
use crate::classify::{ClassifyTolerances, EinsteinKind};
use crate::curvature::{RicciData, Riemann4};
use crate::error::{Error, Result};
use crate::structures::{q_apply, MetricAt, MetricSpec, Which};
use crate::tensor::{det, Vec3};
use crate::tolerances;
use serde::{Deserialize, Serialize};

/// `det[x; Qx; Q²x] = 2 x³((x¹)² + (x²)²)`.
pub fn triple_product(x: &Vec3) -> f64 {
    det(&[*x, q_apply(*x, 1), q_apply(*x, 2)])
}

/// Whether `x` generates a `Q`-basis, i.e. `|x³((x¹)² + (x²)²)| > tol`.
pub fn induces_q_basis(x: &Vec3, tol: f64) -> bool {
    (x[2] * (x[0] * x[0] + x[1] * x[1])).abs() > tol
}

pub fn orbit(x: &Vec3) -> [Vec3; 4] {
    [0, 1, 2, 3].map(|p| q_apply(*x, p))
}

fn require_basis(m: &MetricAt, x: &Vec3) -> Result<()> {
    let scale = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).powf(1.5);
    if induces_q_basis(x, tolerances::DEGENERACY * scale) && m.inner(x, x, Which::G) > 0.0 {
        Ok(())
    } else {
        Err(Error::DegenerateVector { x: *x })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    /// Angle between `x` and `Qx` with respect to `g`.
    pub phi: f64,
    /// Angle between `x` and `Q²x` with respect to `g`.
    pub psi: f64,
    pub cos_phi: f64,
    pub cos_psi: f64,
}

fn cos_angle(m: &MetricAt, x: &Vec3, y: &Vec3) -> f64 {
    m.inner(x, y, Which::G) / (m.inner(x, x, Which::G).sqrt() * m.inner(y, y, Which::G).sqrt())
}

/// `(φ, ψ)` from `cos ∠(x, y) = g(x, y)/(|x||y|)`.
pub fn angles(m: &MetricAt, x: &Vec3) -> Result<Angles> {
    require_basis(m, x)?;
    let cos_phi = cos_angle(m, x, &q_apply(*x, 1));
    let cos_psi = cos_angle(m, x, &q_apply(*x, 2));
    Ok(Angles {
        phi: cos_phi.clamp(-1.0, 1.0).acos(),
        psi: cos_psi.clamp(-1.0, 1.0).acos(),
        cos_phi,
        cos_psi,
    })
}

/// `cos φ = B(x³)²/(A h + B(x³)²)`, `cos ψ = (-A h + B(x³)²)/(A h + B(x³)²)`
/// with `h = (x¹)² + (x²)²`.
pub fn angles_closed_form(m: &MetricAt, x: &Vec3) -> Result<Angles> {
    require_basis(m, x)?;
    let h = x[0] * x[0] + x[1] * x[1];
    let vert = m.b() * x[2] * x[2];
    let norm = m.a() * h + vert;
    let cos_phi = vert / norm;
    let cos_psi = (vert - m.a() * h) / norm;
    Ok(Angles {
        phi: cos_phi.acos(),
        psi: cos_psi.acos(),
        cos_phi,
        cos_psi,
    })
}

/// `r(v) = ρ(v, v)/h(v, v)` with `h` the metric matching the Ricci data.
pub fn ricci_direction(ricci: &RicciData, m: &MetricAt, v: &Vec3, which: Which) -> Result<f64> {
    let den = m.inner(v, v, which);
    let scale = m.inner(v, v, Which::G);
    if !(den.abs() > tolerances::DEGENERACY * scale) || (which == Which::G && den <= 0.0) {
        return Err(Error::NullDirection { v: *v });
    }
    Ok(ricci.eval(v, v) / den)
}

/// `k(x, y) = R(x, y, x, y)/(h(x, x)h(y, y) - h(x, y)²)` for the metric `h`
/// matching `r`.
pub fn sectional(r: &Riemann4, m: &MetricAt, x: &Vec3, y: &Vec3, which: Which) -> Result<f64> {
    let h = |a: &Vec3, b: &Vec3| m.inner(a, b, which);
    let den = h(x, x) * h(y, y) - h(x, y) * h(x, y);
    let gx = m.inner(x, x, Which::G);
    let gy = m.inner(y, y, Which::G);
    if !(den.abs() > tolerances::DEGENERACY * gx * gy) {
        return Err(Error::DegeneratePlane { x: *x, y: *y });
    }
    Ok(r.eval(x, y, x, y) / den)
}

/// Index pairs of the six 2-planes, in report order:
/// `{x,Qx}, {x,Q²x}, {x,Q³x}, {Qx,Q²x}, {Qx,Q³x}, {Q²x,Q³x}`.
pub const PLANES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Sectional curvatures predicted at an almost Einstein point:
/// `(k(x,Qx), k(x,Q²x))`, where
///
/// `k(x,Qx) = -(τ+τ*)/4 + (cos²φ - cos ψ)(τ + 3τ*)/(4(1 - cos²φ))` and
/// `k(x,Q²x) = -(τ+τ*)/4`.
///
/// Evaluated exactly as written, without using `cos ψ = 2cos φ - 1`.
pub fn almost_einstein_sectionals(
    tau: f64,
    tau_star: f64,
    cos_phi: f64,
    cos_psi: f64,
) -> (f64, f64) {
    let base = -(tau + tau_star) / 4.0;
    let c2 = cos_phi * cos_phi;
    let adjacent = base + (c2 - cos_psi) * (tau + 3.0 * tau_star) / (4.0 * (1.0 - c2));
    (adjacent, base)
}

/// Ricci curvature along the orbit predicted at an almost Einstein point:
/// `r = (cos ψ/8)(3τ* + τ) + (3τ + τ*)/8`.
pub fn almost_einstein_ricci_direction(tau: f64, tau_star: f64, cos_psi: f64) -> f64 {
    cos_psi / 8.0 * (3.0 * tau_star + tau) + (3.0 * tau + tau_star) / 8.0
}

/// Residuals of the exact orbit relations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitIdentities {
    /// `g(Qᵖx, Qᵖx) = g(x, x)` for p = 1, 2, 3, relative to `g(x, x)`.
    pub norms: f64,
    /// `g(x,Qx) = g(Qx,Q²x) = g(Q²x,Q³x) = g(x,Q³x) = g(x,x)cos φ` and
    /// `g(x,Q²x) = g(Qx,Q³x) = g(x,x)cos ψ`, relative to `g(x, x)`.
    pub g_cos: f64,
    /// `g̃(x, x) = g(x, x) cos ψ`, relative to `g(x, x)`.
    pub g_cos2: f64,
    /// `cos ψ = 2 cos φ - 1`.
    pub cos_relation: f64,
    /// Closed-form angles against inner-product angles (cosines).
    pub closed_form_angles: f64,
    /// `det[x; Qx; Q²x] = 2x³((x¹)² + (x²)²)`, relative to `|x|³`.
    pub triple_product: f64,
}

pub fn orbit_identities(m: &MetricAt, x: &Vec3) -> Result<OrbitIdentities> {
    let ang = angles(m, x)?;
    let closed = angles_closed_form(m, x)?;
    let o = orbit(x);
    let g = |a: &Vec3, b: &Vec3| m.inner(a, b, Which::G);
    let n = g(x, x);
    let mut norms: f64 = 0.0;
    for v in &o[1..] {
        norms = norms.max((g(v, v) - n).abs() / n);
    }
    let mut g_cos: f64 = 0.0;
    for (i, j) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
        g_cos = g_cos.max((g(&o[i], &o[j]) - n * ang.cos_phi).abs() / n);
    }
    for (i, j) in [(0, 2), (1, 3)] {
        g_cos = g_cos.max((g(&o[i], &o[j]) - n * ang.cos_psi).abs() / n);
    }
    let g_cos2 = (m.inner(x, x, Which::Gt) - n * ang.cos_psi).abs() / n;
    let xn = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).powf(1.5);
    Ok(OrbitIdentities {
        norms,
        g_cos,
        g_cos2,
        cos_relation: (ang.cos_psi - (2.0 * ang.cos_phi - 1.0)).abs(),
        closed_form_angles: (ang.cos_phi - closed.cos_phi)
            .abs()
            .max((ang.cos_psi - closed.cos_psi).abs()),
        triple_product: (triple_product(x) - 2.0 * x[2] * (x[0] * x[0] + x[1] * x[1])).abs() / xn,
    })
}

/// Predictions that hold when the Ricci tensor has the almost Einstein form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlmostEinsteinCheck {
    pub predicted_adjacent: f64,
    pub predicted_opposite: f64,
    pub predicted_ricci_direction: f64,
    /// Largest deviation of the six sectional and four Ricci values from the predictions.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QBasisReport {
    pub x: Vec3,
    pub orbit: [Vec3; 4],
    pub phi: f64,
    pub psi: f64,
    pub cos_phi: f64,
    pub cos_psi: f64,
    /// `r(Qᵖx)` with respect to `g`.
    pub ricci_dirs: [f64; 4],
    /// `r̃(Qᵖx)` with respect to `g̃`; `None` where `g̃(Qᵖx, Qᵖx)` vanishes.
    pub ricci_dirs_tilde: [Option<f64>; 4],
    /// Sectional curvatures of `g` on the planes in [`PLANES`] order.
    pub sectional: [f64; 6],
    /// Sectional curvatures of `g̃`; `None` on planes degenerate for `g̃`.
    pub sectional_tilde: [Option<f64>; 6],
    /// `|r̃(x) - r(x)/cos ψ - c_g/cos ψ - c_g̃|`; `None` when `ψ` is a right angle.
    pub con_r_residual: Option<f64>,
    pub psi_right_angle: bool,
    pub identities: OrbitIdentities,
    pub almost_einstein: Option<AlmostEinsteinCheck>,
}

impl QBasisReport {
    pub fn from_analysis(a: &PointAnalysis, x: &Vec3) -> Result<Self> {
        let m = &a.metric;
        let ang = angles(m, x)?;
        let identities = orbit_identities(m, x)?;
        let o = orbit(x);
        let c = &a.curvature;
        let mut ricci_dirs = [0.0; 4];
        let mut ricci_dirs_tilde = [None; 4];
        for (p, v) in o.iter().enumerate() {
            ricci_dirs[p] = ricci_direction(&c.ricci, m, v, Which::G)?;
            ricci_dirs_tilde[p] = ricci_direction(&c.ricci_tilde, m, v, Which::Gt).ok();
        }
        let mut sec = [0.0; 6];
        let mut sec_t = [None; 6];
        for (n, (i, j)) in PLANES.iter().enumerate() {
            sec[n] = sectional(&c.riemann, m, &o[*i], &o[*j], Which::G)?;
            sec_t[n] = sectional(&c.riemann_tilde, m, &o[*i], &o[*j], Which::Gt).ok();
        }
        let psi_right_angle = !(ang.cos_psi.abs() > tolerances::COS_PSI_MIN);
        let (cg, cgt) = a.classification.con_ae_coefficients;
        let con_r_residual = match (psi_right_angle, ricci_dirs_tilde[0]) {
            (false, Some(rt)) => {
                let cp = ang.cos_psi;
                Some((rt - ricci_dirs[0] / cp - cg / cp - cgt).abs())
            }
            _ => None,
        };
        let almost_einstein = match a.classification.einstein.kind {
            EinsteinKind::Generic => None,
            _ => {
                let (tau, ts) = (c.tau, c.tau_star);
                let (adj, opp) = almost_einstein_sectionals(tau, ts, ang.cos_phi, ang.cos_psi);
                let rd = almost_einstein_ricci_direction(tau, ts, ang.cos_psi);
                let mut residual: f64 = 0.0;
                for (n, (i, j)) in PLANES.iter().enumerate() {
                    let opposite = (j - i) == 2;
                    let want = if opposite { opp } else { adj };
                    residual = residual.max((sec[n] - want).abs());
                }
                for r in ricci_dirs {
                    residual = residual.max((r - rd).abs());
                }
                Some(AlmostEinsteinCheck {
                    predicted_adjacent: adj,
                    predicted_opposite: opp,
                    predicted_ricci_direction: rd,
                    residual,
                })
            }
        };
        Ok(QBasisReport {
            x: *x,
            orbit: o,
            phi: ang.phi,
            psi: ang.psi,
            cos_phi: ang.cos_phi,
            cos_psi: ang.cos_psi,
            ricci_dirs,
            ricci_dirs_tilde,
            sectional: sec,
            sectional_tilde: sec_t,
            con_r_residual,
            psi_right_angle,
            identities,
            almost_einstein,
        })
    }
}

pub fn q_basis_report(
    spec: &MetricSpec,
    point: Vec3,
    x: &Vec3,
    tol: ClassifyTolerances,
) -> Result<QBasisReport> {
    let m = spec.metric_at(point)?;
    // reject before running the curvature pipeline
    require_basis(&m, x)?;
    QBasisReport::from_analysis(&analyze_metric(&m, tol), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn flat() -> MetricAt {
        MetricSpec::flat().metric_at([0.0; 3]).unwrap()
    }

    #[test]
    fn basis_condition() {
        assert!(induces_q_basis(&[1.0, 0.0, 1.0], 1e-12));
        assert!(!induces_q_basis(&[0.0, 0.0, 1.0], 1e-12));
        assert!(!induces_q_basis(&[1.0, 1.0, 0.0], 1e-12));
        let x = [0.3, -1.2, 0.7];
        assert!((triple_product(&x) - 2.0 * 0.7 * (0.09 + 1.44)).abs() < 1e-12);
    }

    #[test]
    fn flat_angles() {
        let a = angles(&flat(), &[1.0, 0.0, 1.0]).unwrap();
        assert!((a.phi - FRAC_PI_3).abs() < 1e-12);
        assert!((a.psi - FRAC_PI_2).abs() < 1e-12);
        let b = angles(&flat(), &[1.0, 1.0, 2f64.sqrt()]).unwrap();
        assert!((b.cos_phi - 0.5).abs() < 1e-12);
        assert!(b.cos_psi.abs() < 1e-12);
        let c = angles_closed_form(&flat(), &[1.0, 0.0, 1.0]).unwrap();
        assert!((c.cos_phi - 0.5).abs() < 1e-15 && c.cos_psi.abs() < 1e-15);
    }

    #[test]
    fn degenerate_vector_rejected() {
        assert!(matches!(
            angles(&flat(), &[0.0, 0.0, 1.0]),
            Err(Error::DegenerateVector { .. })
        ));
        let err = q_basis_report(
            &MetricSpec::flat(),
            [0.0; 3],
            &[0.0, 0.0, 1.0],
            Default::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("x3*((x1)^2 + (x2)^2) != 0"));
    }

    #[test]
    fn flat_report() {
        let rep = q_basis_report(
            &MetricSpec::flat(),
            [0.5, 0.5, 0.5],
            &[1.0, 0.0, 1.0],
            Default::default(),
        )
        .unwrap();
        assert!(rep.sectional.iter().all(|k| *k == 0.0));
        assert!(rep.ricci_dirs.iter().all(|k| *k == 0.0));
        assert!((rep.phi - FRAC_PI_3).abs() < 1e-12);
        assert!((rep.psi - FRAC_PI_2).abs() < 1e-12);
        assert!(rep.psi_right_angle);
        assert_eq!(rep.con_r_residual, None);
        let ae = rep.almost_einstein.unwrap();
        assert_eq!(ae.residual, 0.0);
    }

    #[test]
    fn sectional_is_plane_invariant() {
        let spec = MetricSpec::parse("1 + x1^2", "2 + x2*x3").unwrap();
        let a = analyze_metric(
            &spec.metric_at([0.3, 0.4, 0.5]).unwrap(),
            Default::default(),
        );
        let (x, y) = ([1.0, 0.2, -0.3], [0.1, 1.1, 0.6]);
        let k = sectional(&a.curvature.riemann, &a.metric, &x, &y, Which::G).unwrap();
        // unimodular change of basis: (x, y) -> (2x + y, 3x + 2y)
        let x2 = [0, 1, 2].map(|i| 2.0 * x[i] + y[i]);
        let y2 = [0, 1, 2].map(|i| 3.0 * x[i] + 2.0 * y[i]);
        let k2 = sectional(&a.curvature.riemann, &a.metric, &x2, &y2, Which::G).unwrap();
        assert!((k - k2).abs() < 1e-10);
        assert!(matches!(
            sectional(&a.curvature.riemann, &a.metric, &x, &x, Which::G),
            Err(Error::DegeneratePlane { .. })
        ));
    }

    #[test]
    fn null_direction_for_associated_metric() {
        let m = flat();
        let rd = crate::curvature::RicciData::from_rho([[0.0; 3]; 3], &m, Which::Gt);
        // g̃(v, v) = -1 + 1 = 0
        assert!(matches!(
            ricci_direction(&rd, &m, &[1.0, 0.0, 1.0], Which::Gt),
            Err(Error::NullDirection { .. })
        ));
    }

    #[test]
    fn einstein_sectional_prediction_collapses() {
        // with τ* = -τ/3 both predictions equal -τ/6
        let tau = 3.3;
        let (adj, opp) = almost_einstein_sectionals(tau, -tau / 3.0, 0.4, 2.0 * 0.4 - 1.0);
        assert!((adj + tau / 6.0).abs() < 1e-12);
        assert!((opp + tau / 6.0).abs() < 1e-12);
        assert!((almost_einstein_ricci_direction(tau, -tau / 3.0, -0.2) - tau / 3.0).abs() < 1e-12);
    }
}
