//! Classification predicates and identity residuals at a point.

use crate::connection::{FundamentalF, ThetaForm};
use crate::curvature::{almost_einstein_tensor, RicciData, Riemann4};
use crate::structures::MetricAt;
use crate::tensor::{max_abs_mat, max_diff4, Vec3};
use serde::{Deserialize, Serialize};

/// Largest deviation of `F` from its locally-conformal-product form
///
/// `Fᵢⱼₖ = ⅛(gᵢₖ(3θⱼ - θ̃ⱼ) + gᵢⱼ(3θₖ - θ̃ₖ) - g̃ᵢₖ(3θ̃ⱼ - θⱼ) - g̃ᵢⱼ(3θ̃ₖ - θₖ))`.
///
/// The coefficients come from eigenvalue multiplicities 1 and 2 of `P` in
/// dimension 3.
pub fn check_w1(f: &FundamentalF, theta: &ThetaForm, m: &MetricAt) -> f64 {
    w1_residual_with(&f.f, &theta.theta, &theta.theta_tilde, &m.g, &m.gt)
}

/// [`check_w1`] on raw component arrays, for checking values from other sources.
pub fn w1_residual_with(
    f: &crate::tensor::Tensor3,
    theta: &Vec3,
    theta_tilde: &Vec3,
    g: &crate::tensor::Mat3,
    gt: &crate::tensor::Mat3,
) -> f64 {
    let (th, tt) = (theta, theta_tilde);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let rhs = (g[i][k] * (3.0 * th[j] - tt[j]) + g[i][j] * (3.0 * th[k] - tt[k])
                    - gt[i][k] * (3.0 * tt[j] - th[j])
                    - gt[i][j] * (3.0 * tt[k] - th[k]))
                    / 8.0;
                worst = worst.max((f[i][j][k] - rhs).abs());
            }
        }
    }
    worst
}

/// `P` is parallel at the point iff `A₃ = B₁ = B₂ = 0` there.
pub fn is_locally_product(m: &MetricAt, tol: f64) -> bool {
    m.product_obstruction().iter().all(|v| v.abs() < tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EinsteinKind {
    Einstein { alpha: f64 },
    AlmostEinstein { alpha: f64, beta: f64 },
    Generic,
}

impl EinsteinKind {
    pub fn is_generic(&self) -> bool {
        matches!(self, EinsteinKind::Generic)
    }
}

impl std::fmt::Display for EinsteinKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EinsteinKind::Einstein { alpha } => write!(f, "Einstein(alpha = {alpha})"),
            EinsteinKind::AlmostEinstein { alpha, beta } => {
                write!(f, "AlmostEinstein(alpha = {alpha}, beta = {beta})")
            }
            EinsteinKind::Generic => f.write_str("Generic"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EinsteinFit {
    pub kind: EinsteinKind,
    /// Best-fit `(α, β)` in `ρ ≈ αg + βg̃`, whether or not the fit is accepted.
    pub alpha: f64,
    pub beta: f64,
    pub residual: f64,
}

/// Fits `ρ = αg + βg̃` using the diagonal equations
/// `ρ₁₁ = ρ₂₂ = (α - β)A`, `ρ₃₃ = (α + β)B`. Off-diagonal entries only count
/// toward the residual.
pub fn einstein_classify(ricci: &RicciData, m: &MetricAt, tol: f64) -> EinsteinFit {
    let rho = &ricci.rho;
    let (a, b) = (m.a(), m.b());
    let horizontal = (rho[0][0] + rho[1][1]) / (2.0 * a);
    let vertical = rho[2][2] / b;
    let alpha = (horizontal + vertical) / 2.0;
    let beta = (vertical - horizontal) / 2.0;
    let mut residual = (rho[0][0] - horizontal * a)
        .abs()
        .max((rho[1][1] - horizontal * a).abs());
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                residual = residual.max(rho[i][j].abs());
            }
        }
    }
    let kind = if residual < tol * (1.0 + max_abs_mat(rho)) {
        if beta.abs() < tol {
            EinsteinKind::Einstein { alpha }
        } else {
            EinsteinKind::AlmostEinstein { alpha, beta }
        }
    } else {
        EinsteinKind::Generic
    };
    EinsteinFit {
        kind,
        alpha,
        beta,
        residual,
    }
}

/// `|τ* + τ/3|` at an Einstein point; `None` otherwise.
pub fn check_einstein_scalar_relation(tau: f64, tau_star: f64, kind: &EinsteinKind) -> Option<f64> {
    match kind {
        EinsteinKind::Einstein { .. } => Some((tau_star + tau / 3.0).abs()),
        _ => None,
    }
}

/// The two scalar coefficients in `ρ̃ = ρ + c_g g + c_g̃ g̃`:
/// `c_g = ⅛(3τ̃* + τ̃ - 3τ - τ*)`, `c_g̃ = ⅛(3τ̃ + τ̃* - 3τ* - τ)`.
pub fn con_ae_coefficients(ricci_g: &RicciData, ricci_gt: &RicciData) -> (f64, f64) {
    let (tau, tau_s) = (ricci_g.tau, ricci_g.tau_star);
    let (taut, taut_s) = (ricci_gt.tau, ricci_gt.tau_star);
    (
        (3.0 * taut_s + taut - 3.0 * tau - tau_s) / 8.0,
        (3.0 * taut + taut_s - 3.0 * tau_s - tau) / 8.0,
    )
}

/// Max-norm residual of `ρ̃ = ρ + c_g g + c_g̃ g̃`.
pub fn check_con_ae(ricci_g: &RicciData, ricci_gt: &RicciData, m: &MetricAt) -> f64 {
    let (cg, cgt) = con_ae_coefficients(ricci_g, ricci_gt);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let rhs = ricci_g.rho[i][j] + cg * m.g[i][j] + cgt * m.gt[i][j];
            worst = worst.max((ricci_gt.rho[i][j] - rhs).abs());
        }
    }
    worst
}

/// Largest deviation of `R` from `((τ+τ*)/4)π₁ + ((3τ*+τ)/8)π₂` over coordinate components.
pub fn almost_einstein_r_residual(r: &Riemann4, ricci: &RicciData, m: &MetricAt) -> f64 {
    max_diff4(&r.r, &almost_einstein_tensor(ricci.tau, ricci.tau_star, m))
}

/// Tolerances for the pointwise classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyTolerances {
    /// First-derivative identities and the locally-product test.
    pub first: f64,
    /// Curvature-level identities and the Einstein fit.
    pub curv: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        ClassifyTolerances {
            first: crate::tolerances::TOL_FIRST,
            curv: crate::tolerances::TOL_CURV,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub point: Vec3,
    pub w1_residual: f64,
    pub is_locally_product: bool,
    /// `(A₃, B₁, B₂)`
    pub product_obstruction: Vec3,
    pub einstein: EinsteinFit,
    pub einstein_scalar_residual: Option<f64>,
    pub con_ae_residual: f64,
    pub con_ae_coefficients: (f64, f64),
    pub fr_residual: Option<f64>,
}

impl ClassificationReport {
    pub fn build(
        m: &MetricAt,
        f: &FundamentalF,
        theta: &ThetaForm,
        r: &Riemann4,
        ricci_g: &RicciData,
        ricci_gt: &RicciData,
        tol: ClassifyTolerances,
    ) -> Self {
        let einstein = einstein_classify(ricci_g, m, tol.curv);
        let fr_residual =
            (!einstein.kind.is_generic()).then(|| almost_einstein_r_residual(r, ricci_g, m));
        ClassificationReport {
            point: m.point,
            w1_residual: check_w1(f, theta, m),
            is_locally_product: is_locally_product(m, tol.first),
            product_obstruction: m.product_obstruction(),
            einstein,
            einstein_scalar_residual: check_einstein_scalar_relation(
                ricci_g.tau,
                ricci_g.tau_star,
                &einstein.kind,
            ),
            con_ae_residual: check_con_ae(ricci_g, ricci_gt, m),
            con_ae_coefficients: con_ae_coefficients(ricci_g, ricci_gt),
            fr_residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{christoffel, fundamental_f, theta};
    use crate::curvature::{ricci, riemann};
    use crate::structures::{MetricSpec, Which};

    fn at(a: &str, b: &str, p: Vec3) -> MetricAt {
        MetricSpec::parse(a, b).unwrap().metric_at(p).unwrap()
    }

    fn full(m: &MetricAt) -> ClassificationReport {
        let g = christoffel(m, Which::G);
        let f = fundamental_f(m, &g);
        let th = theta(m, &f);
        let r = riemann(m, Which::G);
        let rg = ricci(&r, m, Which::G);
        let rgt = ricci(&riemann(m, Which::Gt), m, Which::Gt);
        ClassificationReport::build(m, &f, &th, &r, &rg, &rgt, ClassifyTolerances::default())
    }

    #[test]
    fn flat_is_einstein_zero() {
        let rep = full(&at("1", "1", [0.0; 3]));
        assert_eq!(rep.w1_residual, 0.0);
        assert_eq!(rep.con_ae_residual, 0.0);
        assert!(rep.is_locally_product);
        assert_eq!(rep.einstein.kind, EinsteinKind::Einstein { alpha: 0.0 });
        assert_eq!(rep.einstein_scalar_residual, Some(0.0));
        assert_eq!(rep.fr_residual, Some(0.0));
    }

    #[test]
    fn catenoid_is_generic_and_not_product() {
        let rep = full(&at("cosh(x1)^2", "x1^2", [1.0, 0.3, 0.7]));
        assert!(rep.w1_residual < 1e-9);
        assert!(rep.con_ae_residual < 1e-8);
        assert!(!rep.is_locally_product);
        assert!(rep.einstein.kind.is_generic());
        assert_eq!(rep.einstein_scalar_residual, None);
        assert_eq!(rep.fr_residual, None);
    }

    #[test]
    fn locally_product_examples() {
        for p in [[0.3, -0.2, 1.0], [-1.0, 2.0, 0.0]] {
            assert!(is_locally_product(&at("1+x1^2+x2^2", "exp(x3)", p), 1e-10));
        }
        assert!(!is_locally_product(&at("exp(x3)", "1", [0.0; 3]), 1e-10));
    }

    #[test]
    fn einstein_scalar_relation_example() {
        let kind = EinsteinKind::Einstein { alpha: 2.0 };
        assert_eq!(check_einstein_scalar_relation(6.0, -2.0, &kind), Some(0.0));
        assert_eq!(
            check_einstein_scalar_relation(6.0, -2.0, &EinsteinKind::Generic),
            None
        );
    }

    #[test]
    fn fit_recovers_almost_einstein_coefficients() {
        let m = at("2 + x1^2", "0.5 + x3^2", [0.7, 0.1, -0.4]);
        let (alpha, beta) = (0.37, -1.25);
        let mut rho = [[0.0; 3]; 3];
        for i in 0..3 {
            rho[i][i] = alpha * m.g[i][i] + beta * m.gt[i][i];
        }
        let rd = RicciData::from_rho(rho, &m, Which::G);
        // the traces reproduce (α, β) through the almost-Einstein formulas
        assert!(((3.0 * rd.tau + rd.tau_star) / 8.0 - alpha).abs() < 1e-12);
        assert!(((3.0 * rd.tau_star + rd.tau) / 8.0 - beta).abs() < 1e-12);
        let fit = einstein_classify(&rd, &m, 1e-7);
        match fit.kind {
            EinsteinKind::AlmostEinstein { alpha: a, beta: b } => {
                assert!((a - alpha).abs() < 1e-12);
                assert!((b - beta).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        rho[0][1] = 1e-3;
        rho[1][0] = 1e-3;
        let rd = RicciData::from_rho(rho, &m, Which::G);
        assert!(einstein_classify(&rd, &m, 1e-7).kind.is_generic());
    }
}
