//! The full per-point pipeline: connections, curvature, classification, and
//! every dual-route consistency residual.

use crate::classify::{ClassificationReport, ClassifyTolerances};
use crate::connection::{
    christoffel, christoffel_closed_form, deformation_from_connections, deformation_tensor,
    fundamental_f, fundamental_f_closed_form, metric_compatibility_residual, nabla_q,
    nabla_q_closed_form, theta, theta_closed_form, Christoffel, FundamentalF, ThetaForm,
};
use crate::curvature::{reconstruct_tensor, ricci, riemann, RicciData, Riemann4};
use crate::error::Result;
use crate::structures::{MetricAt, MetricSpec, PStructure, Which};
use crate::tensor::{max_diff3, max_diff4, Tensor3, Vec3};
use crate::tolerances;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub point: Vec3,
    pub gamma: Christoffel,
    pub gamma_tilde: Christoffel,
    /// `T = Γ̃ - Γ`, closed form from `θ`.
    pub deformation: Tensor3,
    pub f: FundamentalF,
    pub theta: ThetaForm,
    /// `[i][k][j] = ∇ᵢQᵏⱼ`
    pub nabla_q: Tensor3,
    pub riemann: Riemann4,
    pub riemann_tilde: Riemann4,
    pub ricci: RicciData,
    pub ricci_tilde: RicciData,
    pub tau: f64,
    pub tau_star: f64,
    pub tau_tilde: f64,
    pub tau_tilde_star: f64,
}

/// Agreement between independent routes to the same quantity. Each entry is a
/// max-norm residual that should be near zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub christoffel_closed_form: f64,
    pub metric_compatibility: f64,
    pub metric_compatibility_tilde: f64,
    pub f_closed_form: f64,
    pub f_symmetry: f64,
    pub theta_closed_form: f64,
    pub deformation_dual_path: f64,
    pub nabla_q_closed_form: f64,
    pub riemann_symmetry: f64,
    pub riemann_tilde_symmetry: f64,
    pub reconstruction: f64,
}

impl IdentityResiduals {
    /// `(name, residual, tolerance)` for each entry.
    pub fn entries(&self) -> Vec<(&'static str, f64, f64)> {
        vec![
            (
                "christoffel_closed_form",
                self.christoffel_closed_form,
                tolerances::CLOSED_FORM,
            ),
            (
                "metric_compatibility",
                self.metric_compatibility,
                tolerances::CLOSED_FORM,
            ),
            (
                "metric_compatibility_tilde",
                self.metric_compatibility_tilde,
                tolerances::CLOSED_FORM,
            ),
            ("f_closed_form", self.f_closed_form, tolerances::CLOSED_FORM),
            ("f_symmetry", self.f_symmetry, tolerances::CLOSED_FORM),
            (
                "theta_closed_form",
                self.theta_closed_form,
                tolerances::CLOSED_FORM,
            ),
            (
                "deformation_dual_path",
                self.deformation_dual_path,
                tolerances::SECOND_DERIVATIVE,
            ),
            (
                "nabla_q_closed_form",
                self.nabla_q_closed_form,
                tolerances::CLOSED_FORM,
            ),
            (
                "riemann_symmetry",
                self.riemann_symmetry,
                tolerances::SECOND_DERIVATIVE,
            ),
            (
                "riemann_tilde_symmetry",
                self.riemann_tilde_symmetry,
                tolerances::SECOND_DERIVATIVE,
            ),
            ("reconstruction", self.reconstruction, tolerances::TOL_FIRST),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointAnalysis {
    pub metric: MetricAt,
    pub curvature: CurvatureReport,
    pub classification: ClassificationReport,
    pub residuals: IdentityResiduals,
}

impl PointAnalysis {
    /// Every identity that failed: `(name, residual, tolerance)`.
    pub fn failures(&self, tol: ClassifyTolerances) -> Vec<(String, f64, f64)> {
        let mut out: Vec<(String, f64, f64)> = self
            .residuals
            .entries()
            .into_iter()
            .filter(|(_, r, t)| !(r <= t))
            .map(|(n, r, t)| (n.to_string(), r, t))
            .collect();
        let c = &self.classification;
        let mut check = |name: &str, r: f64, t: f64| {
            if !(r <= t) {
                out.push((name.to_string(), r, t));
            }
        };
        check("w1", c.w1_residual, tol.first);
        check("con_ae", c.con_ae_residual, tol.curv);
        if let Some(fr) = c.fr_residual {
            check("almost_einstein_curvature", fr, tol.curv);
        }
        out
    }
}

fn f_symmetry_residual(f: &FundamentalF) -> f64 {
    let p = PStructure::DIAG;
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let v = f.f[i][j][k];
                worst = worst
                    .max((v - f.f[i][k][j]).abs())
                    .max((p[j] * p[k] * v + v).abs());
            }
        }
    }
    worst
}

pub fn analyze_metric(m: &MetricAt, tol: ClassifyTolerances) -> PointAnalysis {
    let gamma = christoffel(m, Which::G);
    let gamma_tilde = christoffel(m, Which::Gt);
    let f = fundamental_f(m, &gamma);
    let th = theta(m, &f);
    let deformation = deformation_tensor(m, &th);
    let nq = nabla_q(&gamma);
    let r = riemann(m, Which::G);
    let rt = riemann(m, Which::Gt);
    let rg = ricci(&r, m, Which::G);
    let rgt = ricci(&rt, m, Which::Gt);

    let residuals = IdentityResiduals {
        christoffel_closed_form: max_diff3(&gamma.gamma, &christoffel_closed_form(m).gamma),
        metric_compatibility: metric_compatibility_residual(m, Which::G, &gamma),
        metric_compatibility_tilde: metric_compatibility_residual(m, Which::Gt, &gamma_tilde),
        f_closed_form: max_diff3(&f.f, &fundamental_f_closed_form(m).f),
        f_symmetry: f_symmetry_residual(&f),
        theta_closed_form: {
            let c = theta_closed_form(m).theta;
            (0..3).fold(0.0, |acc: f64, i| acc.max((c[i] - th.theta[i]).abs()))
        },
        deformation_dual_path: max_diff3(
            &deformation,
            &deformation_from_connections(&gamma, &gamma_tilde),
        ),
        nabla_q_closed_form: max_diff3(&nq, &nabla_q_closed_form(m)),
        riemann_symmetry: r.symmetry_residual(),
        riemann_tilde_symmetry: rt.symmetry_residual(),
        reconstruction: max_diff4(&r.r, &reconstruct_tensor(&rg, m)),
    };
    let classification = ClassificationReport::build(m, &f, &th, &r, &rg, &rgt, tol);
    let curvature = CurvatureReport {
        point: m.point,
        gamma,
        gamma_tilde,
        deformation,
        f,
        theta: th,
        nabla_q: nq,
        riemann: r,
        riemann_tilde: rt,
        ricci: rg,
        ricci_tilde: rgt,
        tau: rg.tau,
        tau_star: rg.tau_star,
        tau_tilde: rgt.tau,
        tau_tilde_star: rgt.tau_star,
    };
    PointAnalysis {
        metric: m.clone(),
        curvature,
        classification,
        residuals,
    }
}

pub fn analyze_point(
    spec: &MetricSpec,
    point: Vec3,
    tol: ClassifyTolerances,
) -> Result<PointAnalysis> {
    Ok(analyze_metric(&spec.metric_at(point)?, tol))
}
