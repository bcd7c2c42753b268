//! Seeded randomized checks of the universal identities over a family of
//! admissible metrics.
//!
//! Each coefficient is `c₀ + c₁·f(xᵢ)² + c₂·h(xⱼ)²` with `c₀ > 0`, `c₁, c₂ ≥ 0`
//! and `f, h` drawn from `cosh(k·x + d)`, `exp(k·x + d)` and quadratic
//! polynomials, so every sample is positive everywhere and no rejection is
//! needed.

use crate::analysis::analyze_metric;
use crate::classify::ClassifyTolerances;
use crate::curvature::reconstruct_from_ricci;
use crate::qbasis::{induces_q_basis, QBasisReport};
use crate::structures::{MetricSpec, Which};
use crate::tensor::Vec3;
use crate::tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Template {
    Cosh,
    Exp,
    Poly,
}

fn coef<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    // round to 4 decimals so the printed expressions stay readable
    (rng.gen_range(lo..hi) * 1e4).round() / 1e4
}

/// `f(x_var)` as expression text.
pub fn random_term<R: Rng>(rng: &mut R, var: usize) -> (Template, String) {
    let x = format!("x{}", var + 1);
    match rng.gen_range(0..3) {
        0 => {
            let (k, d) = (coef(rng, -1.0, 1.0), coef(rng, -0.5, 0.5));
            (Template::Cosh, format!("cosh({k}*{x} + {d})"))
        }
        1 => {
            let (k, d) = (coef(rng, -0.7, 0.7), coef(rng, -0.5, 0.5));
            (Template::Exp, format!("exp({k}*{x} + {d})"))
        }
        _ => {
            let (p0, p1, p2) = (
                coef(rng, -1.0, 1.0),
                coef(rng, -1.0, 1.0),
                coef(rng, -0.5, 0.5),
            );
            (Template::Poly, format!("({p0} + {p1}*{x} + {p2}*{x}^2)"))
        }
    }
}

/// `c₀ + c₁·f(xᵢ)² + c₂·h(xⱼ)²` over the given variables.
pub fn random_coefficient<R: Rng>(rng: &mut R, vars: &[usize]) -> String {
    let c0 = coef(rng, 0.5, 2.0);
    let mut s = format!("{c0}");
    for _ in 0..2 {
        let var = vars[rng.gen_range(0..vars.len())];
        let c = coef(rng, 0.0, 1.0);
        let (_, t) = random_term(rng, var);
        write!(s, " + {c}*{t}^2").unwrap();
    }
    s
}

/// A metric from the full family; `A` and `B` may depend on every coordinate.
pub fn random_spec<R: Rng>(rng: &mut R) -> MetricSpec {
    let a = random_coefficient(rng, &[0, 1, 2]);
    let b = random_coefficient(rng, &[0, 1, 2]);
    MetricSpec::parse(&a, &b).expect("generated expressions parse")
}

/// A metric with `A = A(x¹, x²)` and `B = B(x³)`, so that `A₃ = B₁ = B₂ = 0`.
pub fn random_product_spec<R: Rng>(rng: &mut R) -> MetricSpec {
    let a = random_coefficient(rng, &[0, 1]);
    let b = random_coefficient(rng, &[2]);
    MetricSpec::parse(&a, &b).expect("generated expressions parse")
}

pub fn random_point<R: Rng>(rng: &mut R, sample_box: [f64; 2]) -> Vec3 {
    [0; 3].map(|_| rng.gen_range(sample_box[0]..sample_box[1]))
}

pub fn random_vector<R: Rng>(rng: &mut R) -> Vec3 {
    [0; 3].map(|_| rng.gen_range(-1.0..1.0))
}

/// A vector whose `Q`-orbit is a basis, kept away from the degenerate set.
pub fn random_basis_vector<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let x = random_vector(rng);
        if induces_q_basis(&x, 1e-3) {
            return x;
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub spec: MetricSpec,
    pub point: Vec3,
    pub x: Vec3,
    pub tuple: [Vec3; 4],
}

/// Draws `count` samples. The sequence depends only on `seed`.
pub fn samples(seed: u64, count: usize, sample_box: [f64; 2]) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Sample {
            spec: random_spec(&mut rng),
            point: random_point(&mut rng, sample_box),
            x: random_basis_vector(&mut rng),
            tuple: [0; 4].map(|_| random_vector(&mut rng)),
        })
        .collect()
}

/// Largest residual of one identity over a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityMax {
    pub name: String,
    pub max_residual: f64,
    pub tol: f64,
    /// Samples at which the identity applied.
    pub checked: usize,
}

impl IdentityMax {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub count: usize,
    pub sample_box: [f64; 2],
    pub identities: Vec<IdentityMax>,
    /// Sample errors (e.g. overflow), by sample index.
    pub errors: Vec<(usize, String)>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.identities.iter().all(IdentityMax::passed)
    }

    /// Fixed-format text, identical for identical runs.
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "seed {} count {} box [{}, {}]",
            self.seed, self.count, self.sample_box[0], self.sample_box[1]
        )
        .unwrap();
        for id in &self.identities {
            writeln!(
                s,
                "{:<28} max {:.3e}  tol {:.0e}  n {:>5}  {}",
                id.name,
                id.max_residual,
                id.tol,
                id.checked,
                if id.passed() { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        for (i, e) in &self.errors {
            writeln!(s, "sample {i}: error: {e}").unwrap();
        }
        writeln!(
            s,
            "{}",
            if self.passed() {
                "all identities hold"
            } else {
                "FAILED"
            }
        )
        .unwrap();
        s
    }
}

type Residuals = Vec<(&'static str, Option<f64>, f64)>;

/// Every residual at one sample, as `(name, residual if applicable, tol)`.
pub fn sample_residuals(s: &Sample, tol: ClassifyTolerances) -> crate::Result<Residuals> {
    let m = s.spec.metric_at(s.point)?;
    let a = analyze_metric(&m, tol);
    let mut out: Residuals = a
        .residuals
        .entries()
        .into_iter()
        .map(|(n, r, t)| (n, Some(r), t))
        .collect();
    let c = &a.classification;
    out.push(("w1", Some(c.w1_residual), tol.first));
    out.push(("con_ae", Some(c.con_ae_residual), tol.first));
    let [x, y, z, u] = &s.tuple;
    let scale = [x, y, z, u]
        .iter()
        .map(|v| m.inner(v, v, Which::G).sqrt())
        .product::<f64>();
    let rec = reconstruct_from_ricci(&a.curvature.ricci, &m, x, y, z, u);
    let direct = a.curvature.riemann.eval(x, y, z, u);
    out.push((
        "reconstruction_tuple",
        Some((rec - direct).abs() / scale.max(1.0)),
        tol.first,
    ));

    let q = QBasisReport::from_analysis(&a, &s.x)?;
    let id = &q.identities;
    out.push(("orbit_norms", Some(id.norms), tolerances::ALGEBRAIC));
    out.push(("orbit_g_cos", Some(id.g_cos), tolerances::ALGEBRAIC));
    out.push(("orbit_g_cos2", Some(id.g_cos2), tolerances::ALGEBRAIC));
    out.push((
        "cos_psi_relation",
        Some(id.cos_relation),
        tolerances::ALGEBRAIC,
    ));
    out.push((
        "angle_closed_form",
        Some(id.closed_form_angles),
        tolerances::ALGEBRAIC,
    ));
    // φ ∈ (0, π/2) and ψ > φ; reported as 0 when they hold
    let order = if q.phi > 0.0 && q.phi < std::f64::consts::FRAC_PI_2 && q.psi > q.phi {
        0.0
    } else {
        1.0
    };
    out.push(("angle_order", Some(order), 0.0));
    out.push(("con_r", q.con_r_residual, tol.curv));
    Ok(out)
}

/// Runs the identity checks over `count` seeded samples. Samples are
/// evaluated in parallel; the result does not depend on scheduling.
pub fn run(
    seed: u64,
    count: usize,
    sample_box: [f64; 2],
    tol: ClassifyTolerances,
) -> VerifySummary {
    let all = samples(seed, count, sample_box);
    let results: Vec<crate::Result<Residuals>> =
        all.par_iter().map(|s| sample_residuals(s, tol)).collect();
    let mut identities: Vec<IdentityMax> = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rs) => {
                for (name, res, t) in rs {
                    let entry = match identities.iter_mut().find(|e| e.name == name) {
                        Some(e) => e,
                        None => {
                            identities.push(IdentityMax {
                                name: name.to_string(),
                                max_residual: 0.0,
                                tol: t,
                                checked: 0,
                            });
                            identities.last_mut().unwrap()
                        }
                    };
                    if let Some(v) = res {
                        entry.checked += 1;
                        // NaN must surface as a failure
                        if v.is_nan() || v > entry.max_residual {
                            entry.max_residual = if v.is_nan() { f64::INFINITY } else { v };
                        }
                    }
                }
            }
            Err(e) => errors.push((i, e.to_string())),
        }
    }
    VerifySummary {
        seed,
        count,
        sample_box,
        identities,
        errors,
    }
}
