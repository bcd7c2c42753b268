//! Levi-Civita connections of `g` and `g̃`, the fundamental tensor
//! `F = ∇g̃`, its trace form `θ`, the deformation tensor `T = Γ̃ - Γ`, and `∇Q`.
//!
//! Every quantity with a known closed form in `A`, `B` and their first
//! derivatives is available twice: from the defining formula and from the
//! closed form. Tests compare the two.

use crate::structures::{MetricAt, PStructure, QStructure, Which};
use crate::tensor::{Mat3, Tensor3, Tensor4, Vec3, ZERO3, ZERO4};
use serde::{Deserialize, Serialize};

/// `gamma[k][i][j] = Γᵏᵢⱼ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Christoffel {
    pub gamma: Tensor3,
}

/// `Γᵏᵢⱼ = ½ gᵏᵃ(∂ᵢgₐⱼ + ∂ⱼgₐᵢ - ∂ₐgᵢⱼ)` for the chosen metric.
pub fn christoffel(m: &MetricAt, which: Which) -> Christoffel {
    let dg = m.dmetric(which);
    let inv = m.inverse(which);
    let mut gamma = ZERO3;
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                gamma[k][i][j] = 0.5
                    * (0..3)
                        .map(|a| inv[k][a] * (dg[i][a][j] + dg[j][a][i] - dg[a][i][j]))
                        .sum::<f64>();
            }
        }
    }
    Christoffel { gamma }
}

/// Closed-form Christoffel symbols of `g = diag(A, A, B)`.
pub fn christoffel_closed_form(m: &MetricAt) -> Christoffel {
    let (a, b) = (m.a(), m.b());
    let [a1, a2, a3] = m.jet_a.grad;
    let [b1, b2, b3] = m.jet_b.grad;
    let mut gm = ZERO3;
    let mut set = |k: usize, i: usize, j: usize, v: f64| {
        gm[k - 1][i - 1][j - 1] = v;
        gm[k - 1][j - 1][i - 1] = v;
    };
    set(1, 1, 1, a1 / (2.0 * a));
    set(2, 1, 1, -a2 / (2.0 * a));
    set(3, 1, 1, -a3 / (2.0 * b));
    set(1, 1, 2, a2 / (2.0 * a));
    set(2, 1, 2, a1 / (2.0 * a));
    set(3, 1, 2, 0.0);
    set(1, 2, 2, -a1 / (2.0 * a));
    set(2, 2, 2, a2 / (2.0 * a));
    set(3, 2, 2, -a3 / (2.0 * b));
    set(1, 1, 3, a3 / (2.0 * a));
    set(2, 1, 3, 0.0);
    set(3, 1, 3, b1 / (2.0 * b));
    set(1, 3, 3, -b1 / (2.0 * a));
    set(2, 3, 3, -b2 / (2.0 * a));
    set(3, 3, 3, b3 / (2.0 * b));
    set(1, 2, 3, 0.0);
    set(2, 2, 3, a3 / (2.0 * a));
    set(3, 2, 3, b2 / (2.0 * b));
    Christoffel { gamma: gm }
}

/// `d[l][k][i][j] = ∂ₗΓᵏᵢⱼ`, using `∂g⁻¹ = -g⁻¹(∂g)g⁻¹` and the metric Hessian.
pub fn christoffel_derivative(m: &MetricAt, which: Which) -> Tensor4 {
    let dg = m.dmetric(which);
    let ddg = m.ddmetric(which);
    let inv = m.inverse(which);
    // dinv[l][k][a] = ∂ₗ gᵏᵃ
    let mut dinv = ZERO3;
    for l in 0..3 {
        for k in 0..3 {
            for a in 0..3 {
                let mut s = 0.0;
                for b in 0..3 {
                    for c in 0..3 {
                        s -= inv[k][b] * dg[l][b][c] * inv[c][a];
                    }
                }
                dinv[l][k][a] = s;
            }
        }
    }
    let mut out = ZERO4;
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = 0.0;
                    for a in 0..3 {
                        let first = dg[i][a][j] + dg[j][a][i] - dg[a][i][j];
                        let second = ddg[l][i][a][j] + ddg[l][j][a][i] - ddg[l][a][i][j];
                        s += dinv[l][k][a] * first + inv[k][a] * second;
                    }
                    out[l][k][i][j] = 0.5 * s;
                }
            }
        }
    }
    out
}

/// Largest `|∇ᵢgⱼₖ|` of the chosen metric under the given connection.
pub fn metric_compatibility_residual(m: &MetricAt, which: Which, c: &Christoffel) -> f64 {
    let g = m.metric(which);
    let dg = m.dmetric(which);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = dg[i][j][k];
                for a in 0..3 {
                    v -= c.gamma[a][i][j] * g[a][k] + c.gamma[a][i][k] * g[a][j];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

/// `f[i][j][k] = Fᵢⱼₖ = F(eᵢ, eⱼ, eₖ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalF {
    pub f: Tensor3,
}

impl FundamentalF {
    pub fn eval(&self, x: &Vec3, y: &Vec3, z: &Vec3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s += self.f[i][j][k] * x[i] * y[j] * z[k];
                }
            }
        }
        s
    }
}

/// `Fᵢⱼₖ = ∇ᵢg̃ⱼₖ = ∂ᵢg̃ⱼₖ - Γᵃᵢⱼg̃ₐₖ - Γᵃᵢₖg̃ₐⱼ` with `Γ` the connection of `g`.
pub fn fundamental_f(m: &MetricAt, gamma_g: &Christoffel) -> FundamentalF {
    let gt = &m.gt;
    let dgt = m.dmetric(Which::Gt);
    let gm = &gamma_g.gamma;
    let mut f = ZERO3;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = dgt[i][j][k];
                for a in 0..3 {
                    v -= gm[a][i][j] * gt[a][k] + gm[a][i][k] * gt[a][j];
                }
                f[i][j][k] = v;
            }
        }
    }
    FundamentalF { f }
}

/// Nonzero components `F₁₁₃ = F₂₂₃ = A₃`, `F₃₁₃ = -B₁`, `F₃₂₃ = -B₂` and
/// their partners under `Fᵢⱼₖ = Fᵢₖⱼ`.
pub fn fundamental_f_closed_form(m: &MetricAt) -> FundamentalF {
    let [a3, b1, b2] = m.product_obstruction();
    let mut f = ZERO3;
    let mut set = |i: usize, j: usize, k: usize, v: f64| {
        f[i - 1][j - 1][k - 1] = v;
        f[i - 1][k - 1][j - 1] = v;
    };
    set(1, 1, 3, a3);
    set(2, 2, 3, a3);
    set(3, 1, 3, -b1);
    set(3, 2, 3, -b2);
    FundamentalF { f }
}

/// The trace form `θ` of `F`, its image `θ̃ᵢ = Pᵢᵃθₐ`, and both raised with `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaForm {
    pub theta: Vec3,
    pub theta_tilde: Vec3,
    pub theta_up: Vec3,
    pub theta_tilde_up: Vec3,
}

impl ThetaForm {
    pub fn from_lower(m: &MetricAt, theta: Vec3) -> Self {
        let p = PStructure::DIAG;
        let theta_tilde = [p[0] * theta[0], p[1] * theta[1], p[2] * theta[2]];
        ThetaForm {
            theta,
            theta_tilde,
            theta_up: m.raise(&theta, Which::G),
            theta_tilde_up: m.raise(&theta_tilde, Which::G),
        }
    }
}

/// `θₖ = gⁱʲFᵢⱼₖ`.
pub fn theta(m: &MetricAt, f: &FundamentalF) -> ThetaForm {
    let mut th = [0.0; 3];
    for (k, t) in th.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                *t += m.g_inv[i][j] * f.f[i][j][k];
            }
        }
    }
    ThetaForm::from_lower(m, th)
}

/// `θ = (-B₁/B, -B₂/B, 2A₃/A)`.
pub fn theta_closed_form(m: &MetricAt) -> ThetaForm {
    let [a3, b1, b2] = m.product_obstruction();
    ThetaForm::from_lower(m, [-b1 / m.b(), -b2 / m.b(), 2.0 * a3 / m.a()])
}

/// `T = Γ̃ - Γ` in closed form from `θ`:
///
/// `Tᵏᵢⱼ = ⅛[2(gᵢⱼ + g̃ᵢⱼ)(θ̃ᵏ - θᵏ) + (gᵢⱼ - g̃ᵢⱼ)(θᵏ + θ̃ᵏ)]`,
///
/// indices raised with `g`. Nonzero components are `T¹₃₃ = B₁/A`,
/// `T²₃₃ = B₂/A`, `T³₁₁ = T³₂₂ = A₃/B`.
pub fn deformation_tensor(m: &MetricAt, theta: &ThetaForm) -> Tensor3 {
    let mut t = ZERO3;
    for k in 0..3 {
        let diff = theta.theta_tilde_up[k] - theta.theta_up[k];
        let sum = theta.theta_up[k] + theta.theta_tilde_up[k];
        for i in 0..3 {
            for j in 0..3 {
                let plus = m.g[i][j] + m.gt[i][j];
                let minus = m.g[i][j] - m.gt[i][j];
                t[k][i][j] = (2.0 * plus * diff + minus * sum) / 8.0;
            }
        }
    }
    t
}

/// `Γ̃ - Γ` componentwise.
pub fn deformation_from_connections(gamma_g: &Christoffel, gamma_gt: &Christoffel) -> Tensor3 {
    let mut t = ZERO3;
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                t[k][i][j] = gamma_gt.gamma[k][i][j] - gamma_g.gamma[k][i][j];
            }
        }
    }
    t
}

/// `out[i][k][j] = ∇ᵢSᵏⱼ` for a constant (1,1)-tensor `S` with `S[k][j] = Sᵏⱼ`.
pub fn nabla_structure(gamma_g: &Christoffel, s: &Mat3) -> Tensor3 {
    let gm = &gamma_g.gamma;
    let mut out = ZERO3;
    for i in 0..3 {
        for k in 0..3 {
            for j in 0..3 {
                let mut v = 0.0;
                for a in 0..3 {
                    v += gm[k][i][a] * s[a][j] - gm[a][i][j] * s[k][a];
                }
                out[i][k][j] = v;
            }
        }
    }
    out
}

/// `∇ᵢQᵏⱼ = ∂ᵢQᵏⱼ + ΓᵏᵢₐQᵃⱼ - ΓᵃᵢⱼQᵏₐ`, indexed `[i][k][j]`.
pub fn nabla_q(gamma_g: &Christoffel) -> Tensor3 {
    nabla_structure(gamma_g, &QStructure::MATRIX)
}

/// The twelve nonzero components of `∇Q`, with `Qᵏⱼ` the `k`-th component of
/// `Q eⱼ` (so `Q e₁ = e₂`). Indexed `[i][k][j]`.
pub fn nabla_q_closed_form(m: &MetricAt) -> Tensor3 {
    let (a, b) = (m.a(), m.b());
    let a3 = m.jet_a.grad[2];
    let [b1, b2, _] = m.jet_b.grad;
    let mut t = ZERO3;
    let mut set = |i: usize, k: usize, j: usize, v: f64| t[i - 1][k - 1][j - 1] = v;
    set(1, 1, 3, a3 / (2.0 * a));
    set(1, 2, 3, -a3 / (2.0 * a));
    set(1, 3, 1, a3 / (2.0 * b));
    set(1, 3, 2, a3 / (2.0 * b));
    set(2, 1, 3, a3 / (2.0 * a));
    set(2, 2, 3, a3 / (2.0 * a));
    set(2, 3, 1, -a3 / (2.0 * b));
    set(2, 3, 2, a3 / (2.0 * b));
    set(3, 1, 3, -(b1 + b2) / (2.0 * a));
    set(3, 2, 3, (b1 - b2) / (2.0 * a));
    set(3, 3, 1, (b2 - b1) / (2.0 * b));
    set(3, 3, 2, -(b1 + b2) / (2.0 * b));
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::MetricSpec;
    use crate::tensor::{max_abs3, max_diff3};

    fn at(a: &str, b: &str, p: Vec3) -> MetricAt {
        MetricSpec::parse(a, b).unwrap().metric_at(p).unwrap()
    }

    #[test]
    fn flat_connection_vanishes() {
        let m = at("1", "1", [0.3, 0.2, 0.1]);
        let g = christoffel(&m, Which::G);
        assert_eq!(max_abs3(&g.gamma), 0.0);
        let f = fundamental_f(&m, &g);
        assert_eq!(max_abs3(&f.f), 0.0);
        let th = theta(&m, &f);
        assert_eq!(th.theta, [0.0; 3]);
        assert_eq!(max_abs3(&deformation_tensor(&m, &th)), 0.0);
        assert_eq!(max_abs3(&nabla_q(&g)), 0.0);
    }

    #[test]
    fn catenoid_christoffel_values() {
        let m = at("cosh(x1)^2", "x1^2", [1.0, 0.3, 0.7]);
        let g = christoffel(&m, Which::G);
        assert!((g.gamma[0][0][0] - 1f64.tanh()).abs() < 1e-12);
        assert!((g.gamma[0][0][0] - 0.761594).abs() < 1e-6);
        assert!((g.gamma[2][0][2] - 1.0).abs() < 1e-12);
        assert!((g.gamma[0][2][2] + 1.0 / 1f64.cosh().powi(2)).abs() < 1e-12);
        assert!((g.gamma[0][2][2] + 0.419974).abs() < 1e-6);
    }

    #[test]
    fn exponential_horizontal_factor() {
        let m = at("exp(x3)", "1", [0.2, -0.4, 0.9]);
        let g = christoffel(&m, Which::G);
        assert!((g.gamma[0][0][2] - 0.5).abs() < 1e-14);
        assert!((g.gamma[2][0][0] + 0.9f64.exp() / 2.0).abs() < 1e-14);

        let origin = at("exp(x3)", "1", [0.0; 3]);
        let go = christoffel(&origin, Which::G);
        let f = fundamental_f(&origin, &go);
        assert!((f.f[0][0][2] - 1.0).abs() < 1e-14);
        assert!((f.f[1][1][2] - 1.0).abs() < 1e-14);
        assert_eq!(f.f[2][0][2], 0.0);
        assert_eq!(f.f[2][1][2], 0.0);
        let th = theta(&origin, &f);
        assert!((th.theta[2] - 2.0).abs() < 1e-14);

        let nq = nabla_q(&go);
        assert!((nq[0][2][0] - 0.5).abs() < 1e-14);
        assert!((nq[0][0][2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn catenoid_f_theta_and_nabla_q() {
        let m = at("cosh(x1)^2", "x1^2", [1.0, 0.3, 0.7]);
        let g = christoffel(&m, Which::G);
        let f = fundamental_f(&m, &g);
        assert!((f.f[2][0][2] + 2.0).abs() < 1e-12);
        let th = theta(&m, &f);
        assert!((th.theta[0] + 2.0).abs() < 1e-12);
        assert!(th.theta[1].abs() < 1e-12 && th.theta[2].abs() < 1e-12);
        // ∇₃Q²₃ = (B₁ - B₂)/(2A) = u/cosh²u
        let nq = nabla_q(&g);
        assert!((nq[2][1][2] - 1.0 / 1f64.cosh().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn parallel_case_has_no_deformation() {
        let m = at("1 + x2^2", "exp(x3)", [0.4, 0.9, -0.3]);
        let g = christoffel(&m, Which::G);
        let gt = christoffel(&m, Which::Gt);
        let f = fundamental_f(&m, &g);
        let th = theta(&m, &f);
        assert!(max_abs3(&deformation_tensor(&m, &th)) < 1e-14);
        assert!(max_abs3(&deformation_from_connections(&g, &gt)) < 1e-14);
        assert!(max_abs3(&nabla_q(&g)) < 1e-14);
    }

    #[test]
    fn two_routes_agree_at_catenoid() {
        let m = at("cosh(x1)^2", "x1^2", [1.0, 0.3, 0.7]);
        let g = christoffel(&m, Which::G);
        let gt = christoffel(&m, Which::Gt);
        let th = theta(&m, &fundamental_f(&m, &g));
        let t1 = deformation_tensor(&m, &th);
        let t2 = deformation_from_connections(&g, &gt);
        assert!(max_diff3(&t1, &t2) < 1e-9);
        assert!(max_diff3(&g.gamma, &christoffel_closed_form(&m).gamma) < 1e-10);
        assert!(max_diff3(&nabla_q(&g), &nabla_q_closed_form(&m)) < 1e-10);
    }

    #[test]
    fn christoffel_derivative_matches_difference_quotient() {
        let spec = MetricSpec::parse("2 + sin(x1*x3)", "1 + x2^2 * cosh(x1)").unwrap();
        let p = [0.3, -0.5, 0.8];
        let d = christoffel_derivative(&spec.metric_at(p).unwrap(), Which::Gt);
        let h = 1e-5;
        for l in 0..3 {
            let mut pp = p;
            let mut pm = p;
            pp[l] += h;
            pm[l] -= h;
            let gp = christoffel(&spec.metric_at(pp).unwrap(), Which::Gt);
            let gm = christoffel(&spec.metric_at(pm).unwrap(), Which::Gt);
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        let fd = (gp.gamma[k][i][j] - gm.gamma[k][i][j]) / (2.0 * h);
                        assert!((fd - d[l][k][i][j]).abs() < 1e-8, "l={l} k={k} i={i} j={j}");
                    }
                }
            }
        }
    }
}
