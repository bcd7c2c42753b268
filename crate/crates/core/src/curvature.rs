//! Riemann and Ricci curvature of `g` and `g̃`, the cross traces `τ*` and `τ̃*`,
//! the tensors `π₁`, `π₂`, and the reconstruction of `R` from `ρ` in dimension 3.
//!
//! Conventions (see `docs/CONVENTIONS.md`):
//!
//! * `R(x, y)z = ∇ₓ∇ᵧz - ∇ᵧ∇ₓz - ∇₍ₓ,ᵧ₎z`, with coordinate components
//!   `R(∂ᵢ, ∂ⱼ)∂ₖ = Rˡₖᵢⱼ ∂ₗ` and
//!   `Rˡₖᵢⱼ = ∂ᵢΓˡⱼₖ - ∂ⱼΓˡᵢₖ + ΓˡᵢₘΓᵐⱼₖ - ΓˡⱼₘΓᵐᵢₖ`.
//! * `R(x, y, z, t) = g(R(x, y)z, t)`, so `Rᵢⱼₖₜ = gₗₜ Rˡₖᵢⱼ`.
//! * `ρ(y, z) = gⁱʲ R(eᵢ, y, z, eⱼ)`, `τ = gⁱʲρᵢⱼ`, `τ* = g̃ⁱʲρᵢⱼ`; the `g̃`
//!   versions swap the roles of the two metrics.

use crate::connection::{christoffel, christoffel_derivative};
use crate::error::Result;
use crate::structures::{MetricAt, MetricSpec, Which};
use crate::tensor::{eval4, trace_with, Mat3, Tensor4, Vec3, ZERO4};
use serde::{Deserialize, Serialize};

/// All-lower curvature components `r[i][j][k][l] = R(eᵢ, eⱼ, eₖ, eₗ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Riemann4 {
    pub r: Tensor4,
}

impl Riemann4 {
    pub fn eval(&self, x: &Vec3, y: &Vec3, z: &Vec3, u: &Vec3) -> f64 {
        eval4(&self.r, x, y, z, u)
    }

    /// Largest violation of `R(x,y,z,t) = -R(y,x,z,t)`.
    pub fn antisymmetry_12_residual(&self) -> f64 {
        self.residual(|r, i, j, k, l| r[i][j][k][l] + r[j][i][k][l])
    }

    /// Largest violation of `R(x,y,z,t) = -R(x,y,t,z)`.
    pub fn antisymmetry_34_residual(&self) -> f64 {
        self.residual(|r, i, j, k, l| r[i][j][k][l] + r[i][j][l][k])
    }

    /// Largest violation of `R(x,y,z,t) = R(z,t,x,y)`.
    pub fn pair_symmetry_residual(&self) -> f64 {
        self.residual(|r, i, j, k, l| r[i][j][k][l] - r[k][l][i][j])
    }

    /// Largest violation of the first Bianchi identity in the first three slots.
    pub fn bianchi_residual(&self) -> f64 {
        self.residual(|r, i, j, k, l| r[i][j][k][l] + r[j][k][i][l] + r[k][i][j][l])
    }

    /// Worst of the four symmetry residuals.
    pub fn symmetry_residual(&self) -> f64 {
        self.antisymmetry_12_residual()
            .max(self.antisymmetry_34_residual())
            .max(self.pair_symmetry_residual())
            .max(self.bianchi_residual())
    }

    fn residual(&self, f: impl Fn(&Tensor4, usize, usize, usize, usize) -> f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        worst = worst.max(f(&self.r, i, j, k, l).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Curvature of the Levi-Civita connection of the chosen metric, lowered with
/// that same metric.
pub fn riemann(m: &MetricAt, which: Which) -> Riemann4 {
    let gamma = christoffel(m, which).gamma;
    let dgamma = christoffel_derivative(m, which);
    let metric = m.metric(which);
    // up[l][k][i][j] = Rˡₖᵢⱼ
    let mut up = ZERO4;
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for n in 0..3 {
                        v += gamma[l][i][n] * gamma[n][j][k] - gamma[l][j][n] * gamma[n][i][k];
                    }
                    up[l][k][i][j] = v;
                }
            }
        }
    }
    let mut r = ZERO4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for t in 0..3 {
                    r[i][j][k][t] = (0..3).map(|l| metric[l][t] * up[l][k][i][j]).sum();
                }
            }
        }
    }
    Riemann4 { r }
}

/// Convenience wrapper evaluating the metric first.
pub fn riemann_at(spec: &MetricSpec, point: Vec3, which: Which) -> Result<Riemann4> {
    Ok(riemann(&spec.metric_at(point)?, which))
}

/// Ricci tensor with its two scalar traces.
///
/// For `g` these are `ρ`, `τ = gⁱʲρᵢⱼ`, `τ* = g̃ⁱʲρᵢⱼ`; for `g̃` they are `ρ̃`,
/// `τ̃ = g̃ⁱʲρ̃ᵢⱼ`, `τ̃* = gⁱʲρ̃ᵢⱼ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciData {
    pub rho: Mat3,
    pub tau: f64,
    pub tau_star: f64,
}

impl RicciData {
    pub fn eval(&self, x: &Vec3, y: &Vec3) -> f64 {
        crate::tensor::bilinear(&self.rho, x, y)
    }

    /// Builds traces from a given Ricci matrix.
    pub fn from_rho(rho: Mat3, m: &MetricAt, which: Which) -> Self {
        let other = match which {
            Which::G => Which::Gt,
            Which::Gt => Which::G,
        };
        RicciData {
            rho,
            tau: trace_with(m.inverse(which), &rho),
            tau_star: trace_with(m.inverse(other), &rho),
        }
    }
}

/// `ρ(y, z) = hⁱʲ R(eᵢ, y, z, eⱼ)` with `h` the chosen metric.
pub fn ricci(r: &Riemann4, m: &MetricAt, which: Which) -> RicciData {
    let inv = m.inverse(which);
    let mut rho = [[0.0; 3]; 3];
    for y in 0..3 {
        for z in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += inv[i][j] * r.r[i][y][z][j];
                }
            }
            rho[y][z] = s;
        }
    }
    RicciData::from_rho(rho, m, which)
}

/// `π₁(x,y,z,u) = g(y,z)g(x,u) - g(x,z)g(y,u)` and
/// `π₂(x,y,z,u) = g(y,z)g̃(x,u) + g(x,u)g̃(y,z) - g(x,z)g̃(y,u) - g(y,u)g̃(x,z)`.
pub fn pi_tensors(m: &MetricAt, x: &Vec3, y: &Vec3, z: &Vec3, u: &Vec3) -> (f64, f64) {
    let g = |a: &Vec3, b: &Vec3| m.inner(a, b, Which::G);
    let gt = |a: &Vec3, b: &Vec3| m.inner(a, b, Which::Gt);
    let pi1 = g(y, z) * g(x, u) - g(x, z) * g(y, u);
    let pi2 = g(y, z) * gt(x, u) + g(x, u) * gt(y, z) - g(x, z) * gt(y, u) - g(y, u) * gt(x, z);
    (pi1, pi2)
}

/// The curvature of a 3-dimensional metric expressed through its Ricci tensor:
///
/// `R(x,y,z,u) = -g(x,z)ρ(y,u) - g(y,u)ρ(x,z) + g(y,z)ρ(x,u) + g(x,u)ρ(y,z)
///              + (τ/2)(g(x,z)g(y,u) - g(y,z)g(x,u))`.
pub fn reconstruct_from_ricci(
    ricci: &RicciData,
    m: &MetricAt,
    x: &Vec3,
    y: &Vec3,
    z: &Vec3,
    u: &Vec3,
) -> f64 {
    let g = |a: &Vec3, b: &Vec3| m.inner(a, b, Which::G);
    let rho = |a: &Vec3, b: &Vec3| ricci.eval(a, b);
    -g(x, z) * rho(y, u) - g(y, u) * rho(x, z)
        + g(y, z) * rho(x, u)
        + g(x, u) * rho(y, z)
        + 0.5 * ricci.tau * (g(x, z) * g(y, u) - g(y, z) * g(x, u))
}

/// `R = ((τ + τ*)/4) π₁ + ((3τ* + τ)/8) π₂`, the curvature predicted for an
/// almost Einstein point.
pub fn almost_einstein_r(
    tau: f64,
    tau_star: f64,
    m: &MetricAt,
    x: &Vec3,
    y: &Vec3,
    z: &Vec3,
    u: &Vec3,
) -> f64 {
    let (pi1, pi2) = pi_tensors(m, x, y, z, u);
    (tau + tau_star) / 4.0 * pi1 + (3.0 * tau_star + tau) / 8.0 * pi2
}

fn basis(i: usize) -> Vec3 {
    let mut e = [0.0; 3];
    e[i] = 1.0;
    e
}

fn tabulate(f: impl Fn(&Vec3, &Vec3, &Vec3, &Vec3) -> f64) -> Tensor4 {
    let mut out = ZERO4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[i][j][k][l] = f(&basis(i), &basis(j), &basis(k), &basis(l));
                }
            }
        }
    }
    out
}

/// Coordinate components of [`reconstruct_from_ricci`].
pub fn reconstruct_tensor(ricci: &RicciData, m: &MetricAt) -> Tensor4 {
    tabulate(|x, y, z, u| reconstruct_from_ricci(ricci, m, x, y, z, u))
}

/// Coordinate components of [`almost_einstein_r`].
pub fn almost_einstein_tensor(tau: f64, tau_star: f64, m: &MetricAt) -> Tensor4 {
    tabulate(|x, y, z, u| almost_einstein_r(tau, tau_star, m, x, y, z, u))
}
