//! The fixed structures `Q`, `P = Q²`, the metric `g = diag(A, A, B)` and the
//! associated metric `g̃(x, y) = g(x, Py) = diag(-A, -A, B)`.

use crate::error::{Coefficient, Error, Result};
use crate::expr::{Jet2, ScalarField};
use crate::tensor::{bilinear, diag, mat_vec, Mat3, Tensor3, Tensor4, Vec3, ZERO3, ZERO4};
use serde::{Deserialize, Serialize};

/// Selects `g` or the associated metric `g̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    G,
    Gt,
}

impl Which {
    /// Sign of the (1,1) and (2,2) entries relative to `A`.
    fn horizontal_sign(self) -> f64 {
        match self {
            Which::G => 1.0,
            Which::Gt => -1.0,
        }
    }
}

/// Rotation by a quarter turn in the `x1 x2` plane: `(x1, x2, x3) ↦ (-x2, x1, x3)`.
///
/// `components()[k][j]` is the `k`-th component of `Q eⱼ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QStructure;

impl QStructure {
    pub const MATRIX: Mat3 = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];

    pub fn components(&self) -> Mat3 {
        Self::MATRIX
    }

    /// Component matrix of `Q^power` (taken mod 4).
    pub fn power(&self, power: u32) -> Mat3 {
        let mut m = diag([1.0, 1.0, 1.0]);
        for _ in 0..(power % 4) {
            m = crate::tensor::mat_mul(&Self::MATRIX, &m);
        }
        m
    }
}

/// `P = Q² = diag(-1, -1, 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PStructure;

impl PStructure {
    pub const DIAG: Vec3 = [-1.0, -1.0, 1.0];

    pub fn components(&self) -> Mat3 {
        diag(Self::DIAG)
    }

    pub fn trace(&self) -> f64 {
        Self::DIAG.iter().sum()
    }
}

/// `Q^power v`, power taken mod 4.
pub fn q_apply(v: Vec3, power: u32) -> Vec3 {
    let mut out = v;
    for _ in 0..(power % 4) {
        out = [-out[1], out[0], out[2]];
    }
    out
}

pub fn p_apply(v: Vec3) -> Vec3 {
    [-v[0], -v[1], v[2]]
}

/// The two metric coefficients `A` and `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    #[serde(rename = "A")]
    pub a: ScalarField,
    #[serde(rename = "B")]
    pub b: ScalarField,
}

impl MetricSpec {
    pub fn new(a: ScalarField, b: ScalarField) -> Self {
        MetricSpec { a, b }
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Ok(MetricSpec {
            a: ScalarField::parse(a)?,
            b: ScalarField::parse(b)?,
        })
    }

    pub fn flat() -> Self {
        MetricSpec::parse("1", "1").expect("constant metric parses")
    }

    /// Pointwise metric data; fails unless `A > 0` and `B > 0` at `point`.
    pub fn metric_at(&self, point: Vec3) -> Result<MetricAt> {
        MetricAt::new(self.a.eval_jet2(point)?, self.b.eval_jet2(point)?, point)
    }
}

/// Everything the connection and curvature code needs at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricAt {
    pub point: Vec3,
    pub jet_a: Jet2,
    pub jet_b: Jet2,
    pub g: Mat3,
    pub g_inv: Mat3,
    pub gt: Mat3,
    pub gt_inv: Mat3,
}

impl MetricAt {
    pub fn new(jet_a: Jet2, jet_b: Jet2, point: Vec3) -> Result<Self> {
        for (coefficient, value) in [(Coefficient::A, jet_a.value), (Coefficient::B, jet_b.value)] {
            if !(value > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    coefficient,
                    value,
                    point,
                });
            }
        }
        let (a, b) = (jet_a.value, jet_b.value);
        Ok(MetricAt {
            point,
            jet_a,
            jet_b,
            g: diag([a, a, b]),
            g_inv: diag([1.0 / a, 1.0 / a, 1.0 / b]),
            gt: diag([-a, -a, b]),
            gt_inv: diag([-1.0 / a, -1.0 / a, 1.0 / b]),
        })
    }

    pub fn a(&self) -> f64 {
        self.jet_a.value
    }

    pub fn b(&self) -> f64 {
        self.jet_b.value
    }

    pub fn metric(&self, which: Which) -> &Mat3 {
        match which {
            Which::G => &self.g,
            Which::Gt => &self.gt,
        }
    }

    pub fn inverse(&self, which: Which) -> &Mat3 {
        match which {
            Which::G => &self.g_inv,
            Which::Gt => &self.gt_inv,
        }
    }

    /// `d[a][i][j] = ∂ₐ gᵢⱼ` for the chosen metric.
    pub fn dmetric(&self, which: Which) -> Tensor3 {
        let s = which.horizontal_sign();
        let mut d = ZERO3;
        for a in 0..3 {
            d[a][0][0] = s * self.jet_a.grad[a];
            d[a][1][1] = s * self.jet_a.grad[a];
            d[a][2][2] = self.jet_b.grad[a];
        }
        d
    }

    /// `d[a][b][i][j] = ∂ₐ∂_b gᵢⱼ` for the chosen metric.
    pub fn ddmetric(&self, which: Which) -> Tensor4 {
        let s = which.horizontal_sign();
        let mut d = ZERO4;
        for a in 0..3 {
            for b in 0..3 {
                d[a][b][0][0] = s * self.jet_a.hess[a][b];
                d[a][b][1][1] = s * self.jet_a.hess[a][b];
                d[a][b][2][2] = self.jet_b.hess[a][b];
            }
        }
        d
    }

    /// `vᵀ g w` or `vᵀ g̃ w`.
    pub fn inner(&self, v: &Vec3, w: &Vec3, which: Which) -> f64 {
        bilinear(self.metric(which), v, w)
    }

    /// Raise an index with the chosen inverse metric.
    pub fn raise(&self, form: &Vec3, which: Which) -> Vec3 {
        mat_vec(self.inverse(which), form)
    }

    /// `(A₃, B₁, B₂)`: the derivatives whose vanishing makes `P` parallel.
    pub fn product_obstruction(&self) -> [f64; 3] {
        [self.jet_a.grad[2], self.jet_b.grad[0], self.jet_b.grad[1]]
    }
}
