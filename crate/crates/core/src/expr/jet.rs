//! Second-order forward-mode Taylor data over three coordinates.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, gradient and Hessian of a scalar field at one point.
///
/// Every constructor and operation fills the Hessian from its upper triangle,
/// so `hess[i][j] == hess[j][i]` holds bitwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
}

fn sym(f: impl Fn(usize, usize) -> f64) -> [[f64; 3]; 3] {
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = f(i, j);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Jet2 {
            value,
            grad: [0.0; 3],
            hess: [[0.0; 3]; 3],
        }
    }

    /// The coordinate function `x(i+1)` evaluated at `value`.
    pub fn variable(i: usize, value: f64) -> Self {
        let mut grad = [0.0; 3];
        grad[i] = 1.0;
        Jet2 {
            value,
            grad,
            hess: [[0.0; 3]; 3],
        }
    }

    /// Compose with a scalar function `f` given `f(v)`, `f'(v)`, `f''(v)`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let g = self.grad;
        Jet2 {
            value: f0,
            grad: [f1 * g[0], f1 * g[1], f1 * g[2]],
            hess: sym(|i, j| f1 * self.hess[i][j] + f2 * g[i] * g[j]),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().flatten().all(|v| v.is_finite())
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }

    pub fn tanh(&self) -> Self {
        let t = self.value.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    /// Natural logarithm; the caller checks `value > 0`.
    pub fn ln(&self) -> Self {
        let v = self.value;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    /// Square root; the caller checks `value > 0`.
    pub fn sqrt(&self) -> Self {
        let r = self.value.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.value))
    }

    /// `self^n` for a constant integer exponent.
    pub fn powi(&self, n: i32) -> Self {
        let v = self.value;
        let nf = f64::from(n);
        let (f1, f2) = match n {
            0 => (0.0, 0.0),
            1 => (1.0, 0.0),
            _ => (nf * v.powi(n - 1), nf * (nf - 1.0) * v.powi(n - 2)),
        };
        self.chain(v.powi(n), f1, f2)
    }

    /// `self^c` for a constant real exponent; the caller checks `value > 0`.
    pub fn powf(&self, c: f64) -> Self {
        let v = self.value;
        self.chain(
            v.powf(c),
            c * v.powf(c - 1.0),
            c * (c - 1.0) * v.powf(c - 2.0),
        )
    }

    /// `self^e` with a varying exponent, via `exp(e ln self)`; requires `value > 0`.
    pub fn pow(&self, e: &Jet2) -> Self {
        (*e * self.ln()).exp()
    }

    pub fn recip(&self) -> Self {
        let v = self.value;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            grad: [
                self.grad[0] + o.grad[0],
                self.grad[1] + o.grad[1],
                self.grad[2] + o.grad[2],
            ],
            hess: sym(|i, j| self.hess[i][j] + o.hess[i][j]),
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            value: -self.value,
            grad: self.grad.map(|g| -g),
            hess: sym(|i, j| -self.hess[i][j]),
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let (a, b) = (self, o);
        Jet2 {
            value: a.value * b.value,
            grad: [
                a.grad[0] * b.value + a.value * b.grad[0],
                a.grad[1] * b.value + a.value * b.grad[1],
                a.grad[2] * b.value + a.value * b.grad[2],
            ],
            hess: sym(|i, j| {
                a.hess[i][j] * b.value
                    + a.value * b.hess[i][j]
                    + a.grad[i] * b.grad[j]
                    + a.grad[j] * b.grad[i]
            }),
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: f64) -> Jet2 {
        self * Jet2::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: [f64; 3]) -> [Jet2; 3] {
        [
            Jet2::variable(0, x[0]),
            Jet2::variable(1, x[1]),
            Jet2::variable(2, x[2]),
        ]
    }

    #[test]
    fn square_of_coordinate() {
        let [x, _, _] = at([3.0, 0.0, 0.0]);
        let j = x * x;
        assert_eq!(j.value, 9.0);
        assert_eq!(j.grad, [6.0, 0.0, 0.0]);
        assert_eq!(j.hess[0][0], 2.0);
        assert_eq!(j.hess[1][1], 0.0);
    }

    #[test]
    fn bilinear_hessian() {
        let [x, y, _] = at([1.0, 2.0, 0.0]);
        let j = x * y;
        assert_eq!(j.grad, [2.0, 1.0, 0.0]);
        assert_eq!(j.hess[0][1], 1.0);
        assert_eq!(j.hess[1][0], 1.0);
        assert_eq!(j.hess[0][0], 0.0);
    }

    #[test]
    fn quotient_matches_product_with_reciprocal_rule() {
        // d/dx (1/x) = -1/x², d² = 2/x³
        let [x, _, _] = at([2.0, 0.0, 0.0]);
        let r = Jet2::constant(1.0) / x;
        assert_eq!(r.value, 0.5);
        assert_eq!(r.grad[0], -0.25);
        assert_eq!(r.hess[0][0], 0.25);
    }

    #[test]
    fn powi_edge_exponents() {
        let [x, _, _] = at([-1.5, 0.0, 0.0]);
        assert_eq!(x.powi(0).value, 1.0);
        assert_eq!(x.powi(0).grad, [0.0; 3]);
        assert_eq!(x.powi(1), x);
        let c = x.powi(3);
        assert_eq!(c.grad[0], 3.0 * 2.25);
        assert_eq!(c.hess[0][0], 6.0 * -1.5);
    }

    #[test]
    fn exp_of_log_is_identity_to_second_order() {
        let [x, y, _] = at([0.7, 1.3, 0.0]);
        let f = x * y + Jet2::constant(2.0);
        let g = f.ln().exp();
        assert!((g.value - f.value).abs() < 1e-14);
        for i in 0..3 {
            assert!((g.grad[i] - f.grad[i]).abs() < 1e-14);
            for k in 0..3 {
                assert!((g.hess[i][k] - f.hess[i][k]).abs() < 1e-13);
            }
        }
    }
}
