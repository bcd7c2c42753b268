//! Scalar-field expressions: parsing, jet evaluation, and a finite-difference oracle.

mod ast;
mod jet;
mod oracle;
mod parser;

pub use ast::{BinOp, Expr, Func, VarIndex};
pub use jet::Jet2;
pub use parser::ParseError;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;
use twofloat::TwoFloat;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error in `{subexpr}` at point {point:?}: {reason}")]
    Domain {
        subexpr: String,
        point: [f64; 3],
        reason: String,
    },
    #[error("non-finite result in `{subexpr}` at point {point:?}")]
    NonFinite { subexpr: String, point: [f64; 3] },
}

/// A parsed metric coefficient over `(x1, x2, x3)`.
///
/// Immutable after parsing; evaluation borrows it, so a field can be shared
/// across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    ast: Expr,
    source: String,
}

impl ScalarField {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let ast = parser::parse_expr(source)?;
        Ok(ScalarField {
            ast,
            source: source.to_string(),
        })
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Canonical printed form (see [`Expr`]'s `Display`).
    pub fn canonical(&self) -> String {
        self.ast.to_string()
    }

    /// Value, gradient and Hessian at `point`, exact up to rounding.
    pub fn eval_jet2(&self, point: [f64; 3]) -> Result<Jet2, EvalError> {
        let vars = [
            Jet2::variable(0, point[0]),
            Jet2::variable(1, point[1]),
            Jet2::variable(2, point[2]),
        ];
        jet_eval(&self.ast, &vars, point)
    }

    /// Plain value at `point`.
    pub fn eval(&self, point: [f64; 3]) -> Result<f64, EvalError> {
        value_eval(&self.ast, point)
    }

    /// Central-difference estimate of value, gradient and Hessian.
    ///
    /// Never touches the jet path: the stencil points are evaluated with a
    /// separate double-double interpreter, so that rounding noise stays far
    /// below the `O(step²)` truncation error of both estimates.
    pub fn fd_oracle(&self, point: [f64; 3], step: f64) -> Result<Jet2, EvalError> {
        assert!(step > 0.0, "finite-difference step must be positive");
        let h = TwoFloat::from(step);
        let base = point.map(TwoFloat::from);
        let f = |d: [i32; 3]| -> Result<TwoFloat, EvalError> {
            let x = [0, 1, 2].map(|i| base[i] + h * f64::from(d[i]));
            oracle::dd_eval(&self.ast, &x, point)
        };
        let unit = |i: usize, s: i32| {
            let mut d = [0; 3];
            d[i] = s;
            d
        };
        let f0 = f([0; 3])?;
        let mut grad = [0.0; 3];
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            let fp = f(unit(i, 1))?;
            let fm = f(unit(i, -1))?;
            grad[i] = ((fp - fm) / (h * 2.0)).hi();
            hess[i][i] = ((fp - f0 * 2.0 + fm) / (h * h)).hi();
            for j in (i + 1)..3 {
                let mut pp = [0; 3];
                pp[i] = 1;
                pp[j] = 1;
                let mut pm = pp;
                pm[j] = -1;
                let mut mp = pp;
                mp[i] = -1;
                let mm = pp.map(|v| -v);
                let v = ((f(pp)? - f(pm)? - f(mp)? + f(mm)?) / (h * h * 4.0)).hi();
                hess[i][j] = v;
                hess[j][i] = v;
            }
        }
        Ok(Jet2 {
            value: f0.hi(),
            grad,
            hess,
        })
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ast)
    }
}

impl FromStr for ScalarField {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScalarField::parse(s)
    }
}

impl Serialize for ScalarField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for ScalarField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ScalarField::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn domain(e: &Expr, point: [f64; 3], reason: impl Into<String>) -> EvalError {
    EvalError::Domain {
        subexpr: e.to_string(),
        point,
        reason: reason.into(),
    }
}

/// Integer exponent if `c` is a whole number representable as `i32`.
fn integer_exponent(c: f64) -> Option<i32> {
    if c.fract() == 0.0 && c.abs() <= f64::from(i32::MAX) {
        Some(c as i32)
    } else {
        None
    }
}

fn jet_eval(e: &Expr, vars: &[Jet2; 3], point: [f64; 3]) -> Result<Jet2, EvalError> {
    let out = match e {
        Expr::Num(v) => Jet2::constant(*v),
        Expr::Var(i) => vars[*i],
        Expr::Neg(a) => -jet_eval(a, vars, point)?,
        Expr::Call(func, a) => {
            let x = jet_eval(a, vars, point)?;
            match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => x.tanh(),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x.value <= 0.0 {
                        return Err(domain(e, point, format!("log of non-positive {}", x.value)));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x.value <= 0.0 {
                        return Err(domain(
                            e,
                            point,
                            format!("sqrt of non-positive {}", x.value),
                        ));
                    }
                    x.sqrt()
                }
            }
        }
        Expr::Binary(op, l, r) => {
            let a = jet_eval(l, vars, point)?;
            match op {
                BinOp::Add => a + jet_eval(r, vars, point)?,
                BinOp::Sub => a - jet_eval(r, vars, point)?,
                BinOp::Mul => a * jet_eval(r, vars, point)?,
                BinOp::Div => {
                    let b = jet_eval(r, vars, point)?;
                    if b.value == 0.0 {
                        return Err(domain(e, point, "division by zero"));
                    }
                    a / b
                }
                BinOp::Pow => {
                    if r.is_constant() {
                        let c = value_eval(r, point)?;
                        check_pow_domain(e, a.value, c, point)?;
                        match integer_exponent(c) {
                            Some(n) => a.powi(n),
                            None => a.powf(c),
                        }
                    } else {
                        if a.value <= 0.0 {
                            return Err(domain(
                                e,
                                point,
                                format!("non-positive base {} with varying exponent", a.value),
                            ));
                        }
                        a.pow(&jet_eval(r, vars, point)?)
                    }
                }
            }
        }
    };
    if !out.is_finite() {
        return Err(EvalError::NonFinite {
            subexpr: e.to_string(),
            point,
        });
    }
    Ok(out)
}

fn check_pow_domain(e: &Expr, base: f64, c: f64, point: [f64; 3]) -> Result<(), EvalError> {
    match integer_exponent(c) {
        Some(n) if n < 0 && base == 0.0 => {
            Err(domain(e, point, "zero base with negative exponent"))
        }
        Some(_) => Ok(()),
        None if base <= 0.0 => Err(domain(
            e,
            point,
            format!("non-positive base {base} with non-integer exponent {c}"),
        )),
        None => Ok(()),
    }
}

fn value_eval(e: &Expr, point: [f64; 3]) -> Result<f64, EvalError> {
    let out = match e {
        Expr::Num(v) => *v,
        Expr::Var(i) => point[*i],
        Expr::Neg(a) => -value_eval(a, point)?,
        Expr::Call(func, a) => {
            let x = value_eval(a, point)?;
            match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => x.tanh(),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(domain(e, point, format!("log of non-positive {x}")));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x <= 0.0 {
                        return Err(domain(e, point, format!("sqrt of non-positive {x}")));
                    }
                    x.sqrt()
                }
            }
        }
        Expr::Binary(op, l, r) => {
            let a = value_eval(l, point)?;
            let b = value_eval(r, point)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(domain(e, point, "division by zero"));
                    }
                    a / b
                }
                BinOp::Pow => {
                    if r.is_constant() {
                        check_pow_domain(e, a, b, point)?;
                        match integer_exponent(b) {
                            Some(n) => a.powi(n),
                            None => a.powf(b),
                        }
                    } else {
                        if a <= 0.0 {
                            return Err(domain(
                                e,
                                point,
                                format!("non-positive base {a} with varying exponent"),
                            ));
                        }
                        a.powf(b)
                    }
                }
            }
        }
    };
    if !out.is_finite() {
        return Err(EvalError::NonFinite {
            subexpr: e.to_string(),
            point,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &str) -> ScalarField {
        ScalarField::parse(s).unwrap()
    }

    #[test]
    fn cosh_squared_at_origin() {
        let j = field("cosh(x1)^2").eval_jet2([0.0, 0.4, -0.2]).unwrap();
        assert_eq!(j.value, 1.0);
        assert_eq!(j.grad, [0.0, 0.0, 0.0]);
        assert_eq!(j.hess[0][0], 2.0);
    }

    #[test]
    fn cosh_squared_gradient_at_one() {
        // d/du cosh²u = sinh 2u
        let j = field("cosh(x1)^2").eval_jet2([1.0, 0.0, 0.0]).unwrap();
        assert!((j.grad[0] - 2f64.sinh()).abs() < 1e-14);
        assert!((j.grad[0] - 3.626860).abs() < 1e-6);
        assert!((j.hess[0][0] - 2.0 * 2f64.cosh()).abs() < 1e-13);
    }

    #[test]
    fn log_at_zero_is_domain_error() {
        let f = field("log(x1)");
        assert!(matches!(
            f.eval_jet2([0.0; 3]),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            f.fd_oracle([0.0; 3], 1e-5),
            Err(EvalError::Domain { .. })
        ));
    }

    #[test]
    fn domain_error_names_subexpression() {
        let err = field("1 + sqrt(x2 - 1)")
            .eval_jet2([0.0, 0.5, 0.0])
            .unwrap_err();
        match err {
            EvalError::Domain { subexpr, point, .. } => {
                assert_eq!(subexpr, "sqrt(x2 - 1)");
                assert_eq!(point, [0.0, 0.5, 0.0]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            field("1 / x3").eval_jet2([1.0, 1.0, 0.0]),
            Err(EvalError::Domain { .. })
        ));
    }

    #[test]
    fn pow_domain_rules() {
        // integer exponent on a negative base is fine
        let j = field("x1^3").eval_jet2([-2.0, 0.0, 0.0]).unwrap();
        assert_eq!(j.value, -8.0);
        assert_eq!(j.grad[0], 12.0);
        // non-integer exponent on a negative base is not
        assert!(matches!(
            field("x1^0.5").eval_jet2([-2.0, 0.0, 0.0]),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            field("x1^-1").eval_jet2([0.0, 0.0, 0.0]),
            Err(EvalError::Domain { .. })
        ));
        // varying exponent needs a positive base
        assert!(matches!(
            field("x1^x2").eval_jet2([-1.0, 2.0, 0.0]),
            Err(EvalError::Domain { .. })
        ));
        let j = field("x1^x2").eval_jet2([2.0, 3.0, 0.0]).unwrap();
        assert!((j.value - 8.0).abs() < 1e-14);
    }

    #[test]
    fn overflow_is_non_finite() {
        assert!(matches!(
            field("exp(x1)").eval_jet2([1000.0, 0.0, 0.0]),
            Err(EvalError::NonFinite { .. })
        ));
    }

    #[test]
    fn fd_oracle_on_bilinear() {
        let j = field("x1*x2").fd_oracle([1.0, 2.0, 0.0], 1e-5).unwrap();
        assert!((j.grad[0] - 2.0).abs() < 1e-9);
        assert!((j.grad[1] - 1.0).abs() < 1e-9);
        assert!(j.grad[2].abs() < 1e-12);
        assert!((j.hess[0][1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn serde_uses_source_text() {
        let f = field("cosh(x1)^2");
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "\"cosh(x1)^2\"");
        let back: ScalarField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
