//! Double-double evaluation for the finite-difference oracle.
//!
//! A second difference at step `h` cancels all but about `h²/ε` of the
//! significand, so in plain `f64` the Hessian estimate at `h = 1e-5` carries
//! rounding noise near `1e-6·|f|`. Evaluating the stencil in double-double
//! pushes that noise well below the `O(h²)` truncation error.

use super::ast::{BinOp, Expr, Func};
use super::{check_pow_domain, domain, integer_exponent, EvalError};
use twofloat::TwoFloat;

/// `a / b` with one Newton correction; the library quotient alone is only
/// about as accurate as `f64`.
fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b;
    q + (a - q * b) / b
}

/// `exp` by reduction `v = k·ln 2 + r`, a Taylor series for `r/2¹⁰`, and ten
/// squarings.
fn exp(v: TwoFloat) -> TwoFloat {
    if !(v.hi().abs() < 700.0) {
        return v.exp();
    }
    let k = (v.hi() / std::f64::consts::LN_2).round();
    let r = v - twofloat::consts::LN_2 * k;
    let s = r * (1.0 / 1024.0);
    let mut p = TwoFloat::from(1.0);
    for n in (1..=12).rev() {
        p = div(s * p, TwoFloat::from(f64::from(n))) + 1.0;
    }
    for _ in 0..10 {
        p = p * p;
    }
    p * 2f64.powi(k as i32)
}

/// Natural log refined by one Newton step on `exp(y) = v`.
fn ln(v: TwoFloat) -> TwoFloat {
    let y = v.ln();
    let e = exp(y);
    y + div(v - e, e)
}

fn powi(a: TwoFloat, n: i32) -> TwoFloat {
    if n < 0 {
        div(TwoFloat::from(1.0), a.powi(-n))
    } else {
        a.powi(n)
    }
}

fn powf(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    exp(b * ln(a))
}

fn sinh_cosh(v: TwoFloat) -> (TwoFloat, TwoFloat) {
    let e = exp(v);
    let inv = div(TwoFloat::from(1.0), e);
    ((e - inv) * 0.5, (e + inv) * 0.5)
}

fn tanh(v: TwoFloat) -> TwoFloat {
    // e^{-2|v|} keeps the exponential bounded
    let e = exp(v.abs() * -2.0);
    let t = div(1.0 - e, 1.0 + e);
    if v.hi() < 0.0 {
        -t
    } else {
        t
    }
}

pub(super) fn dd_eval(e: &Expr, x: &[TwoFloat; 3], point: [f64; 3]) -> Result<TwoFloat, EvalError> {
    let out = match e {
        Expr::Num(v) => TwoFloat::from(*v),
        Expr::Var(i) => x[*i],
        Expr::Neg(a) => -dd_eval(a, x, point)?,
        Expr::Call(func, a) => {
            let v = dd_eval(a, x, point)?;
            match func {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Sinh => sinh_cosh(v).0,
                Func::Cosh => sinh_cosh(v).1,
                Func::Tanh => tanh(v),
                Func::Exp => exp(v),
                Func::Log => {
                    if v.hi() <= 0.0 {
                        return Err(domain(e, point, format!("log of non-positive {}", v.hi())));
                    }
                    ln(v)
                }
                Func::Sqrt => {
                    if v.hi() <= 0.0 {
                        return Err(domain(e, point, format!("sqrt of non-positive {}", v.hi())));
                    }
                    v.sqrt()
                }
            }
        }
        Expr::Binary(op, l, r) => {
            let a = dd_eval(l, x, point)?;
            let b = dd_eval(r, x, point)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.hi() == 0.0 {
                        return Err(domain(e, point, "division by zero"));
                    }
                    div(a, b)
                }
                BinOp::Pow => {
                    if r.is_constant() {
                        check_pow_domain(e, a.hi(), b.hi(), point)?;
                        match integer_exponent(b.hi()) {
                            Some(n) => powi(a, n),
                            None => powf(a, b),
                        }
                    } else {
                        if a.hi() <= 0.0 {
                            return Err(domain(
                                e,
                                point,
                                format!("non-positive base {} with varying exponent", a.hi()),
                            ));
                        }
                        powf(a, b)
                    }
                }
            }
        }
    };
    if !out.is_valid() {
        return Err(EvalError::NonFinite {
            subexpr: e.to_string(),
            point,
        });
    }
    Ok(out)
}
